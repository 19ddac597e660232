"""
Consultas de caminho orientado (OPQ) sobre uma única relação binária.

Uma OPQ de comprimento n é representada por uma sequência de bits k: o
i-ésimo átomo é E(z_i, z_{i+1}) se o bit é 1 e E(z_{i+1}, z_i) se é 0.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from utils.config import DEFAULTS
from utils.errors import QueryError
from utils.query import RELATION_NAME, Atom, ConjunctiveQuery
from utils.visualization import create_chain_table
from .homomorphism import contains, core, equivalent, is_minimal

logger = logging.getLogger(__name__)

# (consulta, reversão, minimal); reversão vazia = igual à consulta, minimal vazio = já é minimal
OPQ_TABLE: Tuple[Tuple[str, str, str], ...] = (
    ("1", "0", ""),
    ("11", "00", ""),
    ("10", "01", "1"),
    ("111", "000", ""),
    ("110", "100", "11"),
    ("001", "011", "11"),
    ("101", "010", "1"),
    ("1111", "0000", ""),
    ("1110", "1000", "111"),
    ("0111", "0001", "111"),
    ("1101", "0100", "11"),
    ("1011", "0010", "11"),
    ("1001", "0110", "11"),
    ("1100", "", "11"),
    ("0011", "", "11"),
    ("1010", "", "1"),
    ("0101", "", "1"),
)


def _check_bits(bits: str) -> str:
    bits = str(bits)
    if not bits:
        raise QueryError("A sequência de bits da consulta de caminho está vazia")
    if set(bits) - {"0", "1"}:
        raise QueryError(f"Sequência de bits inválida: '{bits}'")
    return bits


def _check_relation(relation: str) -> str:
    if not RELATION_NAME.fullmatch(str(relation)):
        raise QueryError(f"Nome de relação inválido para a OPQ: '{relation}'")
    return relation


def opq_query(bits: str, relation: str = DEFAULTS.opq_relation) -> ConjunctiveQuery:
    """
    Constrói a OPQ O_bits.

    Args:
        bits: Sequência não vazia de '0' e '1'
        relation: Nome da relação binária

    Returns:
        Consulta booleana com n átomos sobre z1, ..., z(n+1)
    """
    bits = _check_bits(bits)
    relation = _check_relation(relation)
    body = []
    for i, bit in enumerate(bits, start=1):
        left, right = f"z{i}", f"z{i + 1}"
        body.append(Atom(relation, (left, right) if bit == "1" else (right, left)))
    return ConjunctiveQuery((), tuple(body))


def path_query(n: int, relation: str = DEFAULTS.opq_relation) -> ConjunctiveQuery:
    """Consulta de caminho P_n (todos os átomos para frente)."""
    return opq_query("1" * n, relation)


def reverse_opq(bits: str) -> str:
    """Lê o caminho da direita para a esquerda: inverte a sequência e complementa os bits."""
    bits = _check_bits(bits)
    return "".join("1" if bit == "0" else "0" for bit in reversed(bits))


def pumped_bits(i: int) -> str:
    if i < 0:
        raise QueryError(f"Índice negativo: {i}")
    return "111" if i == 0 else "11" + "01" * i + "1"


def pumped_query(i: int, relation: str = DEFAULTS.opq_relation) -> ConjunctiveQuery:
    """Q_0 = O_111 e Q_i = O_{11(01)^i 1} para i >= 1."""
    return opq_query(pumped_bits(i), relation)


def all_bit_strings(max_length: int) -> List[str]:
    """Todas as sequências de comprimento 1 a ``max_length``, por comprimento e depois em ordem."""
    return ["".join(bits) for n in range(1, max_length + 1) for bits in product("10", repeat=n)]


def equivalent_path_length(bits: str, relation: str = DEFAULTS.opq_relation) -> Optional[int]:
    """Menor k <= n com O_bits equivalente a P_k, ou None."""
    query = opq_query(bits, relation)
    for k in range(1, len(bits) + 1):
        if equivalent(query, path_query(k, relation)):
            return k
    return None


@dataclass
class ChainReport:
    bound: int
    table: pd.DataFrame

    @property
    def passed(self) -> bool:
        return bool(self.table["OK"].all())

    def failures(self) -> pd.DataFrame:
        return self.table[~self.table["OK"]]


def check_chain(n: int = DEFAULTS.chain_bound, relation: str = DEFAULTS.opq_relation,
                progress: bool = False) -> ChainReport:
    """
    Verifica a cadeia O_111 = Q_0 ⊏ Q_1 ⊏ ... ⊏ Q_n ⊏ O_11.

    Para cada i < n, Q_i ⊑ Q_{i+1} deve valer e Q_{i+1} ⊑ Q_i não; no fim,
    Q_n ⊑ O_11 deve valer e a recíproca não.

    Args:
        n: Último índice da cadeia
        relation: Nome da relação binária
        progress: Mostra barra de progresso (tqdm)

    Returns:
        Relatório com uma linha por par verificado
    """
    if n < 0:
        raise QueryError(f"Limite negativo para a cadeia: {n}")
    names = [f"Q{i}" for i in range(n + 1)] + ["O11"]
    queries = [pumped_query(i, relation) for i in range(n + 1)] + [opq_query("11", relation)]

    rows = []
    for i in tqdm(range(n + 1), desc="Cadeia", disable=not progress):
        for left, right, expected in ((i, i + 1, True), (i + 1, i, False)):
            holds = contains(queries[left], queries[right])
            rows.append({
                "Contida": names[left],
                "Contém": names[right],
                "Esperado": expected,
                "Obtido": holds,
                "OK": holds == expected,
            })
        logger.debug("Par %s / %s: %s", names[i], names[i + 1],
                     [row["OK"] for row in rows[-2:]])

    return ChainReport(n, create_chain_table(rows))


@dataclass
class TableReport:
    table: pd.DataFrame

    @property
    def passed(self) -> bool:
        return bool(self.table["OK"].all())


def verify_opq_table(relation: str = DEFAULTS.opq_relation) -> TableReport:
    """
    Confere a tabela de equivalências entre OPQs de comprimento até 4.

    Para cada linha, a consulta da coluna de reversão (ou a própria
    consulta, se a coluna está vazia) deve ser equivalente a ela; o core
    deve ser equivalente a O_minimal, ou a consulta deve ser minimal se a
    coluna está vazia.
    """
    rows = []
    for bits, reversal, minimal in OPQ_TABLE:
        query = opq_query(bits, relation)
        mirrored = reversal or bits
        reversal_ok = equivalent(query, opq_query(mirrored, relation))
        if minimal:
            reduced = core(query)
            minimal_ok = (equivalent(reduced, opq_query(minimal, relation))
                          and len(reduced.body) == len(minimal))
        else:
            minimal_ok = is_minimal(query)
        rows.append({
            "Consulta": bits,
            "Reversão": reversal,
            "Minimal": minimal,
            "Reversão OK": reversal_ok,
            "Minimal OK": minimal_ok,
            "OK": reversal_ok and minimal_ok,
        })
    return TableReport(pd.DataFrame(rows))
