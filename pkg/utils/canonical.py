"""
Forma canônica de consultas conjuntivas (a menos de renomeação e reordenação).

As variáveis da cabeça recebem os primeiros números, na ordem em que
aparecem. Depois os átomos são emitidos um a um: a cada passo escolhe-se o
átomo de menor código (relação, argumentos numerados), numerando as
variáveis novas na ordem de ocorrência. Empates são resolvidos por busca
exaustiva, ficando a menor codificação completa; ramos cujo prefixo já é
maior que o melhor encontrado são podados.
"""
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from utils.query import Atom, ConjunctiveQuery

Code = Tuple[str, Tuple[int, ...]]


def _encode(atom: Atom, numbering: Dict[str, int]) -> Tuple[Code, Dict[str, int]]:
    fresh: Dict[str, int] = {}
    args = []
    for var in atom.args:
        if var in numbering:
            args.append(numbering[var])
        else:
            if var not in fresh:
                fresh[var] = len(numbering) + len(fresh)
            args.append(fresh[var])
    return (atom.relation, tuple(args)), fresh


class _Labeling:
    def __init__(self):
        self.encoding: Optional[Tuple[Code, ...]] = None

    def search(self, remaining: Sequence[Atom], numbering: Dict[str, int], prefix: List[Code]):
        if not remaining:
            candidate = tuple(prefix)
            if self.encoding is None or candidate < self.encoding:
                self.encoding = candidate
            return

        encoded = [_encode(atom, numbering) for atom in remaining]
        smallest = min(code for code, _ in encoded)
        if self.encoding is not None:
            depth = len(prefix)
            if tuple(prefix) + (smallest,) > self.encoding[:depth + 1]:
                return

        for index, (code, fresh) in enumerate(encoded):
            if code != smallest:
                continue
            numbering.update(fresh)
            prefix.append(code)
            self.search(remaining[:index] + remaining[index + 1:], numbering, prefix)
            prefix.pop()
            for var in fresh:
                del numbering[var]


def variable_name(index: int) -> str:
    return f"v{index}"


@lru_cache(maxsize=None)
def canonical_form(query: ConjunctiveQuery) -> ConjunctiveQuery:
    """
    Retorna o representante canônico da consulta.

    Duas consultas que diferem apenas por uma bijeção de variáveis e/ou pela
    ordem dos átomos têm o mesmo representante.

    Args:
        query: Consulta válida

    Returns:
        Consulta com variáveis ``v0, v1, ...`` e átomos em ordem canônica
    """
    numbering: Dict[str, int] = {}
    for var in query.head:
        numbering.setdefault(var, len(numbering))
    head = tuple(variable_name(numbering[var]) for var in query.head)

    labeling = _Labeling()
    labeling.search(tuple(query.body), numbering, [])
    body = tuple(Atom(relation, tuple(variable_name(i) for i in args))
                 for relation, args in labeling.encoding)
    return ConjunctiveQuery(head, body)


def canonicalize(query: ConjunctiveQuery) -> str:
    """Texto canônico da consulta (idempotente e estável sob renomeação)."""
    return canonical_form(query).render()
