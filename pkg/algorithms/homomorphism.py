import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from utils.canonical import canonical_form
from utils.errors import ArityMismatchError
from utils.matching import ConstraintMatcher
from utils.query import ConjunctiveQuery, VarMapping

logger = logging.getLogger(__name__)


def _check_arity(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> None:
    if q1.arity != q2.arity:
        raise ArityMismatchError(
            f"Consultas de aridades diferentes ({q1.arity} e {q2.arity}): "
            f"{q1.render()} | {q2.render()}")


def _body_index(query: ConjunctiveQuery) -> Dict[str, List[Tuple[str, ...]]]:
    index: Dict[str, List[Tuple[str, ...]]] = {}
    for atom in query.body:
        index.setdefault(atom.relation, []).append(atom.args)
    return index


def find_homomorphism(source: ConjunctiveQuery,
                      target: ConjunctiveQuery) -> Optional[VarMapping]:
    """
    Procura um homomorfismo de ``source`` para ``target``.

    A cabeça de ``source`` precisa ser levada posicionalmente na cabeça de
    ``target`` (variáveis distinguidas podem ser identificadas entre si) e
    cada átomo de ``source`` precisa cair em um átomo de ``target``.

    Args:
        source: Consulta de origem
        target: Consulta de destino (mesma aridade)

    Returns:
        Mapeamento total nas variáveis de ``source``, ou None se não existir
    """
    _check_arity(source, target)
    fixed: VarMapping = {}
    for z_source, z_target in zip(source.head, target.head):
        if fixed.setdefault(z_source, z_target) != z_target:
            return None

    matcher = ConstraintMatcher(source.body, _body_index(target))
    binding = matcher.first(fixed)
    if binding is None:
        return None
    return {var: binding.get(var, fixed.get(var)) for var in source.variables}


def contains(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    """True se ``q1`` está contida em ``q2`` (existe homomorfismo de ``q2`` para ``q1``)."""
    return find_homomorphism(q2, q1) is not None


def equivalent(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    """True se a contenção vale nos dois sentidos."""
    return contains(q1, q2) and contains(q2, q1)


def strictly_contains(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    """True se ``q1`` está propriamente contida em ``q2``."""
    return contains(q1, q2) and not contains(q2, q1)


@lru_cache(maxsize=None)
def core(query: ConjunctiveQuery) -> ConjunctiveQuery:
    """
    Calcula o core da consulta.

    Os átomos são visitados na ordem canônica; cada um é removido se ainda
    existir homomorfismo da consulta atual para a consulta sem ele. Uma
    única passada basta: uma remoção que falha não volta a ser possível
    depois de outras remoções.

    Args:
        query: Consulta válida

    Returns:
        Consulta equivalente minimal, já na forma canônica
    """
    current = canonical_form(query)
    index = 0
    while index < len(current.body):
        candidate = current.without(index)
        if candidate.body and set(candidate.head) <= set(candidate.body_variables) \
                and find_homomorphism(current, candidate) is not None:
            current = candidate
        else:
            index += 1
    result = canonical_form(current)
    logger.debug("core de %s: %s", query.render(), result.render())
    return result


def is_minimal(query: ConjunctiveQuery) -> bool:
    """True se a consulta coincide com o seu core (a menos de renomeação)."""
    return len(core(query).body) == len(query.body)
