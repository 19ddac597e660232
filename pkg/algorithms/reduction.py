import logging
from typing import Dict, List

from catalog import catalog
from utils.canonical import canonicalize
from utils.errors import ArityMismatchError, NotMinimalError
from utils.query import ConjunctiveQuery, Schema
from .base import RestrictionResult, RestrictionType, check_2cq
from .homomorphism import contains, core, equivalent, is_minimal, strictly_contains

logger = logging.getLogger(__name__)

# Tipos cujas restrições passam pelo filtro de maximalidade
FILTERED_TYPES = (RestrictionType.TYPE1, RestrictionType.TYPE3, RestrictionType.TYPE4)


def generate_restrictions(query: ConjunctiveQuery, schema: Schema, kind) -> List[RestrictionResult]:
    """
    Gera as restrições de um tipo.

    Args:
        query: 2CQ válida sobre o esquema
        schema: Esquema
        kind: Tipo da restrição (RestrictionType, 'type1', 2, ...)

    Returns:
        Restrições sintaticamente distintas, ordenadas pelo texto canônico
    """
    operator = catalog.get_operator(kind, schema)
    return operator.generate(query)


def reduced_restrictions(query: ConjunctiveQuery, schema: Schema) -> List[ConjunctiveQuery]:
    """
    Calcula o conjunto reduzido de restrições RR(Q).

    Os cores das restrições dos tipos 1, 3 e 4 que são estritamente contidas
    em Q formam os candidatos; ficam os que não estão estritamente contidos
    em nenhum outro candidato. A eles se juntam todas as restrições do tipo 2.

    Args:
        query: 2CQ minimal sobre o esquema
        schema: Esquema

    Returns:
        Consultas canônicas e minimais, sem repetição, ordenadas pelo texto canônico

    Raises:
        NotA2CQError: Alguma relação aparece mais de duas vezes
        NotMinimalError: A consulta não é o seu próprio core
    """
    check_2cq(query, schema)
    if not is_minimal(query):
        raise NotMinimalError(f"A consulta não é minimal: {query.render()}")

    candidates: Dict[str, ConjunctiveQuery] = {}
    for tag in FILTERED_TYPES:
        for result in generate_restrictions(query, schema, tag):
            reduced = core(result.query)
            if contains(query, reduced):
                continue  # equivalente a Q
            candidates.setdefault(canonicalize(reduced), reduced)

    members: Dict[str, ConjunctiveQuery] = {}
    for key, candidate in candidates.items():
        if not any(strictly_contains(candidate, other)
                   for other_key, other in candidates.items() if other_key != key):
            members[key] = candidate

    for result in generate_restrictions(query, schema, RestrictionType.TYPE2):
        reduced = core(result.query)
        members.setdefault(canonicalize(reduced), reduced)

    logger.debug("RR(%s): %d consultas (%d candidatas)", query.render(), len(members), len(candidates))
    return [members[key] for key in sorted(members)]


def is_maximally_contained(q1: ConjunctiveQuery, q2: ConjunctiveQuery, schema: Schema) -> bool:
    """
    Decide se ``q1`` está maximalmente contida em ``q2``.

    Ambas são reduzidas ao core; vale se o core de ``q1`` é equivalente a
    algum membro de RR(core(q2)).

    Raises:
        ArityMismatchError: Aridades diferentes
        SchemaMismatchError: Alguma consulta não está sobre o esquema
        NotA2CQError: Alguma consulta não é 2CQ
    """
    if q1.arity != q2.arity:
        raise ArityMismatchError(
            f"Consultas de aridades diferentes ({q1.arity} e {q2.arity})")
    check_2cq(q1, schema)
    check_2cq(q2, schema)

    lower, upper = core(q1), core(q2)
    return any(equivalent(lower, member) for member in reduced_restrictions(upper, schema))
