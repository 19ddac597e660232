import logging
from itertools import product
from typing import Mapping, Optional, Union

import numpy as np

from utils.config import DEFAULTS
from utils.errors import QueryError
from utils.query import (Atom, ConjunctiveQuery, Instance, Schema, evaluate, freeze,
                         relation_arities)

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator, None]


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_instance(arities: Union[Schema, Mapping[str, int]],
                    domain_size: int = DEFAULTS.falsifier_domain,
                    density: float = 0.5,
                    seed: Seed = None) -> Instance:
    """
    Gera uma instância aleatória.

    Cada fato possível sobre as constantes ``c0, ..., c(d-1)`` entra na
    instância com probabilidade ``density``.

    Args:
        arities: Esquema ou mapeamento relação -> aridade
        domain_size: Número de constantes
        density: Probabilidade de cada fato
        seed: Semente ou gerador do numpy

    Returns:
        Instância sobre as relações dadas
    """
    rng = _rng(seed)
    if isinstance(arities, Schema):
        arities = arities.as_dict()
    constants = [f"c{i}" for i in range(domain_size)]

    facts = set()
    for relation in sorted(arities):
        tuples = list(product(constants, repeat=arities[relation]))
        chosen = rng.random(len(tuples)) < density
        facts.update((relation, t) for t, keep in zip(tuples, chosen) if keep)
    return Instance(frozenset(facts))


def random_2cq(schema: Schema, alpha: int = 0, max_variables: int = 4,
               seed: Seed = None) -> ConjunctiveQuery:
    """
    Gera uma 2CQ aleatória sobre o esquema.

    Cada relação aparece 0, 1 ou 2 vezes (pelo menos um átomo no total); os
    argumentos são sorteados entre ``x0, ..., x(m-1)``, e a cabeça entre as
    variáveis do corpo (com repetição).

    Args:
        schema: Esquema com ao menos uma relação de aridade positiva quando ``alpha > 0``
        alpha: Aridade da consulta
        max_variables: Tamanho máximo do conjunto de variáveis
        seed: Semente ou gerador do numpy
    """
    if not len(schema):
        raise QueryError("O esquema não tem relações")
    if alpha > 0 and not any(arity for _, arity in schema.relations):
        raise QueryError("Consultas com cabeça exigem uma relação de aridade positiva")
    rng = _rng(seed)
    pool = [f"x{i}" for i in range(int(rng.integers(1, max_variables + 1)))]

    while True:
        body = []
        for relation, arity in schema.relations:
            for _ in range(int(rng.integers(0, 3))):
                body.append(Atom(relation, tuple(pool[k] for k in rng.integers(0, len(pool), arity))))
        query = ConjunctiveQuery((), tuple(body))
        variables = query.body_variables
        if query.body and (alpha == 0 or variables):
            break

    head = tuple(variables[k] for k in rng.integers(0, len(variables), alpha)) if alpha else ()
    return ConjunctiveQuery(head, query.body)


def find_counterexample(q1: ConjunctiveQuery, q2: ConjunctiveQuery,
                        trials: int = DEFAULTS.falsifier_trials,
                        domain_size: int = DEFAULTS.falsifier_domain,
                        seed: Seed = DEFAULTS.seed) -> Optional[Instance]:
    """
    Procura uma instância I com ``q1(I)`` fora de ``q2(I)``, o que refuta ``q1 ⊑ q2``.

    Tenta ``trials`` instâncias aleatórias; se nenhuma servir, usa o banco
    canônico de ``q1``, que é testemunha sempre que a contenção falha.

    Returns:
        Instância testemunha, ou None se ``q1 ⊑ q2``
    """
    rng = _rng(seed)
    arities = relation_arities(q1, q2)
    for trial in range(trials):
        instance = random_instance(arities, domain_size, seed=rng)
        if evaluate(q1, instance) - evaluate(q2, instance):
            logger.debug("Contraexemplo aleatório na tentativa %d", trial)
            return instance

    frozen = freeze(q1)
    if frozen.head_tuple not in evaluate(q2, frozen.instance):
        return frozen.instance
    return None
