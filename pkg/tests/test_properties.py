"""
Testes de propriedade: o verificador de contenção por homomorfismo contra o
banco canônico e contra instâncias aleatórias, forma canônica, core e os
limites de contagem das restrições.
"""
import random
from itertools import combinations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from algorithms.homomorphism import (contains, core, equivalent, find_homomorphism,
                                     is_minimal, strictly_contains)
from algorithms.reduction import generate_restrictions, reduced_restrictions
from utils.canonical import canonicalize
from utils.generators import find_counterexample, random_2cq, random_instance
from utils.query import Atom, ConjunctiveQuery, Instance, evaluate, freeze
from utils.syntax import parse_query, parse_schema

SCHEMA = parse_schema("R/2, L/1")
WIDE_SCHEMA = parse_schema("R/2, S/2, L/1")
POOL = ["x", "y", "z", "w"]

variables = st.sampled_from(POOL)


@st.composite
def two_cqs(draw, schema=SCHEMA, alpha=None):
    """2CQ sobre o esquema: cada relação aparece até duas vezes."""
    body = []
    for relation, arity in schema.relations:
        for _ in range(draw(st.integers(0, 2))):
            body.append(Atom(relation, tuple(draw(variables) for _ in range(arity))))
    if not body:
        body.append(Atom("R", (draw(variables), draw(variables))))
    query = ConjunctiveQuery((), tuple(body))
    if alpha is None:
        alpha = draw(st.integers(0, 2))
    head = tuple(draw(st.sampled_from(query.body_variables)) for _ in range(alpha))
    return ConjunctiveQuery(head, query.body)


@st.composite
def query_pairs(draw):
    alpha = draw(st.integers(0, 2))
    return draw(two_cqs(alpha=alpha)), draw(two_cqs(alpha=alpha))


@st.composite
def instances(draw):
    constants = st.sampled_from(["a", "b", "c"])
    facts = draw(st.sets(st.one_of(
        st.tuples(st.just("R"), st.tuples(constants, constants)),
        st.tuples(st.just("L"), st.tuples(constants))), max_size=8))
    return Instance(frozenset(facts))


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(query_pairs())
def test_containment_agrees_with_canonical_database(pair):
    q1, q2 = pair
    frozen = freeze(q1)
    assert contains(q1, q2) == (frozen.head_tuple in evaluate(q2, frozen.instance))


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(query_pairs(), instances())
def test_containment_sound_on_instances(pair, instance):
    q1, q2 = pair
    if contains(q1, q2):
        assert evaluate(q1, instance) <= evaluate(q2, instance)


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(query_pairs())
def test_falsifier_agrees_with_containment(pair):
    q1, q2 = pair
    witness = find_counterexample(q1, q2, trials=20)
    assert (witness is None) == contains(q1, q2)
    if witness is not None:
        assert evaluate(q1, witness) - evaluate(q2, witness)


@settings(max_examples=300, deadline=None)
@given(two_cqs(), st.randoms(use_true_random=False))
def test_canonical_text_ignores_renaming_and_order(query, rng):
    names = list(query.variables)
    fresh = [f"v{i}_n" for i in range(len(names))]
    rng.shuffle(fresh)
    body = list(query.body)
    rng.shuffle(body)
    renamed = ConjunctiveQuery(query.head, tuple(body)).rename(dict(zip(names, fresh)))
    assert canonicalize(renamed) == canonicalize(query)


@settings(max_examples=300, deadline=None)
@given(two_cqs())
def test_render_round_trip(query):
    assert parse_query(query.render()) == query


@settings(max_examples=300, deadline=None)
@given(two_cqs())
def test_core_is_equivalent_and_idempotent(query):
    reduced = core(query)
    assert equivalent(reduced, query)
    assert core(reduced) == reduced
    assert len(reduced.body) <= len(query.body)


@settings(max_examples=300, deadline=None)
@given(two_cqs(), instances(), instances())
def test_evaluation_is_monotone(query, small, extra):
    assert evaluate(query, small) <= evaluate(query, small | extra)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(two_cqs(schema=WIDE_SCHEMA))
def test_restriction_count_bounds(query):
    """Limites polinomiais do número de restrições (s = soma das aridades)."""
    query = core(query)
    s = sum(atom.arity for atom in query.body)
    unused = len(set(WIDE_SCHEMA.names) - query.relations)
    bounds = {
        1: s * (s - 1) // 2,
        2: unused,
        3: s * s + s * (s - 1) // 2,
        4: s * (s - 1) // 2,
    }
    for kind, bound in bounds.items():
        results = generate_restrictions(query, WIDE_SCHEMA, kind)
        assert len(results) <= bound
        for result in results:
            assert result.query.is_2cq()
            assert contains(result.query, query)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(two_cqs())
def test_reduced_restrictions_strict_and_incomparable(query):
    query = core(query)
    members = reduced_restrictions(query, SCHEMA)
    assert len({canonicalize(m) for m in members}) == len(members)
    for member in members:
        assert strictly_contains(member, query)
    for first in members:
        for second in members:
            assert not strictly_contains(first, second)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(two_cqs(schema=WIDE_SCHEMA))
def test_fresh_relation_restrictions_minimal_and_strict(query):
    """Restrições do tipo 2 de um core são minimais e não voltam para a consulta original."""
    query = core(query)
    for result in generate_restrictions(query, WIDE_SCHEMA, 2):
        assert is_minimal(result.query)
        assert find_homomorphism(result.query, query) is None


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(two_cqs())
def test_core_has_smallest_equivalent_body(query):
    """Nenhuma subconsulta com menos átomos que o core é equivalente à consulta."""
    smallest = len(core(query).body)
    for size in range(1, len(query.body) + 1):
        for atoms in combinations(query.body, size):
            candidate = ConjunctiveQuery(query.head, atoms)
            if not set(query.head) <= set(candidate.body_variables):
                continue
            if equivalent(candidate, query):
                assert size >= smallest


@settings(max_examples=200, deadline=None)
@given(two_cqs(), st.randoms(use_true_random=False))
def test_core_ignores_removal_order(query, rng):
    """Remover átomos redundantes em qualquer ordem leva ao mesmo core."""
    current = query
    changed = True
    while changed:
        changed = False
        order = list(range(len(current.body)))
        rng.shuffle(order)
        for index in order:
            candidate = current.without(index)
            if candidate.body and set(candidate.head) <= set(candidate.body_variables) \
                    and equivalent(candidate, current):
                current = candidate
                changed = True
                break
    assert canonicalize(current) == canonicalize(core(query))


@pytest.mark.parametrize("seed", range(20))
def test_random_2cq_is_valid(seed):
    query = random_2cq(SCHEMA, alpha=seed % 3, seed=seed)
    assert query.is_2cq()
    assert query.arity == seed % 3
    assert set(query.head) <= set(query.body_variables)


def test_random_instance_is_reproducible():
    first = random_instance(SCHEMA, domain_size=3, seed=7)
    second = random_instance(SCHEMA, domain_size=3, seed=7)
    assert first == second
    assert set(first.constants) <= {"c0", "c1", "c2"}


def test_random_instance_density_extremes():
    assert len(random_instance({"R": 2}, domain_size=2, density=0.0, seed=1)) == 0
    assert len(random_instance({"R": 2}, domain_size=2, density=1.0, seed=1)) == 4


def test_falsifier_on_random_pairs():
    rng = random.Random(3)
    for _ in range(30):
        alpha = rng.randint(0, 2)
        q1 = random_2cq(SCHEMA, alpha=alpha, seed=rng.randint(0, 10 ** 6))
        q2 = random_2cq(SCHEMA, alpha=alpha, seed=rng.randint(0, 10 ** 6))
        assert (find_counterexample(q1, q2, trials=10) is None) == contains(q1, q2)


if __name__ == "__main__":
    pytest.main([__file__])
