from itertools import product

import numpy as np
import pytest

from algorithms.homomorphism import contains, core, strictly_contains
from algorithms.mc_graph import (MCGraph, bottom_query, build_mc_graph, default_cache_path,
                                 distance, distance_matrix, is_connected, load_graph,
                                 load_or_build, save_graph, shortest_path, top_queries)
from algorithms.reduction import is_maximally_contained, reduced_restrictions
from utils.canonical import canonicalize
from utils.errors import (ArityMismatchError, ClosureViolationError, DisconnectedGraphError,
                          GraphFileError, NodeCapExceededError, NotA2CQError, QueryError,
                          SchemaMismatchError)
from utils.query import Atom, ConjunctiveQuery, Schema
from utils.syntax import parse_query, parse_schema
from utils.visualization import graph_to_dot, plot_distance_histogram, plot_mc_graph

EDGE = "() <- R(x, y)"
PATH = "() <- R(x, y), R(y, z)"
CYCLE = "() <- R(x, y), R(y, x)"
LOOP = "() <- R(x, x)"

# Consultas binárias sobre {R/2, L/1}
Q1 = "(x, y) <- R(x, y), R(y, x), L(x), L(y)"
Q2 = "(x, y) <- R(x, z), L(y), L(z)"
Q3 = "(x, y) <- R(x, x), L(x), L(y)"
Q4 = "(x, x) <- R(x, x), L(x)"


def create_schema_r():
    return parse_schema("R/2")


def create_schema_rl():
    return parse_schema("R/2, L/1")


def key(text):
    return canonicalize(parse_query(text))


def assert_metric(graph):
    """Axiomas de métrica sobre todos os pares de nós."""
    d = distance_matrix(graph)
    assert np.all(np.isfinite(d))
    assert np.all(d >= 0)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    off_diagonal = d[~np.eye(len(d), dtype=bool)]
    assert np.all(off_diagonal > 0)
    for j in range(len(d)):
        assert np.all(d <= d[:, [j]] + d[[j], :])


def assert_edge_soundness(graph):
    for u in graph.nodes:
        for v in graph.nodes:
            expected = graph.graph.has_edge(u, v)
            assert is_maximally_contained(graph.query(v), graph.query(u), graph.schema) is expected


@pytest.fixture(scope="module")
def graph_r1():
    """σ={R/2}, α=1."""
    return build_mc_graph(create_schema_r(), 1)


def test_top_queries_binary():
    tops = top_queries({"R"}, create_schema_r(), 0)
    assert [canonicalize(q) for q in tops] == [key(EDGE)]


def test_top_queries_unary_head():
    schema = Schema.from_mapping({"L": 1})
    tops = top_queries({"L"}, schema, 1)
    assert [canonicalize(q) for q in tops] == [key("(x) <- L(x)")]


def test_top_queries_arity_one():
    """As consultas maximais de aridade 1 sobre {R/2}: cabeça na origem ou no destino."""
    tops = top_queries({"R"}, create_schema_r(), 1)
    assert {canonicalize(q) for q in tops} == {key("(x) <- R(x, y)"), key("(y) <- R(x, y)")}


def test_top_queries_repeat_head_when_forced():
    schema = Schema.from_mapping({"L": 1})
    tops = top_queries({"L"}, schema, 3)
    assert all(len(set(q.head)) <= 2 for q in tops)
    assert all(q.arity == 3 for q in tops)


def test_top_queries_empty_rho():
    with pytest.raises(QueryError):
        top_queries(set(), create_schema_r(), 0)


@pytest.mark.parametrize("mapping, alpha, expected", [
    ({"R": 2, "L": 1}, 2, "(x, x) <- R(x, x), L(x)"),
    ({"E": 2}, 0, "() <- E(x, x)"),
])
def test_bottom_query(mapping, alpha, expected):
    assert canonicalize(bottom_query(Schema.from_mapping(mapping), alpha)) == key(expected)


def test_bottom_query_errors():
    with pytest.raises(QueryError):
        bottom_query(Schema(), 0)
    with pytest.raises(QueryError):
        bottom_query(Schema.from_mapping({"P": 0}), 1)


def test_build_single_binary_relation(graph_r):
    """Sobre {R/2}, α=0, o grafo é a cadeia aresta > caminho > ciclo > laço."""
    assert len(graph_r) == 4
    assert set(graph_r.nodes) == {key(q) for q in (EDGE, PATH, CYCLE, LOOP)}
    assert graph_r.edges == sorted([(key(EDGE), key(PATH)), (key(PATH), key(CYCLE)),
                                    (key(CYCLE), key(LOOP))])
    assert graph_r.tops() == [key(EDGE)]
    assert graph_r.bottom() == key(LOOP)


def test_build_single_unary_relation():
    graph = build_mc_graph(Schema.from_mapping({"L": 1}), 0)
    assert graph.nodes == [key("() <- L(x)")]
    assert graph.edges == []
    assert graph.bottom() == key("() <- L(x)")


def test_build_rejects_empty_schema():
    with pytest.raises(QueryError):
        build_mc_graph(Schema(), 0)


def test_build_node_cap():
    with pytest.raises(NodeCapExceededError) as info:
        build_mc_graph(create_schema_rl(), 0, max_nodes=2)
    assert info.value.limit == 2
    assert info.value.size > 2


def test_build_is_deterministic(graph_r):
    assert build_mc_graph(create_schema_r(), 0) == graph_r


def test_summary(graph_r):
    summary = graph_r.summary()
    assert summary["node_count"] == 4
    assert summary["edge_count"] == 3
    assert summary["bottom"] == key(LOOP)


def test_edge_oracle(graph_r):
    """Compara as arestas com a definição de contenção maximal sobre os nós do grafo."""
    queries = {node: graph_r.query(node) for node in graph_r.nodes}
    for u, upper in queries.items():
        for v, lower in queries.items():
            maximal = strictly_contains(lower, upper) and not any(
                strictly_contains(lower, middle) and strictly_contains(middle, upper)
                for middle in queries.values())
            assert graph_r.graph.has_edge(u, v) is maximal


def restricted_growth(length):
    """Partições das posições em variáveis: x0 aparece antes de x1, e assim por diante."""
    if length == 0:
        yield ()
        return
    for prefix in restricted_growth(length - 1):
        for label in range(max(prefix, default=-1) + 2):
            yield prefix + (label,)


def enumerate_minimal_2cqs(schema, alpha):
    """Textos canônicos dos cores de todas as 2CQs não vazias de aridade alpha."""
    relations = schema.relations
    found = set()
    for counts in product(range(3), repeat=len(relations)):
        if not any(counts):
            continue
        shape = [(name, arity) for (name, arity), count in zip(relations, counts)
                 for _ in range(count)]
        positions = sum(arity for _, arity in shape)
        for labels in restricted_growth(positions):
            names = iter(f"x{label}" for label in labels)
            body = tuple(Atom(name, tuple(next(names) for _ in range(arity)))
                         for name, arity in shape)
            variables = sorted({f"x{label}" for label in labels})
            for head in product(variables, repeat=alpha):
                found.add(canonicalize(core(ConjunctiveQuery(head, body))))
    return found


@pytest.mark.parametrize("mapping, alpha, size", [
    ({"R": 2, "L": 1}, 0, 27),
    ({"R": 2}, 1, 11),
])
def test_graph_matches_enumeration(mapping, alpha, size):
    """Nós = todas as 2CQs minimais; arestas = contenção maximal sobre todas elas."""
    schema = Schema.from_mapping(mapping)
    graph = build_mc_graph(schema, alpha)
    universe = enumerate_minimal_2cqs(schema, alpha)
    assert len(universe) == size
    assert set(graph.nodes) == universe

    queries = {node: graph.query(node) for node in universe}
    below = {(u, v) for u in universe for v in universe
             if strictly_contains(queries[v], queries[u])}
    expected = {(u, v) for u, v in below
                if not any((u, w) in below and (w, v) in below for w in universe)}
    assert set(graph.edges) == expected

    for u in universe:
        members = reduced_restrictions(queries[u], schema)
        for v in universe:
            if (u, v) in below:
                assert any(contains(queries[v], member) for member in members), (u, v)


@pytest.mark.parametrize("fixture", ["graph_r", "graph_r1"])
def test_closure_and_edges(fixture, request):
    graph = request.getfixturevalue(fixture)
    for node in graph.nodes:
        members = {canonicalize(q) for q in reduced_restrictions(graph.query(node), graph.schema)}
        assert members <= set(graph.nodes)
        assert members == set(graph.graph.successors(node))
    assert_edge_soundness(graph)


@pytest.mark.parametrize("fixture", ["graph_r", "graph_r1", "graph_rl2"])
def test_metric_axioms(fixture, request):
    graph = request.getfixturevalue(fixture)
    assert is_connected(graph)
    assert_metric(graph)


def test_metric_axioms_small_graphs():
    for mapping, alpha in [({"L": 1}, 1), ({"R": 2, "L": 1}, 0)]:
        graph = build_mc_graph(Schema.from_mapping(mapping), alpha)
        assert is_connected(graph)
        assert_metric(graph)


@pytest.mark.parametrize("q1, q2, expected", [
    (EDGE, LOOP, 3),
    (EDGE, PATH, 1),
    (PATH, LOOP, 2),
    (CYCLE, CYCLE, 0),
])
def test_distance_chain(graph_r, q1, q2, expected):
    assert distance(graph_r, parse_query(q1), parse_query(q2)) == expected
    assert distance(graph_r, parse_query(q2), parse_query(q1)) == expected


def test_distance_invariant_under_equivalence(graph_r):
    padded = parse_query("() <- R(a, b), R(a, c)")
    assert distance(graph_r, padded, parse_query(LOOP)) == 3


def test_bottom_below_every_node(graph_rl2):
    bottom = bottom_query(create_schema_rl(), 2)
    assert graph_rl2.bottom() == canonicalize(bottom)
    for node in graph_rl2.nodes:
        assert contains(bottom, graph_rl2.query(node))


@pytest.mark.parametrize("q1, q2, expected", [
    (Q1, Q4, 1),
    (Q3, Q4, 3),
    (Q2, Q3, 3),
    (Q1, Q2, 4),
    (Q2, Q4, 4),
])
def test_distance_binary_queries(graph_rl2, q1, q2, expected):
    """Só Q4 ⊑ Q1 é aresta; os demais pares têm 2CQs estritamente entre eles."""
    assert distance(graph_rl2, parse_query(q1), parse_query(q2)) == expected
    assert distance(graph_rl2, parse_query(q2), parse_query(q1)) == expected


def test_graph_binary_queries_size(graph_rl2):
    summary = graph_rl2.summary()
    assert summary["node_count"] == 423
    assert summary["edge_count"] == 1492


def test_distance_equivalent_queries(graph_rl2):
    q2 = parse_query(Q2)
    renamed = parse_query("(a, b) <- R(a, c), L(b), L(c)")
    padded = parse_query("(x, y) <- R(x, z), R(x, w), L(y), L(z)")
    assert distance(graph_rl2, q2, renamed) == 0
    expected = distance(graph_rl2, q2, parse_query(Q1))
    assert distance(graph_rl2, renamed, parse_query(Q1)) == expected
    assert distance(graph_rl2, padded, parse_query(Q1)) == expected


def test_shortest_path_witness(graph_rl2):
    q1, q2 = parse_query(Q1), parse_query(Q2)
    path = shortest_path(graph_rl2, q1, q2)
    assert len(path) == distance(graph_rl2, q1, q2) + 1
    assert canonicalize(path[0]) == key(Q1)
    assert canonicalize(path[-1]) == key(Q2)
    for upper, lower in zip(path, path[1:]):
        assert (is_maximally_contained(lower, upper, graph_rl2.schema)
                or is_maximally_contained(upper, lower, graph_rl2.schema))


def test_distance_matrix_matches_distance(graph_r):
    d = distance_matrix(graph_r)
    nodes = graph_r.nodes
    for i, u in enumerate(nodes):
        for j, v in enumerate(nodes):
            assert d[i, j] == distance(graph_r, graph_r.query(u), graph_r.query(v))


def test_distance_errors(graph_r):
    loop = parse_query(LOOP)
    with pytest.raises(ArityMismatchError):
        distance(graph_r, parse_query("(x) <- R(x, y)"), loop)
    with pytest.raises(SchemaMismatchError):
        distance(graph_r, parse_query("() <- L(x)"), loop)
    with pytest.raises(NotA2CQError):
        distance(graph_r, parse_query("() <- R(x, y), R(y, z), R(z, w)"), loop)


def test_closure_violation():
    graph = MCGraph(create_schema_r(), 0)
    graph.add_query(parse_query(EDGE))
    with pytest.raises(ClosureViolationError):
        graph.locate(parse_query(LOOP))


def test_disconnected_graph():
    graph = MCGraph(create_schema_r(), 0)
    graph.add_query(parse_query(EDGE))
    graph.add_query(parse_query(LOOP))
    assert not is_connected(graph)
    assert np.isinf(distance_matrix(graph)[0, 1])
    with pytest.raises(DisconnectedGraphError):
        distance(graph, parse_query(EDGE), parse_query(LOOP))
    with pytest.raises(ClosureViolationError):
        graph.bottom()


def test_save_load_round_trip(graph_r, tmp_path):
    path = tmp_path / "r.json"
    save_graph(graph_r, path)
    loaded = load_graph(path, create_schema_r(), 0)
    assert loaded == graph_r
    assert distance(loaded, parse_query(EDGE), parse_query(LOOP)) == 3


def test_save_is_reproducible(graph_r, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    save_graph(graph_r, first)
    save_graph(build_mc_graph(create_schema_r(), 0), second)
    assert first.read_bytes() == second.read_bytes()


def test_load_distances_match(graph_rl2, graph_rl2_file):
    loaded = load_graph(graph_rl2_file)
    assert loaded == graph_rl2
    assert np.array_equal(distance_matrix(loaded), distance_matrix(graph_rl2))


def test_load_truncated_file(graph_r, tmp_path):
    path = tmp_path / "r.json"
    save_graph(graph_r, path)
    text = path.read_text(encoding="utf-8")
    path.write_text(text[:len(text) // 2], encoding="utf-8")
    with pytest.raises(GraphFileError):
        load_graph(path)


def test_load_header_mismatch(graph_r, tmp_path):
    path = tmp_path / "r.json"
    save_graph(graph_r, path)
    with pytest.raises(GraphFileError):
        load_graph(path, schema=create_schema_rl())
    with pytest.raises(GraphFileError):
        load_graph(path, arity=1)


def test_load_missing_file(tmp_path):
    with pytest.raises(GraphFileError):
        load_graph(tmp_path / "nada.json")


def test_load_or_build_uses_cache(tmp_path):
    path = tmp_path / "cache" / "r.json"
    graph = load_or_build(create_schema_r(), 0, cache=path)
    assert path.exists()
    assert load_or_build(create_schema_r(), 0, cache=path) == graph


def test_default_cache_path():
    schema = create_schema_r()
    assert default_cache_path(schema, 0, "c") == default_cache_path(schema, 0, "c")
    assert default_cache_path(schema, 0, "c") != default_cache_path(schema, 1, "c")
    assert default_cache_path(schema, 0, "c").name.startswith("mcgraph-")


def test_graph_to_dot(graph_r):
    dot = graph_to_dot(graph_r)
    assert dot.startswith("digraph mc {")
    assert dot.count(" -> ") == 3
    assert f'label="{key(LOOP)}"' in dot


def test_plots(graph_r, tmp_path):
    plot_mc_graph(graph_r, save_path=tmp_path / "grafo.png")
    plot_distance_histogram(distance_matrix(graph_r), save_path=tmp_path / "hist.png")
    assert (tmp_path / "grafo.png").exists()
    assert (tmp_path / "hist.png").exists()


if __name__ == "__main__":
    pytest.main([__file__])
