import pytest

from algorithms.mc_graph import build_mc_graph, save_graph
from utils.query import Schema


def create_schema_r() -> Schema:
    return Schema.from_mapping({"R": 2})


def create_schema_rl() -> Schema:
    return Schema.from_mapping({"R": 2, "L": 1})


@pytest.fixture(scope="session")
def graph_r():
    """Grafo MC de σ={R/2}, α=0 (quatro nós)."""
    return build_mc_graph(create_schema_r(), 0)


@pytest.fixture(scope="session")
def graph_rl2():
    """Grafo MC de σ={R/2, L/1}, α=2, usado no exemplo de distâncias."""
    return build_mc_graph(create_schema_rl(), 2)


@pytest.fixture(scope="session")
def graph_rl2_file(graph_rl2, tmp_path_factory):
    path = tmp_path_factory.mktemp("cache") / "rl2.json"
    save_graph(graph_rl2, path)
    return path
