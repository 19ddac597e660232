"""
Grafo de contenção maximal (grafo MC) e a distância semântica entre 2CQs.

Os nós são cores canônicos de 2CQs sobre um esquema e uma aridade fixos;
existe uma aresta (u, v) quando v está maximalmente contida em u. A
distância entre duas consultas é o comprimento do menor caminho entre os
seus nós, ignorando a orientação das arestas.
"""
import hashlib
import json
import logging
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
from scipy.sparse.csgraph import shortest_path as csgraph_shortest_path
from tqdm import tqdm

from utils.config import DEFAULTS
from utils.errors import (ArityMismatchError, ClosureViolationError, DisconnectedGraphError,
                          GraphFileError, NodeCapExceededError, QueryError)
from utils.query import Atom, ConjunctiveQuery, Schema
from utils.syntax import parse_query
from .base import check_2cq
from .homomorphism import core
from .reduction import reduced_restrictions

logger = logging.getLogger(__name__)

FILE_FORMAT = "mc-graph/1"

PathLike = Union[str, Path]


class MCGraph:
    def __init__(self, schema: Schema, arity: int):
        """
        Grafo MC vazio.

        Args:
            schema: Esquema das consultas
            arity: Aridade comum das consultas (α)
        """
        self.schema = schema
        self.arity = arity
        self.graph = nx.DiGraph()

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def __contains__(self, node: str) -> bool:
        return node in self.graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, MCGraph):
            return NotImplemented
        return (self.schema == other.schema and self.arity == other.arity
                and self.nodes == other.nodes and self.edges == other.edges)

    @property
    def nodes(self) -> List[str]:
        """Textos canônicos dos nós, em ordem."""
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[str, str]]:
        return sorted(self.graph.edges)

    def add_query(self, query: ConjunctiveQuery) -> str:
        """Insere o core da consulta (se ainda não estiver no grafo) e retorna o nó."""
        reduced = core(query)
        node = reduced.render()
        if node not in self.graph:
            self.graph.add_node(node, query=reduced)
        return node

    def add_edge(self, upper: str, lower: str) -> None:
        self.graph.add_edge(upper, lower)

    def query(self, node: str) -> ConjunctiveQuery:
        return self.graph.nodes[node]["query"]

    def tops(self) -> List[str]:
        """Nós sem arestas de entrada."""
        return sorted(node for node, degree in self.graph.in_degree() if degree == 0)

    def bottom(self) -> str:
        """
        Retorna o único nó sem arestas de saída.

        Raises:
            ClosureViolationError: Se não houver exatamente um nó assim
        """
        sinks = sorted(node for node, degree in self.graph.out_degree() if degree == 0)
        if len(sinks) != 1:
            raise ClosureViolationError(
                f"O grafo deveria ter um único nó base; encontrados {len(sinks)}")
        return sinks[0]

    def locate(self, query: ConjunctiveQuery) -> str:
        """
        Encontra o nó equivalente à consulta.

        Raises:
            ArityMismatchError: Aridade diferente da do grafo
            SchemaMismatchError: Relação fora do esquema do grafo
            NotA2CQError: A consulta não é 2CQ
            ClosureViolationError: O core da consulta não está no grafo
        """
        if query.arity != self.arity:
            raise ArityMismatchError(
                f"A consulta tem aridade {query.arity}; o grafo é de aridade {self.arity}")
        check_2cq(query, self.schema)
        node = core(query).render()
        if node not in self.graph:
            raise ClosureViolationError(f"O core de {query.render()} não está no grafo: {node}")
        return node

    def summary(self) -> Dict[str, object]:
        return {
            "schema": self.schema.as_dict(),
            "arity": self.arity,
            "node_count": len(self),
            "edge_count": self.graph.number_of_edges(),
            "tops": len(self.tops()),
            "bottom": self.bottom() if len(self) else None,
        }


def _schema_or_error(schema: Schema) -> None:
    if not len(schema):
        raise QueryError("O esquema não tem relações")


def top_queries(rho: Iterable[str], schema: Schema, alpha: int) -> List[ConjunctiveQuery]:
    """
    Gera as consultas de topo tq(ρ).

    O corpo tem dois átomos com variáveis novas para cada relação de ρ; as
    cabeças são todas as escolhas ordenadas de α variáveis distintas do
    corpo (com repetição só quando o corpo tem menos de α variáveis).

    Args:
        rho: Conjunto não vazio de nomes de relação do esquema
        schema: Esquema
        alpha: Aridade das consultas

    Returns:
        Cores distintos (a menos de renomeação), ordenados pelo texto canônico
    """
    names = sorted(set(rho))
    if not names:
        raise QueryError("O conjunto de relações das consultas de topo está vazio")

    body: List[Atom] = []
    serial = 0
    for name in names:
        arity = schema.arity(name)
        for _ in range(2):
            body.append(Atom(name, tuple(f"x{serial + i + 1}" for i in range(arity))))
            serial += arity

    variables = tuple(dict.fromkeys(var for atom in body for var in atom.args))
    if alpha > 0 and not variables:
        return []
    if len(variables) >= alpha:
        heads = permutations(variables, alpha)
    else:
        heads = product(variables, repeat=alpha)

    found: Dict[str, ConjunctiveQuery] = {}
    for head in heads:
        reduced = core(ConjunctiveQuery(head, tuple(body)))
        found.setdefault(reduced.render(), reduced)
    return [found[key] for key in sorted(found)]


def bottom_query(schema: Schema, alpha: int) -> ConjunctiveQuery:
    """Consulta com uma só variável x: um átomo S(x, ..., x) por relação e cabeça (x, ..., x)."""
    _schema_or_error(schema)
    body = tuple(Atom(name, ("x",) * arity) for name, arity in schema.relations)
    query = ConjunctiveQuery(("x",) * alpha, body)
    if alpha > 0 and "x" not in query.body_variables:
        raise QueryError("Esquema sem relações de aridade positiva não admite consultas com cabeça")
    return query


def build_mc_graph(schema: Schema, alpha: int, max_nodes: int = DEFAULTS.max_nodes,
                   progress: bool = False) -> MCGraph:
    """
    Constrói o grafo MC para o esquema e a aridade dados.

    Parte das consultas de topo tq(σ') de todo σ' não vazio e fecha o
    conjunto sob RR em largura; cada nível é processado na ordem canônica.

    Args:
        schema: Esquema não vazio
        alpha: Aridade das consultas
        max_nodes: Limite de nós
        progress: Mostra barra de progresso (tqdm)

    Returns:
        O grafo, com base única

    Raises:
        NodeCapExceededError: O fecho passou de ``max_nodes`` nós
        ClosureViolationError: A base não é única ou não é a consulta base do esquema
    """
    _schema_or_error(schema)
    graph = MCGraph(schema, alpha)

    frontier: Dict[str, ConjunctiveQuery] = {}
    for size in range(1, len(schema) + 1):
        for rho in combinations(schema.names, size):
            for top in top_queries(rho, schema, alpha):
                frontier.setdefault(graph.add_query(top), top)
    if len(graph) > max_nodes:
        raise NodeCapExceededError(len(graph), max_nodes)
    logger.info("Grafo MC %s, α=%d: %d consultas de topo",
                ", ".join(schema.names), alpha, len(frontier))

    with tqdm(total=len(graph), desc="Grafo MC", unit="nó", disable=not progress) as bar:
        level = 0
        while frontier:
            next_frontier: Dict[str, ConjunctiveQuery] = {}
            for node in sorted(frontier):
                for member in reduced_restrictions(frontier[node], schema):
                    lower = member.render()
                    if lower not in graph:
                        graph.add_query(member)
                        next_frontier[lower] = member
                        if len(graph) > max_nodes:
                            raise NodeCapExceededError(len(graph), max_nodes)
                    graph.add_edge(node, lower)
                bar.total = len(graph)
                bar.update(1)
            level += 1
            logger.debug("Nível %d: %d nós novos (total %d)", level, len(next_frontier), len(graph))
            frontier = next_frontier

    expected = core(bottom_query(schema, alpha)).render()
    if graph.bottom() != expected:
        raise ClosureViolationError(f"A base do grafo deveria ser {expected}")
    logger.info("Grafo MC pronto: %d nós, %d arestas", len(graph), graph.graph.number_of_edges())
    return graph


def _undirected(graph: MCGraph) -> nx.Graph:
    return graph.graph.to_undirected(as_view=True)


def distance(graph: MCGraph, q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> int:
    """
    Distância semântica entre duas 2CQs.

    Returns:
        Comprimento do menor caminho (não orientado) entre os nós; 0 se equivalentes

    Raises:
        DisconnectedGraphError: Não há caminho entre os nós
    """
    source, target = graph.locate(q1), graph.locate(q2)
    try:
        return nx.shortest_path_length(_undirected(graph), source, target)
    except nx.NetworkXNoPath as e:
        raise DisconnectedGraphError(f"Não há caminho entre {source} e {target}") from e


def shortest_path(graph: MCGraph, q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> List[ConjunctiveQuery]:
    """Um caminho mínimo (testemunha da distância), do nó de ``q1`` ao de ``q2``."""
    source, target = graph.locate(q1), graph.locate(q2)
    try:
        nodes = nx.shortest_path(_undirected(graph), source, target)
    except nx.NetworkXNoPath as e:
        raise DisconnectedGraphError(f"Não há caminho entre {source} e {target}") from e
    return [graph.query(node) for node in nodes]


def distance_matrix(graph: MCGraph) -> np.ndarray:
    """
    Distâncias entre todos os pares de nós, na ordem de ``graph.nodes``.

    Pares em componentes diferentes ficam com ``inf``.
    """
    if not len(graph):
        return np.zeros((0, 0))
    adjacency = nx.to_scipy_sparse_array(graph.graph, nodelist=graph.nodes)
    return csgraph_shortest_path(adjacency, directed=False, unweighted=True)


def is_connected(graph: MCGraph) -> bool:
    return len(graph) > 0 and nx.is_weakly_connected(graph.graph)


def save_graph(graph: MCGraph, path: PathLike) -> None:
    """Grava o grafo em JSON (nós e arestas em ordem canônica; saída reprodutível)."""
    nodes = graph.nodes
    ids = {node: i for i, node in enumerate(nodes)}
    data = {
        "format": FILE_FORMAT,
        "schema": graph.schema.as_dict(),
        "arity": graph.arity,
        "node_count": len(nodes),
        "edge_count": graph.graph.number_of_edges(),
        "nodes": [{"id": ids[node], "query": node} for node in nodes],
        "edges": [[ids[u], ids[v]] for u, v in graph.edges],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, sort_keys=True, indent=2)
        f.write("\n")
    logger.info("Grafo MC salvo em %s", path)


def load_graph(path: PathLike, schema: Optional[Schema] = None,
               arity: Optional[int] = None) -> MCGraph:
    """
    Lê um grafo gravado por ``save_graph``.

    Args:
        path: Arquivo
        schema: Esquema esperado (opcional)
        arity: Aridade esperada (opcional)

    Raises:
        GraphFileError: Arquivo mal formado ou cabeçalho diferente do esperado
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise GraphFileError(f"Não foi possível ler o grafo em {path}: {e}") from e

    try:
        if data["format"] != FILE_FORMAT:
            raise GraphFileError(f"Formato desconhecido: {data['format']!r}")
        stored_schema = Schema.from_mapping(data["schema"])
        stored_arity = int(data["arity"])
        graph = MCGraph(stored_schema, stored_arity)

        names: Dict[int, str] = {}
        for entry in data["nodes"]:
            query = parse_query(entry["query"], stored_schema)
            node = graph.add_query(query)
            if node != entry["query"]:
                raise GraphFileError(f"Nó fora da forma canônica: {entry['query']}")
            names[int(entry["id"])] = node
        for u, v in data["edges"]:
            graph.add_edge(names[int(u)], names[int(v)])

        if len(graph) != data["node_count"] or graph.graph.number_of_edges() != data["edge_count"]:
            raise GraphFileError("As contagens do cabeçalho não batem com o conteúdo")
    except GraphFileError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFileError(f"Arquivo de grafo mal formado ({path}): {e}") from e

    if schema is not None and schema != stored_schema:
        raise GraphFileError(f"O grafo em {path} foi construído para outro esquema")
    if arity is not None and arity != stored_arity:
        raise GraphFileError(f"O grafo em {path} tem aridade {stored_arity}, esperado {arity}")
    return graph


def default_cache_path(schema: Schema, arity: int, cache_dir: PathLike = DEFAULTS.cache_dir) -> Path:
    """Caminho do cache: um arquivo por (esquema, aridade)."""
    key = f"{schema.render()}\n{arity}".encode("utf-8")
    return Path(cache_dir) / f"mcgraph-{hashlib.sha256(key).hexdigest()[:12]}.json"


def load_or_build(schema: Schema, arity: int, cache: Optional[PathLike] = None,
                  max_nodes: int = DEFAULTS.max_nodes, progress: bool = False) -> MCGraph:
    """
    Usa o grafo em cache se existir; senão constrói e grava.

    Args:
        schema: Esquema
        arity: Aridade
        cache: Arquivo de cache (padrão: ``default_cache_path``)
        max_nodes: Limite de nós na construção
        progress: Mostra barra de progresso
    """
    path = Path(cache) if cache is not None else default_cache_path(schema, arity)
    if path.exists():
        logger.info("Usando grafo em cache: %s", path)
        return load_graph(path, schema, arity)
    graph = build_mc_graph(schema, arity, max_nodes=max_nodes, progress=progress)
    save_graph(graph, path)
    return graph
