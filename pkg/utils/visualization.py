import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import networkx as nx
import numpy as np
from typing import Any, Dict, List, Sequence
import pandas as pd

from utils.canonical import canonicalize

CHAIN_COLUMNS = ["Contida", "Contém", "Esperado", "Obtido", "OK"]


def graph_to_dot(graph) -> str:
    """
    Gera o texto DOT de um grafo MC.

    Args:
        graph: Grafo MC (usa ``nodes`` e ``edges``)

    Returns:
        Texto para o ``dot``; arestas apontam da consulta maior para a menor
    """
    ids = {node: i for i, node in enumerate(graph.nodes)}
    lines = ["digraph mc {",
             "  rankdir = \"TB\";",
             "  node [fontname=\"Helvetica\", fontsize=10, shape=box];"]
    for node, i in ids.items():
        label = node.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f"  n{i} [label=\"{label}\"];")
    for upper, lower in graph.edges:
        lines.append(f"  n{ids[upper]} -> n{ids[lower]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _layers(graph) -> Dict[str, int]:
    undirected = graph.graph.to_undirected(as_view=True)
    return nx.single_source_shortest_path_length(undirected, graph.bottom())


def plot_mc_graph(graph,
                  title: str = "Grafo de Contenção Maximal",
                  save_path: str = None):
    """
    Desenha o grafo MC em camadas (distância até a base).

    Os nós são numerados na ordem de ``graph.nodes``.

    Args:
        graph: Grafo MC
        title: Título do gráfico
        save_path: Caminho para salvar o gráfico (opcional)
    """
    layers = _layers(graph)
    by_layer: Dict[int, List[str]] = {}
    for node in graph.nodes:
        by_layer.setdefault(layers.get(node, -1), []).append(node)

    pos = {}
    for depth, nodes in by_layer.items():
        for k, node in enumerate(nodes):
            pos[node] = ((k + 1) / (len(nodes) + 1), depth)

    plt.figure(figsize=(12, 8))
    labels = {node: str(i) for i, node in enumerate(graph.nodes)}
    nx.draw_networkx(graph.graph, pos=pos, labels=labels, node_size=300,
                     font_size=8, node_color="lightsteelblue", arrows=True)
    plt.ylabel("Distância até a base")
    plt.title(title)
    plt.grid(True, axis="y")

    if save_path:
        plt.savefig(save_path)
    plt.close()


def plot_distance_histogram(distances: np.ndarray,
                            title: str = "Distribuição das Distâncias",
                            save_path: str = None):
    """
    Histograma das distâncias entre pares distintos de nós.

    Args:
        distances: Matriz de distâncias (``distance_matrix``)
        title: Título do gráfico
        save_path: Caminho para salvar o gráfico (opcional)
    """
    upper = distances[np.triu_indices_from(distances, k=1)]
    finite = upper[np.isfinite(upper)]

    plt.figure(figsize=(10, 6))
    if finite.size:
        bins = np.arange(0.5, finite.max() + 1.5)
        plt.hist(finite, bins=bins, rwidth=0.8)
    plt.xlabel("Distância")
    plt.ylabel("Pares de consultas")
    plt.title(title)
    plt.grid(True)

    if save_path:
        plt.savefig(save_path)
    plt.close()


def create_chain_table(rows: Sequence[Dict[str, Any]]) -> pd.DataFrame:
    """Tabela da verificação da cadeia (um par por linha)."""
    return pd.DataFrame(list(rows), columns=CHAIN_COLUMNS)


def create_restriction_table(results: Sequence[Any]) -> pd.DataFrame:
    """
    Cria uma tabela com as restrições geradas.

    Args:
        results: Restrições (com ``query`` e ``kind``)

    Returns:
        DataFrame com tipo, detalhe, consulta e texto canônico
    """
    rows = []
    for result in results:
        rows.append({
            'Tipo': result.kind.tag.value,
            'Detalhe': result.kind.describe(),
            'Restrição': result.query.render(),
            'Canônica': canonicalize(result.query),
        })
    return pd.DataFrame(rows, columns=['Tipo', 'Detalhe', 'Restrição', 'Canônica'])
