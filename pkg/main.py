import json
import logging
import os
import sys
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import click

sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from algorithms.homomorphism import contains, core, equivalent, find_homomorphism, is_minimal
from algorithms.mc_graph import (MCGraph, build_mc_graph, default_cache_path, distance,
                                 load_or_build, shortest_path)
from algorithms.oriented_paths import check_chain, verify_opq_table
from algorithms.reduction import generate_restrictions, is_maximally_contained, reduced_restrictions
from utils.canonical import canonicalize
from utils.config import DEFAULTS
from utils.errors import GraphError, GraphFileError, QueryError
from utils.generators import find_counterexample
from utils.query import ConjunctiveQuery, Schema, evaluate, query_size, validate
from utils.syntax import parse_instance, parse_queries, parse_query, parse_schema
from utils.visualization import create_restriction_table, graph_to_dot, plot_mc_graph

logger = logging.getLogger(__name__)

EXIT_OK = 0         # Sucesso / propriedade verdadeira
EXIT_FALSE = 1      # Propriedade falsa
EXIT_INPUT = 2      # Entrada inválida
EXIT_INTERNAL = 3   # Invariante interno violado (grafo grande demais, desconexo etc.)


@dataclass
class CommandOutcome:
    exit_code: int
    payload: str


def _plain(value):
    # escalares do numpy vindos das tabelas do pandas
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"Valor não serializável: {value!r}")


def _render(data: Dict[str, Any], human: str, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(data, sort_keys=True, ensure_ascii=False, default=_plain)
    return human


def _verdict(flag: bool) -> int:
    return EXIT_OK if flag else EXIT_FALSE


def guarded(command):
    """Converte as exceções da biblioteca em CommandOutcome com o código de saída certo."""
    @wraps(command)
    def wrapper(*args, **kwargs) -> CommandOutcome:
        try:
            return command(*args, **kwargs)
        except (QueryError, GraphFileError) as e:
            return CommandOutcome(EXIT_INPUT, f"Erro: {e}")
        except GraphError as e:
            return CommandOutcome(EXIT_INTERNAL, f"Erro interno: {e}")
    return wrapper


def read_text(value: str) -> str:
    """Aceita o texto em linha ou o caminho de um arquivo que o contém."""
    path = Path(value)
    try:
        is_file = path.is_file()
    except (OSError, ValueError):
        return value
    if not is_file:
        return value
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise QueryError(f"Não foi possível ler {value}: {e}") from e


def load_schema(path: Optional[str]) -> Optional[Schema]:
    if path is None:
        return None
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise QueryError(f"Não foi possível ler o esquema {path}: {e}") from e
    return parse_schema(text)


def load_query(value: str, schema: Optional[Schema] = None) -> ConjunctiveQuery:
    return parse_query(read_text(value), schema)


def _require_schema(schema: Optional[Schema]) -> Schema:
    if schema is None:
        raise QueryError("Este comando exige --schema")
    return schema


@guarded
def cmd_parse(text: str, schema: Optional[Schema] = None, fmt: str = "human") -> CommandOutcome:
    queries = parse_queries(read_text(text), schema)
    entries = []
    lines = []
    for query in queries:
        report = validate(query, schema)
        entries.append({
            "query": query.to_dict(),
            "text": query.render(),
            "canonical": canonicalize(query),
            "size": query_size(query),
            "is_2cq": report.is_2cq,
            "not_2cq": report.not_2cq,
        })
        flag = "2CQ" if report.is_2cq else "não é 2CQ"
        lines.append(f"{query.render()}  [tamanho {query_size(query)}, {flag}]")
    return CommandOutcome(EXIT_OK, _render({"queries": entries}, "\n".join(lines), fmt))


@guarded
def cmd_eval(query_text: str, instance_text: str, schema: Optional[Schema] = None,
             fmt: str = "human") -> CommandOutcome:
    query = load_query(query_text, schema)
    instance = parse_instance(read_text(instance_text), schema)
    answers = sorted(evaluate(query, instance, schema))
    human = "\n".join("(" + ", ".join(t) + ")" for t in answers) if answers else "(vazio)"
    data = {"query": query.to_dict(), "answers": [list(t) for t in answers]}
    return CommandOutcome(_verdict(bool(answers)), _render(data, human, fmt))


@guarded
def cmd_core(query_text: str, schema: Optional[Schema] = None, fmt: str = "human") -> CommandOutcome:
    query = load_query(query_text, schema)
    reduced = core(query)
    minimal = is_minimal(query)
    data = {"query": query.to_dict(), "core": reduced.to_dict(), "text": reduced.render(),
            "minimal": minimal}
    human = reduced.render() + ("" if not minimal else "  (a consulta já é minimal)")
    return CommandOutcome(EXIT_OK, _render(data, human, fmt))


@guarded
def cmd_equiv(q1_text: str, q2_text: str, schema: Optional[Schema] = None,
              fmt: str = "human") -> CommandOutcome:
    q1, q2 = load_query(q1_text, schema), load_query(q2_text, schema)
    holds = equivalent(q1, q2)
    human = "equivalentes" if holds else "não equivalentes"
    return CommandOutcome(_verdict(holds), _render({"equivalent": holds}, human, fmt))


@guarded
def cmd_contains(q1_text: str, q2_text: str, schema: Optional[Schema] = None,
                 witness: bool = False, trials: int = DEFAULTS.falsifier_trials,
                 seed: int = DEFAULTS.seed, fmt: str = "human") -> CommandOutcome:
    """
    Decide ``q1 ⊑ q2``.

    Com ``witness``, mostra o homomorfismo de q2 para q1 quando a contenção
    vale, ou uma instância contraexemplo quando não vale.
    """
    q1, q2 = load_query(q1_text, schema), load_query(q2_text, schema)
    holds = contains(q1, q2)
    data: Dict[str, Any] = {"contained": holds}
    lines = ["contida" if holds else "não contida"]

    if witness:
        if holds:
            mapping = find_homomorphism(q2, q1)
            data["homomorphism"] = mapping
            lines.extend(f"  {var} -> {image}" for var, image in sorted(mapping.items()))
        else:
            instance = find_counterexample(q1, q2, trials=trials, seed=seed)
            data["counterexample"] = instance.to_dict()
            lines.append(instance.render())
    return CommandOutcome(_verdict(holds), _render(data, "\n".join(lines), fmt))


@guarded
def cmd_restrict(query_text: str, schema: Optional[Schema], kind: Optional[str] = None,
                 fmt: str = "human") -> CommandOutcome:
    """Lista as restrições de um tipo, ou RR(core(Q)) quando ``kind`` não é dado."""
    schema = _require_schema(schema)
    query = load_query(query_text, schema)
    if kind is None:
        members = reduced_restrictions(core(query), schema)
        data = {"reduced": [member.to_dict() for member in members],
                "canonical": [member.render() for member in members]}
        human = "\n".join(member.render() for member in members) or "(nenhuma)"
        return CommandOutcome(EXIT_OK, _render(data, human, fmt))

    results = generate_restrictions(query, schema, kind)
    table = create_restriction_table(results)
    data = {"restrictions": [{"query": r.query.to_dict(), "kind": r.kind.to_dict(),
                              "canonical": canonicalize(r.query)} for r in results]}
    human = table.to_string(index=False) if results else "(nenhuma)"
    return CommandOutcome(EXIT_OK, _render(data, human, fmt))


@guarded
def cmd_maxcont(q1_text: str, q2_text: str, schema: Optional[Schema],
                fmt: str = "human") -> CommandOutcome:
    schema = _require_schema(schema)
    q1, q2 = load_query(q1_text, schema), load_query(q2_text, schema)
    holds = is_maximally_contained(q1, q2, schema)
    human = "maximalmente contida" if holds else "não maximalmente contida"
    return CommandOutcome(_verdict(holds), _render({"maximally_contained": holds}, human, fmt))


def _graph_for(schema: Schema, arity: int, cache: Optional[str], use_cache: bool,
               max_nodes: int, progress: bool) -> MCGraph:
    if not use_cache:
        return build_mc_graph(schema, arity, max_nodes=max_nodes, progress=progress)
    path = cache or default_cache_path(schema, arity, DEFAULTS.cache_dir)
    return load_or_build(schema, arity, path, max_nodes=max_nodes, progress=progress)


@guarded
def cmd_graph(schema: Optional[Schema], arity: int, cache: Optional[str] = None,
              use_cache: bool = True, dot: Optional[str] = None, plot: Optional[str] = None,
              max_nodes: int = DEFAULTS.max_nodes, progress: bool = False,
              fmt: str = "human") -> CommandOutcome:
    """Constrói (ou carrega) o grafo MC; grava DOT e figura quando pedidos."""
    schema = _require_schema(schema)
    graph = _graph_for(schema, arity, cache, use_cache, max_nodes, progress)
    if dot:
        Path(dot).write_text(graph_to_dot(graph), encoding="utf-8")
    if plot:
        plot_mc_graph(graph, save_path=plot)

    summary = graph.summary()
    human = (f"{summary['node_count']} nós, {summary['edge_count']} arestas\n"
             f"base: {summary['bottom']}")
    return CommandOutcome(EXIT_OK, _render(summary, human, fmt))


@guarded
def cmd_distance(schema: Optional[Schema], arity: int, q1_text: str, q2_text: str,
                 cache: Optional[str] = None, use_cache: bool = True, witness: bool = False,
                 max_nodes: int = DEFAULTS.max_nodes, progress: bool = False,
                 fmt: str = "human") -> CommandOutcome:
    schema = _require_schema(schema)
    q1, q2 = load_query(q1_text, schema), load_query(q2_text, schema)
    graph = _graph_for(schema, arity, cache, use_cache, max_nodes, progress)
    value = distance(graph, q1, q2)
    data: Dict[str, Any] = {"distance": value}
    lines = [str(value)]
    if witness:
        path = [query.render() for query in shortest_path(graph, q1, q2)]
        data["path"] = path
        lines.extend(f"  {text}" for text in path)
    return CommandOutcome(EXIT_OK, _render(data, "\n".join(lines), fmt))


@guarded
def cmd_opq(chain_bound: int = DEFAULTS.chain_bound, relation: str = DEFAULTS.opq_relation,
            progress: bool = False, fmt: str = "human") -> CommandOutcome:
    """Confere a tabela de equivalências entre OPQs e a cadeia Q_0 ⊏ ... ⊏ Q_n ⊏ O_11."""
    table = verify_opq_table(relation)
    chain = check_chain(chain_bound, relation, progress=progress)
    passed = table.passed and chain.passed
    data = {
        "table": table.table.to_dict(orient="records"),
        "table_passed": table.passed,
        "chain": chain.table.to_dict(orient="records"),
        "chain_bound": chain.bound,
        "chain_passed": chain.passed,
        "passed": passed,
    }
    human = "\n".join([
        "Tabela de equivalências:",
        table.table.to_string(index=False),
        "",
        f"Cadeia até Q{chain.bound}:",
        chain.table.to_string(index=False),
        "",
        "OK" if passed else "FALHOU",
    ])
    return CommandOutcome(_verdict(passed), _render(data, human, fmt))


# Interface de linha de comando

format_option = click.option("--format", "fmt", type=click.Choice(["human", "structured"]),
                             default="human", show_default=True, help="Formato da saída.")
schema_option = click.option("--schema", "schema_path", type=click.Path(dir_okay=False),
                             help="Arquivo com declarações R/2.")
arity_option = click.option("--arity", type=click.IntRange(min=0), default=0, show_default=True,
                            help="Aridade α das consultas.")
cache_options = [
    click.option("--cache", type=click.Path(dir_okay=False), help="Arquivo de cache do grafo."),
    click.option("--no-cache", is_flag=True, help="Constrói o grafo sem ler nem gravar cache."),
    click.option("--max-nodes", type=click.IntRange(min=1), default=DEFAULTS.max_nodes,
                 show_default=True, help="Limite de nós do grafo."),
    click.option("--progress", is_flag=True, help="Mostra barra de progresso."),
]


def with_cache_options(command):
    for option in reversed(cache_options):
        command = option(command)
    return command


def finish(outcome: CommandOutcome) -> None:
    click.echo(outcome.payload, err=outcome.exit_code >= EXIT_INPUT)
    sys.exit(outcome.exit_code)


def _schema(path: Optional[str]) -> Optional[Schema]:
    try:
        return load_schema(path)
    except QueryError as e:
        finish(CommandOutcome(EXIT_INPUT, f"Erro: {e}"))


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Mostra o log de depuração.")
def cli(verbose: bool):
    """Contenção, restrições e distância semântica entre 2CQs."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@cli.command("parse")
@click.argument("text")
@schema_option
@format_option
def parse_command(text, schema_path, fmt):
    """Lê consultas (texto ou arquivo) e mostra tamanho e forma canônica."""
    finish(cmd_parse(text, _schema(schema_path), fmt))


@cli.command("eval")
@click.option("--query", "-q", "query_text", required=True, help="Consulta (texto ou arquivo).")
@click.option("--instance", "-i", "instance_text", required=True, help="Instância (texto ou arquivo).")
@schema_option
@format_option
def eval_command(query_text, instance_text, schema_path, fmt):
    """Avalia uma consulta sobre uma instância."""
    finish(cmd_eval(query_text, instance_text, _schema(schema_path), fmt))


@cli.command("core")
@click.option("--query", "-q", "query_text", required=True, help="Consulta (texto ou arquivo).")
@schema_option
@format_option
def core_command(query_text, schema_path, fmt):
    """Calcula o core de uma consulta."""
    finish(cmd_core(query_text, _schema(schema_path), fmt))


@cli.command("equiv")
@click.option("--q1", "q1_text", required=True)
@click.option("--q2", "q2_text", required=True)
@schema_option
@format_option
def equiv_command(q1_text, q2_text, schema_path, fmt):
    """Decide se duas consultas são equivalentes."""
    finish(cmd_equiv(q1_text, q2_text, _schema(schema_path), fmt))


@cli.command("contains")
@click.option("--q1", "q1_text", required=True)
@click.option("--q2", "q2_text", required=True)
@click.option("--witness", is_flag=True, help="Mostra homomorfismo ou contraexemplo.")
@click.option("--trials", type=click.IntRange(min=0), default=DEFAULTS.falsifier_trials,
              show_default=True)
@click.option("--seed", type=int, default=DEFAULTS.seed, show_default=True)
@schema_option
@format_option
def contains_command(q1_text, q2_text, witness, trials, seed, schema_path, fmt):
    """Decide se Q1 está contida em Q2."""
    finish(cmd_contains(q1_text, q2_text, _schema(schema_path), witness, trials, seed, fmt))


@cli.command("restrict")
@click.option("--query", "-q", "query_text", required=True)
@click.option("--type", "kind", type=click.Choice(["1", "2", "3", "4"]),
              help="Tipo da restrição; sem ele, mostra RR(core(Q)).")
@schema_option
@format_option
def restrict_command(query_text, kind, schema_path, fmt):
    """Gera restrições de uma 2CQ."""
    finish(cmd_restrict(query_text, _schema(schema_path), kind, fmt))


@cli.command("maxcont")
@click.option("--q1", "q1_text", required=True)
@click.option("--q2", "q2_text", required=True)
@schema_option
@format_option
def maxcont_command(q1_text, q2_text, schema_path, fmt):
    """Decide se Q1 está maximalmente contida em Q2."""
    finish(cmd_maxcont(q1_text, q2_text, _schema(schema_path), fmt))


@cli.command("graph")
@schema_option
@arity_option
@click.option("--dot", type=click.Path(dir_okay=False), help="Grava o grafo em DOT.")
@click.option("--plot", type=click.Path(dir_okay=False), help="Grava uma figura do grafo.")
@with_cache_options
@format_option
def graph_command(schema_path, arity, dot, plot, cache, no_cache, max_nodes, progress, fmt):
    """Constrói o grafo de contenção maximal."""
    finish(cmd_graph(_schema(schema_path), arity, cache, not no_cache, dot, plot,
                     max_nodes, progress, fmt))


@cli.command("distance")
@schema_option
@arity_option
@click.option("--q1", "q1_text", required=True)
@click.option("--q2", "q2_text", required=True)
@click.option("--witness", is_flag=True, help="Mostra um caminho mínimo.")
@with_cache_options
@format_option
def distance_command(schema_path, arity, q1_text, q2_text, witness, cache, no_cache,
                     max_nodes, progress, fmt):
    """Distância semântica entre duas 2CQs."""
    finish(cmd_distance(_schema(schema_path), arity, q1_text, q2_text, cache, not no_cache,
                        witness, max_nodes, progress, fmt))


@cli.command("opq")
@click.option("--chain-bound", type=click.IntRange(min=0), default=DEFAULTS.chain_bound,
              show_default=True)
@click.option("--relation", default=DEFAULTS.opq_relation, show_default=True)
@click.option("--progress", is_flag=True)
@format_option
def opq_command(chain_bound, relation, progress, fmt):
    """Verifica a tabela de OPQs e a cadeia de consultas bombeadas."""
    finish(cmd_opq(chain_bound, relation, progress, fmt))


if __name__ == "__main__":
    cli()
