"""
Sintaxe concreta de consultas, instâncias e esquemas.

    consulta:   (x, y) <- R(x, y), R(y, x), L(x), L(y).
    instância:  R(a, b). R(a, c). L(a).
    esquema:    R/2
                L/1

Relações começam com maiúscula; variáveis e constantes com minúscula
(constantes só aparecem em instâncias). O ponto final é opcional.
"""
from typing import List, Optional

from lark import Lark, Token, Transformer
from lark.exceptions import LarkError, UnexpectedInput, VisitError

from utils.errors import ArityMismatchError, QueryError, QuerySyntaxError
from utils.query import Atom, ConjunctiveQuery, Instance, Schema, validate

GRAMMAR = r"""
    queries: query*
    query: head "<-" body "."?
    head: "(" [names] ")"
    body: atom ("," atom)*
    atom: RELATION "(" [names] ")"

    instance: (atom "."?)*

    schema: (declaration ","?)*
    declaration: RELATION "/" INT

    names: LOWER ("," LOWER)*

    RELATION: /[A-Z][A-Za-z0-9_]*/
    LOWER: /[a-z][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.INT
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


class _TreeBuilder(Transformer):
    def names(self, items):
        return [str(token) for token in items]

    def atom(self, items):
        relation, args = items
        return Atom(str(relation), tuple(args or ()))

    def head(self, items):
        [names] = items
        return tuple(names or ())

    def body(self, atoms):
        return tuple(atoms)

    def query(self, items):
        head, body = items
        return ConjunctiveQuery(head, body)

    def queries(self, items):
        return list(items)

    def instance(self, atoms):
        return Instance(frozenset((atom.relation, atom.args) for atom in atoms))

    def declaration(self, items):
        relation, arity = items
        return str(relation), int(arity)

    def schema(self, declarations):
        names = [name for name, _ in declarations]
        duplicated = sorted({name for name in names if names.count(name) > 1})
        if duplicated:
            raise QueryError(f"Relações declaradas mais de uma vez: {', '.join(duplicated)}")
        return Schema(tuple(declarations))


_parser = Lark(GRAMMAR, parser="lalr", start=["query", "queries", "instance", "schema"],
               propagate_positions=True)
_builder = _TreeBuilder()


def _parse(text: str, start: str):
    try:
        tree = _parser.parse(text, start=start)
    except UnexpectedInput as e:
        token = getattr(e, "token", None)
        what = f"símbolo inesperado '{token}'" if isinstance(token, Token) else "entrada inesperada"
        raise QuerySyntaxError(f"Erro de sintaxe: {what}", e.line, e.column,
                               e.get_context(text)) from e
    except LarkError as e:
        raise QuerySyntaxError(f"Erro de sintaxe: {e}") from e
    try:
        return _builder.transform(tree)
    except VisitError as e:
        raise e.orig_exc from e


def _checked(query: ConjunctiveQuery, schema: Optional[Schema]) -> ConjunctiveQuery:
    report = validate(query, schema)
    if not report.is_valid:
        error = ArityMismatchError if report.arity_mismatch else QueryError
        raise error(f"{query.render()}: " + "; ".join(report.violations))
    return query


def parse_query(text: str, schema: Optional[Schema] = None) -> ConjunctiveQuery:
    """
    Lê uma consulta conjuntiva.

    Args:
        text: Texto da consulta
        schema: Esquema opcional para checar relações e aridades

    Returns:
        A consulta, com cabeça e corpo na ordem escrita (átomos repetidos descartados)

    Raises:
        QuerySyntaxError: Texto fora da gramática
        ArityMismatchError: Átomo com aridade diferente da declarada
        QueryError: Variável da cabeça ausente do corpo, relação desconhecida etc.
    """
    return _checked(_parse(text, "query"), schema)


def parse_queries(text: str, schema: Optional[Schema] = None) -> List[ConjunctiveQuery]:
    """Lê um arquivo com várias consultas (uma por linha ou separadas por linhas em branco)."""
    return [_checked(query, schema) for query in _parse(text, "queries")]


def parse_instance(text: str, schema: Optional[Schema] = None) -> Instance:
    """
    Lê uma instância (fatos separados por ponto e/ou espaço em branco).

    Raises:
        QuerySyntaxError: Texto fora da gramática
        ArityMismatchError: Fato com aridade diferente da declarada
    """
    instance = _parse(text, "instance")
    try:
        arities = instance.relation_arities()
    except QueryError as e:
        raise ArityMismatchError(str(e)) from e
    if schema is not None:
        for relation, arity in arities.items():
            if relation not in schema:
                raise QueryError(f"Relação desconhecida na instância: '{relation}'")
            if schema.arity(relation) != arity:
                raise ArityMismatchError(
                    f"Fatos de '{relation}' com aridade {arity}; esperado {schema.arity(relation)}")
    return instance


def parse_schema(text: str) -> Schema:
    """Lê declarações ``R/2`` (uma por linha ou separadas por vírgula)."""
    return _parse(text, "schema")
