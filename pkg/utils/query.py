import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from utils.errors import QueryError, SchemaMismatchError
from utils.matching import ConstraintMatcher

Variable = str
Constant = str
VarMapping = Dict[Variable, Variable]

RELATION_NAME = re.compile(r"[A-Z][A-Za-z0-9_]*")
LOWER_NAME = re.compile(r"[a-z][A-Za-z0-9_]*")


def _join(items: Iterable[str]) -> str:
    return ", ".join(items)


@dataclass(frozen=True)
class Schema:
    """Conjunto finito de nomes de relação com suas aridades."""
    relations: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((str(name), int(arity)) for name, arity in self.relations))
        seen = set()
        for name, arity in items:
            if not RELATION_NAME.fullmatch(name):
                raise QueryError(f"Nome de relação inválido: '{name}'")
            if arity < 0:
                raise QueryError(f"Aridade negativa para a relação '{name}'")
            if name in seen:
                raise QueryError(f"Relação '{name}' declarada mais de uma vez")
            seen.add(name)
        object.__setattr__(self, "relations", items)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, int]) -> "Schema":
        return cls(tuple(mapping.items()))

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for relation, arity in self.relations:
            if relation == name:
                return arity
        raise SchemaMismatchError(f"Relação '{name}' não pertence ao esquema")

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.relations)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.relations)

    def render(self) -> str:
        return "\n".join(f"{name}/{arity}" for name, arity in self.relations)


@dataclass(frozen=True)
class Atom:
    relation: str
    args: Tuple[Variable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def rename(self, mapping: Mapping[str, str]) -> "Atom":
        return Atom(self.relation, tuple(mapping.get(v, v) for v in self.args))

    def render(self) -> str:
        return f"{self.relation}({_join(self.args)})"

    def to_dict(self) -> dict:
        return {"relation": self.relation, "args": list(self.args)}


@dataclass(frozen=True)
class ConjunctiveQuery:
    """
    Consulta conjuntiva ``(z̄) <- S1(x̄1), ..., Sn(x̄n)``.

    Átomos repetidos no corpo são descartados na construção (semântica de
    conjuntos); a ordem dos átomos restantes é preservada.
    """
    head: Tuple[Variable, ...]
    body: Tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(dict.fromkeys(self.body)))

    @property
    def arity(self) -> int:
        return len(self.head)

    @property
    def body_variables(self) -> Tuple[Variable, ...]:
        return tuple(dict.fromkeys(v for atom in self.body for v in atom.args))

    @property
    def variables(self) -> Tuple[Variable, ...]:
        return tuple(dict.fromkeys(self.head + self.body_variables))

    @property
    def distinguished(self) -> FrozenSet[Variable]:
        return frozenset(self.head)

    @property
    def relations(self) -> FrozenSet[str]:
        return frozenset(atom.relation for atom in self.body)

    def relation_counts(self) -> Counter:
        return Counter(atom.relation for atom in self.body)

    def is_2cq(self) -> bool:
        return all(count <= 2 for count in self.relation_counts().values())

    def rename(self, mapping: Mapping[str, str]) -> "ConjunctiveQuery":
        """Aplica um mapeamento de variáveis à cabeça e ao corpo."""
        return ConjunctiveQuery(tuple(mapping.get(v, v) for v in self.head),
                                tuple(atom.rename(mapping) for atom in self.body))

    def extend(self, *atoms: Atom) -> "ConjunctiveQuery":
        return ConjunctiveQuery(self.head, self.body + tuple(atoms))

    def without(self, index: int) -> "ConjunctiveQuery":
        return ConjunctiveQuery(self.head, self.body[:index] + self.body[index + 1:])

    def render(self) -> str:
        return f"({_join(self.head)}) <- {_join(atom.render() for atom in self.body)}"

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> dict:
        return {"head": list(self.head), "body": [atom.to_dict() for atom in self.body]}


@dataclass(frozen=True)
class Instance:
    """Conjunto finito de fatos ``R(c1, ..., ca)``."""
    facts: FrozenSet[Tuple[str, Tuple[Constant, ...]]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facts",
                           frozenset((rel, tuple(args)) for rel, args in self.facts))

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, fact) -> bool:
        relation, args = fact
        return (relation, tuple(args)) in self.facts

    def __or__(self, other: "Instance") -> "Instance":
        return Instance(self.facts | other.facts)

    def __le__(self, other: "Instance") -> bool:
        return self.facts <= other.facts

    @property
    def constants(self) -> List[Constant]:
        return sorted({c for _, args in self.facts for c in args})

    def index(self) -> Dict[str, List[Tuple[Constant, ...]]]:
        """Agrupa os fatos por relação (em ordem determinística)."""
        grouped: Dict[str, List[Tuple[Constant, ...]]] = {}
        for relation, args in sorted(self.facts):
            grouped.setdefault(relation, []).append(args)
        return grouped

    def relation_arities(self) -> Dict[str, int]:
        arities: Dict[str, int] = {}
        for relation, args in sorted(self.facts):
            if arities.setdefault(relation, len(args)) != len(args):
                raise SchemaMismatchError(
                    f"A relação '{relation}' aparece com aridades diferentes na instância")
        return arities

    def render(self) -> str:
        return "\n".join(f"{rel}({_join(args)})." for rel, args in sorted(self.facts))

    def to_dict(self) -> dict:
        return {"facts": [{"relation": rel, "args": list(args)}
                          for rel, args in sorted(self.facts)]}


@dataclass(frozen=True)
class FrozenQuery:
    """Banco canônico de uma consulta: variáveis viram constantes."""
    instance: Instance
    head_tuple: Tuple[Constant, ...]


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    not_2cq: List[str] = field(default_factory=list)
    arity_mismatch: bool = False

    @property
    def is_valid(self) -> bool:
        return not self.violations

    @property
    def is_2cq(self) -> bool:
        return self.is_valid and not self.not_2cq

    def to_dict(self) -> dict:
        return {"valid": self.is_valid, "is_2cq": self.is_2cq,
                "violations": list(self.violations), "not_2cq": list(self.not_2cq)}


def validate(query: ConjunctiveQuery, schema: Optional[Schema] = None) -> ValidationReport:
    """
    Verifica se a consulta é bem formada (e, opcionalmente, compatível com o esquema).

    Args:
        query: Consulta a verificar
        schema: Esquema contra o qual os átomos são checados (opcional)

    Returns:
        Relatório com as violações; consultas que não são 2CQ são
        sinalizadas à parte, sem invalidar a consulta
    """
    report = ValidationReport()
    if not query.body:
        report.violations.append("O corpo da consulta não tem átomos")

    arities: Dict[str, int] = {}
    for atom in query.body:
        if not RELATION_NAME.fullmatch(atom.relation):
            report.violations.append(f"Nome de relação inválido: '{atom.relation}'")
        for var in atom.args:
            if not LOWER_NAME.fullmatch(var):
                report.violations.append(f"Nome de variável inválido: '{var}'")
        previous = arities.setdefault(atom.relation, atom.arity)
        if previous != atom.arity:
            report.arity_mismatch = True
            report.violations.append(
                f"A relação '{atom.relation}' é usada com aridades {previous} e {atom.arity}")
        if schema is not None:
            if atom.relation not in schema:
                report.violations.append(f"Relação desconhecida: '{atom.relation}'")
            elif schema.arity(atom.relation) != atom.arity:
                report.arity_mismatch = True
                report.violations.append(
                    f"Aridade incorreta em {atom.render()}: "
                    f"esperado {schema.arity(atom.relation)}")

    body_vars = set(query.body_variables)
    for var in dict.fromkeys(query.head):
        if not LOWER_NAME.fullmatch(var):
            report.violations.append(f"Nome de variável inválido: '{var}'")
        if var not in body_vars:
            report.violations.append(f"A variável da cabeça '{var}' não ocorre no corpo")

    for relation, count in sorted(query.relation_counts().items()):
        if count > 2:
            report.not_2cq.append(f"Não é uma 2CQ: '{relation}' aparece {count} vezes")
    return report


def validate_instance(instance: Instance, schema: Schema) -> None:
    """Levanta SchemaMismatchError se algum fato não respeitar o esquema."""
    for relation, arity in instance.relation_arities().items():
        if relation not in schema:
            raise SchemaMismatchError(f"Relação desconhecida na instância: '{relation}'")
        if schema.arity(relation) != arity:
            raise SchemaMismatchError(
                f"Aridade incorreta para '{relation}' na instância: esperado {schema.arity(relation)}")


def evaluate(query: ConjunctiveQuery, instance: Instance,
             schema: Optional[Schema] = None) -> Set[Tuple[Constant, ...]]:
    """
    Avalia a consulta sobre a instância.

    Args:
        query: Consulta conjuntiva válida
        instance: Instância sobre o mesmo esquema
        schema: Esquema comum (opcional; quando dado, ambos são validados)

    Returns:
        Conjunto das imagens da cabeça por todos os embeddings; para
        consultas booleanas, ``set()`` (falso) ou ``{()}`` (verdadeiro)
    """
    report = validate(query, schema)
    if not report.is_valid:
        raise SchemaMismatchError("; ".join(report.violations))
    if schema is not None:
        validate_instance(instance, schema)

    arities = instance.relation_arities()
    for atom in query.body:
        if arities.get(atom.relation, atom.arity) != atom.arity:
            raise SchemaMismatchError(
                f"{atom.render()} não tem a aridade dos fatos de '{atom.relation}'")

    matcher = ConstraintMatcher(query.body, instance.index())
    return set(matcher.project(query.head))


def freeze(query: ConjunctiveQuery) -> FrozenQuery:
    """
    Constrói o banco canônico da consulta: cada variável ``v`` vira a constante ``c_v``.

    Returns:
        Instância com um fato por átomo e a imagem da cabeça
    """
    constant = {var: f"c_{var}" for var in query.variables}
    facts = frozenset((atom.relation, tuple(constant[v] for v in atom.args))
                      for atom in query.body)
    return FrozenQuery(Instance(facts), tuple(constant[v] for v in query.head))


def query_size(query: ConjunctiveQuery) -> int:
    """Tamanho α + n + Σ|x̄i| da consulta."""
    return query.arity + len(query.body) + sum(atom.arity for atom in query.body)


def relation_arities(*queries: ConjunctiveQuery) -> Dict[str, int]:
    """Aridade de cada relação usada nas consultas."""
    arities: Dict[str, int] = {}
    for query in queries:
        for atom in query.body:
            if arities.setdefault(atom.relation, atom.arity) != atom.arity:
                raise SchemaMismatchError(
                    f"A relação '{atom.relation}' é usada com aridades diferentes")
    return arities
