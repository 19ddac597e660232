from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Tuple

from utils.canonical import canonicalize
from utils.errors import ArityMismatchError, NotA2CQError, SchemaMismatchError
from utils.query import Atom, ConjunctiveQuery, Schema, validate


def check_2cq(query: ConjunctiveQuery, schema: Schema) -> None:
    """
    Garante que a consulta é uma 2CQ válida sobre o esquema.

    Raises:
        ArityMismatchError: Átomo com aridade diferente da declarada
        SchemaMismatchError: Relação desconhecida ou consulta mal formada
        NotA2CQError: Alguma relação aparece mais de duas vezes
    """
    report = validate(query, schema)
    if not report.is_valid:
        error = ArityMismatchError if report.arity_mismatch else SchemaMismatchError
        raise error(f"{query.render()}: " + "; ".join(report.violations))
    if not report.is_2cq:
        raise NotA2CQError(f"{query.render()}: " + "; ".join(report.not_2cq))


class RestrictionType(str, Enum):
    TYPE1 = "type1"   # Identifica uma variável com outra
    TYPE2 = "type2"   # Acrescenta um átomo de relação ausente
    TYPE3 = "type3"   # Duplica uma relação usada uma vez, com uma variável restrita
    TYPE4 = "type4"   # Acrescenta dois átomos ligados de relações usadas uma vez

    @classmethod
    def parse(cls, value) -> "RestrictionType":
        """Aceita ``1``, ``"1"``, ``"type1"`` ou ``"Type1"``."""
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text.isdigit():
            text = f"type{text}"
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"Tipo de restrição desconhecido: '{value}'")


@dataclass(frozen=True)
class RestrictionKind:
    """
    Como a restrição foi obtida.

    ``detail`` depende do tipo:
        type1: (y, h(y))
        type2: (T,)
        type3: (T, variável nova, imagem)
        type4: (T1, T2, variável de T1, variável de T2)
    """
    tag: RestrictionType
    detail: Tuple[str, ...]

    def describe(self) -> str:
        d = self.detail
        if self.tag is RestrictionType.TYPE1:
            return f"{d[0]} -> {d[1]}"
        if self.tag is RestrictionType.TYPE2:
            return f"+{d[0]}"
        if self.tag is RestrictionType.TYPE3:
            return f"+{d[0]} com {d[1]} -> {d[2]}"
        return f"+{d[0]}, +{d[1]} com {d[2]} -> {d[3]}"

    def to_dict(self) -> dict:
        return {"type": self.tag.value, "detail": list(self.detail)}


@dataclass(frozen=True)
class RestrictionResult:
    query: ConjunctiveQuery
    kind: RestrictionKind
    parent: ConjunctiveQuery


class RestrictionOperator(ABC):
    tag: RestrictionType

    def __init__(self, schema: Schema, fresh_prefix: str = "y"):
        """
        Inicializa o operador de restrição.

        Args:
            schema: Esquema que define o universo de relações
            fresh_prefix: Prefixo das variáveis novas (seguido de um número serial)
        """
        self.schema = schema
        self.fresh_prefix = fresh_prefix

    @abstractmethod
    def candidates(self, query: ConjunctiveQuery) -> Iterator[Tuple[ConjunctiveQuery, RestrictionKind]]:
        """
        Enumera as restrições deste tipo (podem vir repetidas a menos de renomeação).
        """
        pass

    def check(self, query: ConjunctiveQuery) -> None:
        check_2cq(query, self.schema)

    def generate(self, query: ConjunctiveQuery) -> List[RestrictionResult]:
        """
        Gera todas as restrições sintaticamente distintas deste tipo.

        Args:
            query: 2CQ válida sobre o esquema

        Returns:
            Restrições sem repetição (a menos de renomeação), ordenadas pelo texto canônico
        """
        self.check(query)
        results: Dict[str, RestrictionResult] = {}
        for restricted, kind in self.candidates(query):
            results.setdefault(canonicalize(restricted),
                               RestrictionResult(restricted, kind, query))
        return [results[key] for key in sorted(results)]

    def fresh_variables(self, query: ConjunctiveQuery, count: int) -> List[str]:
        """Nomes ``<prefixo><n>`` que ainda não aparecem na consulta."""
        used = set(query.variables)
        names: List[str] = []
        serial = 1
        while len(names) < count:
            name = f"{self.fresh_prefix}{serial}"
            serial += 1
            if name not in used:
                names.append(name)
        return names

    def fresh_atom(self, query: ConjunctiveQuery, relation: str) -> Atom:
        return Atom(relation, tuple(self.fresh_variables(query, self.schema.arity(relation))))

    @staticmethod
    def used_once(query: ConjunctiveQuery) -> List[str]:
        """Relações que aparecem exatamente uma vez no corpo."""
        return sorted(name for name, count in query.relation_counts().items() if count == 1)
