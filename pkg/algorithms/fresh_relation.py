from typing import Iterator, Tuple

from utils.query import ConjunctiveQuery
from .base import RestrictionKind, RestrictionOperator, RestrictionType


class FreshRelation(RestrictionOperator):
    """Restrição do tipo 2: acrescenta T(ȳ) para uma relação T do esquema ausente da consulta."""
    tag = RestrictionType.TYPE2

    def candidates(self, query: ConjunctiveQuery) -> Iterator[Tuple[ConjunctiveQuery, RestrictionKind]]:
        used = query.relations
        for relation in self.schema.names:
            if relation in used:
                continue
            yield (query.extend(self.fresh_atom(query, relation)),
                   RestrictionKind(self.tag, (relation,)))
