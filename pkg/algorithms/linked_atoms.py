from itertools import combinations
from typing import Iterator, Tuple

from utils.query import Atom, ConjunctiveQuery
from .base import RestrictionKind, RestrictionOperator, RestrictionType


class LinkedAtoms(RestrictionOperator):
    """
    Restrição do tipo 4.

    Para duas relações distintas T1 e T2 que aparecem uma vez cada,
    acrescenta T1(ȳ1) e T2(ȳ2) com variáveis novas, identificando uma
    variável de ȳ1 com uma de ȳ2.
    """
    tag = RestrictionType.TYPE4

    def candidates(self, query: ConjunctiveQuery) -> Iterator[Tuple[ConjunctiveQuery, RestrictionKind]]:
        for first, second in combinations(self.used_once(query), 2):
            arity1 = self.schema.arity(first)
            arity2 = self.schema.arity(second)
            fresh = self.fresh_variables(query, arity1 + arity2)
            y1, y2 = fresh[:arity1], fresh[arity1:]

            for i in range(arity1):
                for j in range(arity2):
                    linked = y2[:j] + [y1[i]] + y2[j + 1:]
                    yield (query.extend(Atom(first, tuple(y1)), Atom(second, tuple(linked))),
                           RestrictionKind(self.tag, (first, second, y1[i], y2[j])))
