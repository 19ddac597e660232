from typing import Iterator, Tuple

from utils.query import Atom, ConjunctiveQuery
from .base import RestrictionKind, RestrictionOperator, RestrictionType


class DuplicateAtom(RestrictionOperator):
    """
    Restrição do tipo 3.

    Para uma relação T que aparece uma única vez, acrescenta um segundo átomo
    T(ȳ) com variáveis novas, das quais exatamente uma é identificada com
    outra variável: uma variável da consulta ou outra variável nova do
    mesmo átomo.
    """
    tag = RestrictionType.TYPE3

    def candidates(self, query: ConjunctiveQuery) -> Iterator[Tuple[ConjunctiveQuery, RestrictionKind]]:
        for relation in self.used_once(query):
            fresh = self.fresh_variables(query, self.schema.arity(relation))

            for j, y in enumerate(fresh):
                for target in query.variables:
                    args = fresh[:j] + [target] + fresh[j + 1:]
                    yield (query.extend(Atom(relation, tuple(args))),
                           RestrictionKind(self.tag, (relation, y, target)))

            # y_j -> y_i com i < j; o par inverso dá a mesma consulta a menos de renomeação
            for j, y in enumerate(fresh):
                for i in range(j):
                    args = fresh[:j] + [fresh[i]] + fresh[j + 1:]
                    yield (query.extend(Atom(relation, tuple(args))),
                           RestrictionKind(self.tag, (relation, y, fresh[i])))
