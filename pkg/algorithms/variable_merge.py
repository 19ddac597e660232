from typing import Iterator, Tuple

from utils.query import ConjunctiveQuery
from .base import RestrictionKind, RestrictionOperator, RestrictionType


class VariableMerge(RestrictionOperator):
    """Restrição do tipo 1: aplica h que é a identidade exceto em uma variável y."""
    tag = RestrictionType.TYPE1

    def candidates(self, query: ConjunctiveQuery) -> Iterator[Tuple[ConjunctiveQuery, RestrictionKind]]:
        """
        Enumera os pares ordenados (y, h(y)) com y diferente de h(y).

        Uma variável distinguida só pode ser levada em outra variável
        distinguida; variáveis existenciais podem ir para qualquer uma.
        """
        distinguished = query.distinguished
        variables = query.variables
        for y in variables:
            for target in variables:
                if target == y:
                    continue
                if y in distinguished and target not in distinguished:
                    continue
                yield query.rename({y: target}), RestrictionKind(self.tag, (y, target))
