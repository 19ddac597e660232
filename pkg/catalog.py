from typing import Dict, List, Type

from algorithms.base import RestrictionOperator, RestrictionType
from algorithms.duplicate_atom import DuplicateAtom
from algorithms.fresh_relation import FreshRelation
from algorithms.linked_atoms import LinkedAtoms
from algorithms.variable_merge import VariableMerge
from utils.query import Schema


class RestrictionCatalog:
    """Cataloga e fornece instâncias dos operadores de restrição."""
    def __init__(self):
        self._operators: Dict[RestrictionType, Type[RestrictionOperator]] = {}

    def register_operator(self, tag, operator_class: Type[RestrictionOperator]):
        """Registra uma classe de operador no catálogo.

        Args:
            tag: Tipo da restrição (ex: RestrictionType.TYPE1, 'type2', 3).
            operator_class: A classe do operador (deve herdar de RestrictionOperator).
        """
        if not issubclass(operator_class, RestrictionOperator):
            raise TypeError(f"{operator_class.__name__} não é uma subclasse de RestrictionOperator")
        self._operators[RestrictionType.parse(tag)] = operator_class

    def get_operator(self, tag, schema: Schema, **kwargs) -> RestrictionOperator:
        """Obtém uma instância de um operador registrado para o esquema dado.

        Args:
            tag: Tipo da restrição.
            schema: Esquema sobre o qual as restrições são geradas.
            **kwargs: Argumentos adicionais para o construtor do operador.

        Returns:
            Uma instância do operador solicitado.

        Raises:
            KeyError: Se o tipo não estiver registrado.
        """
        kind = RestrictionType.parse(tag)
        if kind not in self._operators:
            raise KeyError(f"Operador '{kind.value}' não encontrado no catálogo.")
        return self._operators[kind](schema=schema, **kwargs)

    def list_operators(self) -> List[RestrictionType]:
        """Lista os tipos registrados, em ordem."""
        return sorted(self._operators, key=lambda tag: tag.value)


# Instância global do catálogo
catalog = RestrictionCatalog()
catalog.register_operator(RestrictionType.TYPE1, VariableMerge)
catalog.register_operator(RestrictionType.TYPE2, FreshRelation)
catalog.register_operator(RestrictionType.TYPE3, DuplicateAtom)
catalog.register_operator(RestrictionType.TYPE4, LinkedAtoms)
