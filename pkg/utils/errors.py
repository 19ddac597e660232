from typing import Optional


class QueryError(ValueError):
    """Entrada inválida: consulta, instância ou esquema mal formados."""


class QuerySyntaxError(QueryError):
    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, context: str = ""):
        """
        Erro de sintaxe com a posição onde o analisador parou.

        Args:
            message: Descrição do erro
            line: Linha (1-based) do erro, se conhecida
            column: Coluna (1-based) do erro, se conhecida
            context: Trecho do texto em torno do erro
        """
        self.line = line
        self.column = column
        self.context = context
        where = f" (linha {line}, coluna {column})" if line and line > 0 else ""
        super().__init__(f"{message}{where}")


class ArityMismatchError(QueryError):
    pass


class SchemaMismatchError(QueryError):
    pass


class NotA2CQError(QueryError):
    pass


class NotMinimalError(QueryError):
    pass


class GraphError(RuntimeError):
    """Falhas na construção ou no uso de um grafo de contenção maximal."""


class NodeCapExceededError(GraphError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(
            f"O grafo ultrapassou o limite de {limit} nós "
            f"(construção interrompida com {size} nós)")


class DisconnectedGraphError(GraphError):
    pass


class ClosureViolationError(GraphError):
    pass


class GraphFileError(GraphError):
    pass
