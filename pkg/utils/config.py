from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    """Valores padrão dos parâmetros ajustáveis (sobrescritos pelas flags da CLI)."""
    max_nodes: int = 100_000        # Limite de nós do grafo MC
    chain_bound: int = 10           # Tamanho da cadeia Q_0 ... Q_n verificada
    cache_dir: str = ".mcgraph-cache"
    opq_relation: str = "E"         # Relação binária das consultas de caminho orientado
    falsifier_trials: int = 200     # Instâncias aleatórias testadas pelo falsificador
    falsifier_domain: int = 3       # Número de constantes por instância aleatória
    seed: int = 0


DEFAULTS = Settings()
