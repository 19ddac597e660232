"""
Casamento de átomos contra um conjunto de tuplas por relação.

O mesmo mecanismo serve para embeddings de uma consulta em uma instância
(tuplas = fatos) e para homomorfismos entre consultas (tuplas = átomos do
corpo da consulta alvo). Cada átomo é uma restrição sobre suas variáveis;
os domínios são podados por consistência de arco generalizada e a busca
ramifica sempre na variável mais restrita.
"""
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

Domains = Dict[str, Set[str]]
Binding = Dict[str, str]


class ConstraintMatcher:
    def __init__(self, atoms: Sequence, facts: Mapping[str, Sequence[Tuple[str, ...]]]):
        """
        Prepara a busca.

        Args:
            atoms: Átomos (com atributos ``relation`` e ``args``) a serem casados
            facts: Tuplas disponíveis, indexadas pelo nome da relação
        """
        self.atoms = tuple(atoms)
        self.variables: List[str] = []
        self._rank: Dict[str, int] = {}
        for atom in self.atoms:
            for var in atom.args:
                if var not in self._rank:
                    self._rank[var] = len(self.variables)
                    self.variables.append(var)

        # Tuplas de cada átomo já filtradas por tamanho e por variáveis repetidas
        self._tuples = [self._compatible_tuples(atom, facts) for atom in self.atoms]

    @staticmethod
    def _compatible_tuples(atom, facts) -> List[Tuple[str, ...]]:
        compatible = []
        for values in facts.get(atom.relation, ()):
            if len(values) != len(atom.args):
                continue
            seen: Binding = {}
            if all(seen.setdefault(var, value) == value
                   for var, value in zip(atom.args, values)):
                compatible.append(tuple(values))
        return compatible

    def initial_domains(self, fixed: Optional[Mapping[str, str]] = None) -> Domains:
        """
        Calcula os domínios iniciais de cada variável.

        Args:
            fixed: Atribuições obrigatórias (ex.: as impostas pela cabeça)

        Returns:
            Domínio de cada variável dos átomos
        """
        domains: Domains = {}
        for atom, tuples in zip(self.atoms, self._tuples):
            for pos, var in enumerate(atom.args):
                values = {t[pos] for t in tuples}
                domains[var] = values if var not in domains else domains[var] & values
        for var, value in (fixed or {}).items():
            if var in domains:
                domains[var] &= {value}
        return domains

    def _revise(self, domains: Domains) -> bool:
        changed = True
        while changed:
            changed = False
            for atom, tuples in zip(self.atoms, self._tuples):
                supported = [t for t in tuples
                             if all(value in domains[var] for var, value in zip(atom.args, t))]
                if not supported:
                    return False
                for pos, var in enumerate(atom.args):
                    allowed = {t[pos] for t in supported}
                    if len(allowed) < len(domains[var]):
                        domains[var] = allowed
                        changed = True
        return True

    def _pick(self, domains: Domains, candidates: Sequence[str]) -> Optional[str]:
        open_vars = [v for v in candidates if len(domains[v]) > 1]
        if not open_vars:
            return None
        return min(open_vars, key=lambda v: (len(domains[v]), self._rank[v]))

    @staticmethod
    def _copy(domains: Domains) -> Domains:
        return {var: set(values) for var, values in domains.items()}

    def _search(self, domains: Domains) -> Iterator[Binding]:
        if not self._revise(domains):
            return
        var = self._pick(domains, self.variables)
        if var is None:
            yield {v: next(iter(domains[v])) for v in self.variables}
            return
        for value in sorted(domains[var]):
            child = self._copy(domains)
            child[var] = {value}
            yield from self._search(child)

    def solutions(self, fixed: Optional[Mapping[str, str]] = None) -> Iterator[Binding]:
        """Enumera todas as atribuições que satisfazem os átomos."""
        yield from self._search(self.initial_domains(fixed))

    def first(self, fixed: Optional[Mapping[str, str]] = None) -> Optional[Binding]:
        """Retorna a primeira atribuição encontrada ou None."""
        return next(self.solutions(fixed), None)

    def project(self, targets: Sequence[str],
                fixed: Optional[Mapping[str, str]] = None) -> Iterator[Tuple[str, ...]]:
        """
        Enumera as imagens distintas da tupla ``targets``.

        Ramifica apenas nas variáveis de ``targets``; para cada combinação
        basta verificar se existe alguma extensão às demais variáveis.

        Args:
            targets: Variáveis projetadas (podem se repetir)
            fixed: Atribuições obrigatórias

        Returns:
            Iterador de tuplas de valores, sem repetições
        """
        branch = list(dict.fromkeys(targets))
        yield from self._project(self.initial_domains(fixed), branch, tuple(targets))

    def _project(self, domains: Domains, branch: List[str],
                 targets: Tuple[str, ...]) -> Iterator[Tuple[str, ...]]:
        if not self._revise(domains):
            return
        var = self._pick(domains, branch)
        if var is None:
            if next(self._search(self._copy(domains)), None) is not None:
                yield tuple(next(iter(domains[v])) for v in targets)
            return
        for value in sorted(domains[var]):
            child = self._copy(domains)
            child[var] = {value}
            yield from self._project(child, branch, targets)
