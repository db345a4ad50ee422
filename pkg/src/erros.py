"""
Hierarquia de exceções do laboratório.

O código de biblioteca levanta estas exceções; apenas a CLI as converte em
códigos de saída. Margens negativas nunca são exceções, são dados.
"""


class ErroLaboratorio(Exception):
    """Raiz de todos os erros do laboratório."""


class DomainError(ErroLaboratorio, ValueError):
    """Ponto fora do domínio ou em uma singularidade da família."""


class InfeasibleGate(DomainError):
    """A porta viola g(v) <= v."""


class SingularQuotient(DomainError):
    """h(t)/t não tem ínfimo definido em K (0 no interior ou h(0) < 0)."""


class SpectrumDomainError(DomainError):
    """Autovalores fora do domínio da função aplicada."""

    def __init__(self, mensagem: str, autovalores: list[float]):
        super().__init__(f"{mensagem}: {autovalores}")
        self.autovalores = autovalores


class DimensionMismatch(ErroLaboratorio, ValueError):
    """Dimensões incompatíveis entre matriz e vetor."""


class ConvergenceError(ErroLaboratorio, ArithmeticError):
    """Jacobi atingiu o limite de varreduras sem convergir."""


class EmptyRegion(ErroLaboratorio):
    """Todas as amostras sorteadas foram rejeitadas pela viabilidade."""

    def __init__(self, mensagem: str, sorteadas: int, rejeitadas: int):
        super().__init__(f"{mensagem} (sorteadas={sorteadas}, rejeitadas={rejeitadas})")
        self.sorteadas = sorteadas
        self.rejeitadas = rejeitadas


class PrecisionUnavailable(ErroLaboratorio):
    """Não há caminho de alta precisão para a função pedida."""


class ConfigError(ErroLaboratorio, ValueError):
    """Configuração de execução inválida."""
