"""Exceções do projeto.

Todas derivam de uma exceção embutida (ValueError ou ArithmeticError), então quem
chama pode continuar capturando os tipos padrão.
"""


class YamabeError(Exception):
    """Raiz comum das exceções do projeto."""


class DomainError(YamabeError, ValueError):
    """Argumento fora do domínio (raio não positivo, fora de [RAIO_MINIMO, RAIO_MAXIMO], etc.)."""


class DegenerateTetraError(DomainError):
    """Operação exclusiva de tetraedros reais chamada com uma quádrupla virtual (Q <= 0)."""


class NearBoundaryError(DomainError):
    """Q <= 0 mas o menor raio não é estritamente mínimo dentro da tolerância."""


class NumericError(YamabeError, ArithmeticError):
    """Falha numérica: arccos fora da tolerância, cofatores de sinal errado, valores não finitos."""


class QuadratureError(NumericError):
    """Quadratura adaptativa não atingiu a tolerância pedida."""

    def __init__(self, message, achieved_error):
        super().__init__(message)
        self.achieved_error = achieved_error


class NewtonError(NumericError):
    """Newton amortecido sem passo admissível ou com Hessiana singular."""


class FormatError(YamabeError, ValueError):
    """Documento mal formado. Guarda linha e coluna quando conhecidas."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (linha {line}, coluna {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ComplexError(YamabeError, ValueError):
    """Lista de tetraedros inválida: índice fora do intervalo, duplicata, vértice repetido ou isolado."""


class ConfigError(YamabeError, ValueError):
    """Configuração de fluxo inválida."""


class HypothesisError(YamabeError, ValueError):
    """Monitor chamado num complexo que não satisfaz a hipótese de grau do resultado que ele verifica."""


class NoSolutionError(YamabeError, ValueError):
    """Não existe empacotamento regular plano para o grau pedido."""


class UnsupportedError(YamabeError, ValueError):
    """Hessiana pedida num empacotamento com tetraedro virtual."""


class PreconditionError(YamabeError, ValueError):
    """Empacotamento não satisfaz a pré-condição da análise pedida."""
