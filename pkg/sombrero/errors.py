"""
Hierarquia de exceções do toolkit sombrero.

Todas as falhas numéricas herdam de SombreroError para que a CLI possa
mapeá-las para o código de saída 2.
"""


class SombreroError(Exception):
    """Erro base do pacote."""


# =============================================================================
# FUNÇÕES HIPERGEOMÉTRICAS
# =============================================================================

class HypergeometricError(SombreroError):
    """Falha na avaliação de F (Kummer) ou Ψ (Tricomi)."""


class CancellationExceeded(HypergeometricError):
    """A série perdeu dígitos demais por cancelamento."""

    def __init__(self, message: str, surviving_digits: float = 0.0):
        super().__init__(message)
        self.surviving_digits = surviving_digits


class NoConvergence(HypergeometricError):
    """A série atingiu o limite de termos sem convergir."""


class QuadratureFailure(HypergeometricError):
    """A quadratura adaptativa não atingiu a tolerância pedida."""


class RecurrenceUnstable(HypergeometricError):
    """O monitor de crescimento da recorrência foi disparado."""


# =============================================================================
# MODELO
# =============================================================================

class ModelError(SombreroError):
    """Parâmetros físicos inválidos."""


class InvalidPhysicalParams(ModelError):
    """mu, omega ou hbar não positivos, ou rho0 negativo."""


# =============================================================================
# SOLVERS
# =============================================================================

class SolverError(SombreroError):
    """Falha no casamento, na continuação ou nas funções de onda."""


class EvaluatorFailure(SolverError):
    """Tanto a série quanto a integração da EDO falharam."""


class ScanExhausted(SolverError):
    """A varredura em ε passou de ε_max sem achar todas as raízes."""


class ContinuationBroken(SolverError):
    """Os rótulos por contagem de nós divergem entre amostras vizinhas."""


class MissingCurves(SolverError):
    """Curvas pedidas para um cluster não estão presentes."""


class NoCapture(SolverError):
    """A curva é monótona na faixa amostrada."""


class InsufficientRange(SolverError):
    """A curva não cobre as janelas de ajuste assintótico."""


class NotAnEigenvalue(SolverError):
    """A derivada não é contínua em r0: o ponto não é autovalor."""


class GridTooCoarse(SolverError):
    """Duas trocas de sinal dentro de um mesmo passo da grade."""


# =============================================================================
# ORÁCULO
# =============================================================================

class OracleError(SombreroError):
    """Falha no solver de diferenças finitas."""


class GridInvalid(OracleError):
    """Passo ou extensão da grade fora dos limites aceitos."""
