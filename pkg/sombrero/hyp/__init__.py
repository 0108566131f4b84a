"""Confluent hypergeometric functions F (Kummer) and Psi (Tricomi)."""

from .evaluation import HypEval
from .gamma import lanczos_gamma
from .kummer import kummer_m, kummer_m_prime
from .tricomi import tricomi_u, tricomi_u_prime, tricomi_u_asymptotic

__all__ = [
    "HypEval",
    "lanczos_gamma",
    "kummer_m",
    "kummer_m_prime",
    "tricomi_u",
    "tricomi_u_prime",
    "tricomi_u_asymptotic",
]
