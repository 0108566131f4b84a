"""Result record shared by the confluent hypergeometric evaluators."""

import math
from dataclasses import dataclass
from typing import Union, Iterable


Number = Union[float, complex]

# log10 of 2**52
DOUBLE_DIGITS = 15.65


@dataclass(frozen=True)
class HypEval:
    """
    A function value plus accuracy telemetry.

    cancellation_digits is log10(max partial magnitude / |value|) for series
    evaluations and 0 for quadrature paths.
    """
    value: Number
    cancellation_digits: float = 0.0
    terms_used: int = 0

    @property
    def surviving_digits(self) -> float:
        return DOUBLE_DIGITS - self.cancellation_digits

    def scaled(self, factor: Number) -> "HypEval":
        return HypEval(self.value * factor, self.cancellation_digits, self.terms_used)


def is_finite(value: Number) -> bool:
    return math.isfinite(value.real) and math.isfinite(value.imag)


def compensated_sum(terms: Iterable[Number]) -> complex:
    """Sum of complex terms with exact (Shewchuk) summation of each component."""
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
