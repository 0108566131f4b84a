"""
Kummer function F(a, b; z) = M(a, b; z) by its power series.

The series is entire in z but, for imaginary arguments, the partial sums
grow like e^|z| before settling on a value of modest size. Every evaluation
reports how many digits were lost on the way so that callers can switch to
the ODE evaluator in `solver.radial` when too little precision survives.
"""

import math
from typing import Union

from ..config import SolverConfig, DEFAULT_SOLVER_CONFIG
from ..errors import CancellationExceeded, NoConvergence
from .evaluation import HypEval, DOUBLE_DIGITS, compensated_sum, is_finite

Number = Union[float, complex]

# consecutive negligible terms needed to stop
_TAIL_RUN = 3


def kummer_m(a: Number, b: float, z: Number,
             min_digits: float = None,
             config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> HypEval:
    """
    Evaluate M(a, b; z) = sum_k (a)_k/(b)_k z^k/k!.

    Args:
        a: First parameter (complex allowed)
        b: Second parameter, not a non-positive integer
        z: Argument, |z| <= config.series_z_max
        min_digits: Required surviving digits (default config.series_min_digits)

    Raises:
        CancellationExceeded: If fewer than min_digits digits survive
        NoConvergence: If the term cap is reached
    """
    if min_digits is None:
        min_digits = config.series_min_digits
    if b <= 0 and float(b) == math.floor(b):
        raise ValueError(f"b must not be a non-positive integer, got {b}")
    if abs(z) > config.series_z_max:
        raise CancellationExceeded(
            f"|z|={abs(z):.3g} exceeds the series limit {config.series_z_max}", 0.0)

    a = complex(a)
    z = complex(z)
    term = complex(1.0)
    terms = [term]
    partial = term
    peak = 1.0
    quiet = 0
    k = 0
    while True:
        if k >= config.series_max_terms:
            raise NoConvergence(
                f"M({a}, {b}; {z}) did not converge in {config.series_max_terms} terms")
        ratio = (a + k) / (b + k) * z / (k + 1)
        term = term * ratio
        k += 1
        terms.append(term)
        partial += term
        peak = max(peak, abs(partial), abs(term))
        if term == 0:
            # a is a non-positive integer: polynomial
            break
        if abs(term) <= config.series_tail_rtol * abs(partial) and abs(ratio) < 0.5:
            quiet += 1
            if quiet >= _TAIL_RUN:
                break
        else:
            quiet = 0

    value = compensated_sum(terms)
    if not is_finite(value):
        raise NoConvergence(f"M({a}, {b}; {z}) overflowed")
    if abs(value) == 0:
        lost = DOUBLE_DIGITS
    else:
        lost = max(0.0, math.log10(peak / abs(value)))
    surviving = DOUBLE_DIGITS - lost
    if surviving < min_digits:
        raise CancellationExceeded(
            f"M({a:.6g}, {b}; {z:.6g}) keeps only {surviving:.1f} digits", surviving)
    return HypEval(value=value, cancellation_digits=lost, terms_used=k + 1)


def kummer_m_prime(a: Number, b: float, z: Number,
                   min_digits: float = None,
                   config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> HypEval:
    """dM/dz = (a/b)·M(a+1, b+1; z)."""
    shifted = kummer_m(complex(a) + 1, b + 1, z, min_digits=min_digits, config=config)
    return shifted.scaled(complex(a) / b)
