"""
Tricomi function Psi(a, b; z) = U(a, b; z) for real a, positive b and z > 0.

For a > 0 the integral representation is evaluated with scipy's adaptive
quadrature after the substitution t = s/z,

    U(a, b; z) = z^(1-b)/Gamma(a) * int_0^inf e^-s s^(a-1) (s+z)^(b-a-1) ds,

which keeps the integrand scale independent of z. For a <= 0 the pair
U(a+N), U(a+N+1) with a+N >= 1 is obtained by quadrature and the three-term
recurrence in the first parameter is run downward, the stable direction
since U is the minimal solution as a -> +inf.
"""

import math
import warnings

import numpy as np
from scipy import integrate

from ..config import SolverConfig, DEFAULT_SOLVER_CONFIG
from ..errors import QuadratureFailure, RecurrenceUnstable
from .evaluation import HypEval
from .gamma import lanczos_gamma


def _quad(func, lo, hi, rtol, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=rtol,
                                           limit=200, **kwargs)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"quadrature on [{lo}, {hi}] failed: {exc}") from exc
    return value, abserr


def _peak(a: float, b: float, z: float) -> float:
    """Location of the maximum of e^-s s^(a-1) (s+z)^(b-a-1), or 0."""
    # s² + (z + 2 - b) s - (a-1) z = 0
    p = z + 2.0 - b
    disc = p * p + 4.0 * (a - 1.0) * z
    if disc < 0:
        return 0.0
    return max(0.0, 0.5 * (-p + math.sqrt(disc)))


def _tricomi_quadrature(a: float, b: float, z: float, config: SolverConfig) -> HypEval:
    rtol = config.quad_rtol
    expo = b - a - 1.0

    def smooth(s):
        return math.exp(-s) * (s + z) ** expo

    def full(s):
        return math.exp(-s) * s ** (a - 1.0) * (s + z) ** expo

    pieces = []
    # [0, z]: algebraic endpoint singularity s^(a-1) handled by the weight
    s1 = min(z, 1.0)
    value, err = _quad(smooth, 0.0, s1, rtol, weight="alg", wvar=(a - 1.0, 0.0))
    pieces.append((value, err))
    lo = s1
    for split in sorted({1.0, _peak(a, b, z), 2.0 * _peak(a, b, z)}):
        if split > lo:
            value, err = _quad(full, lo, split, rtol)
            pieces.append((value, err))
            lo = split
    value, err = _quad(full, lo, np.inf, rtol)
    pieces.append((value, err))
    evaluations = len(pieces)

    total = math.fsum(v for v, _ in pieces)
    # each piece is positive and met abserr <= rtol·|piece|
    error = math.fsum(e for _, e in pieces)
    if not total > 0 or error > rtol * total:
        raise QuadratureFailure(
            f"U({a}, {b}; {z}) integral {total:.6g} with error {error:.3g}")
    result = total * z ** (1.0 - b) / lanczos_gamma(a)
    return HypEval(value=result, cancellation_digits=0.0, terms_used=evaluations)


def _downward(a: float, b: float, z: float, steps: int,
              u_hi: float, u_top: float, config: SolverConfig) -> float:
    """
    Run U(c-1) = -(b - 2c - z) U(c) - c (c - b + 1) U(c+1) from c = a+steps to a+1.

    u_hi = U(a+steps), u_top = U(a+steps+1).
    """
    current, upper = u_hi, u_top
    c = a + steps
    for _ in range(steps):
        t1 = -(b - 2.0 * c - z) * current
        t2 = -c * (c - b + 1.0) * upper
        lower = t1 + t2
        scale = abs(t1) + abs(t2)
        if scale > 0 and abs(lower) < config.recurrence_floor * scale:
            raise RecurrenceUnstable(
                f"U({c - 1:.6g}, {b}; {z:.6g}) lost all digits in the recurrence")
        if not math.isfinite(lower):
            raise RecurrenceUnstable(f"U recurrence overflowed at a={c - 1:.6g}")
        current, upper = lower, current
        c -= 1.0
    return current


def tricomi_u(a: float, b: float, z: float, method: str = "auto",
              config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> HypEval:
    """
    Evaluate U(a, b; z).

    Args:
        a: Real first parameter
        b: Positive second parameter (|m|+1 in the sombrero problem)
        z: Positive argument
        method: "auto", "quadrature" (a > 0 only) or "recurrence"

    Raises:
        QuadratureFailure: If an integral misses its tolerance
        RecurrenceUnstable: If the recurrence growth monitor trips
    """
    if not z > 0:
        raise ValueError(f"z must be positive, got {z}")
    if a == 0:
        return HypEval(value=1.0)
    if method == "auto" and a == b - 1.0:
        # U(a, a+1; z) = z^-a
        return HypEval(value=z ** (-a))
    if method == "auto":
        method = "quadrature" if a > 0 else "recurrence"
    if method == "quadrature":
        if a <= 0:
            raise ValueError("quadrature path requires a > 0")
        return _tricomi_quadrature(a, b, z, config)

    steps = max(1, int(math.ceil(1.0 - a)))
    u_hi = _tricomi_quadrature(a + steps, b, z, config).value
    u_top = _tricomi_quadrature(a + steps + 1, b, z, config).value
    value = _downward(a, b, z, steps, u_hi, u_top, config)
    return HypEval(value=value, cancellation_digits=0.0, terms_used=steps)


def tricomi_u_prime(a: float, b: float, z: float, method: str = "auto",
                    config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> HypEval:
    """dU/dz = -a·U(a+1, b+1; z)."""
    if a == 0:
        return HypEval(value=0.0)
    return tricomi_u(a + 1.0, b + 1.0, z, method=method, config=config).scaled(-a)


def tricomi_u_asymptotic(a: float, b: float, z: float, rtol: float = 1e-16):
    """
    Large-z expansion U ~ z^-a sum_k (a)_k (a-b+1)_k / k! (-z)^-k.

    Summation stops at the smallest term. Returns (value, last_term_ratio)
    so callers can judge whether z was large enough.
    """
    # (a)_k or (a-b+1)_k vanishing makes the series a polynomial
    terminating = any(x <= 0 and x == math.floor(x) for x in (a, a - b + 1.0))
    term = 1.0
    terms = [term]
    k = 0
    while k < 400:
        ratio = -(a + k) * (a - b + 1.0 + k) / ((k + 1) * z)
        nxt = term * ratio
        if nxt == 0:
            return z ** (-a) * math.fsum(terms), 0.0
        if not terminating and abs(nxt) > abs(term):
            break
        term = nxt
        terms.append(term)
        k += 1
        if abs(term) < rtol * abs(math.fsum(terms)):
            break
    total = math.fsum(terms)
    return z ** (-a) * total, abs(term / total)
