"""
Inner/outer radial solutions and the spectral matching equation.

The matching condition (equal logarithmic derivatives at r = r0) is used in
the pole-free Wronskian form

    W(eps) = D_in(r0)·D_out'(r0) - D_in'(r0)·D_out(r0),

scaled by |D_in·D_out| + |D_in'·D_out'|. Its zeros are the energy levels.
"""

import cmath
import logging
import math
from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Tuple

import numpy as np
from scipy import optimize

from ..config import SolverConfig, DEFAULT_SOLVER_CONFIG
from ..errors import (
    EvaluatorFailure, HypergeometricError, ScanExhausted, SolverError,
)
from ..hyp import kummer_m, kummer_m_prime, tricomi_u, tricomi_u_prime
from ..model import spectral_params, barrier_top
from .radial import InnerProfile, OuterProfile, outer_far_radius, count_sign_changes

logger = logging.getLogger(__name__)

_BRENT_RTOL = 4 * np.finfo(float).eps
_FULL_XTOL = np.finfo(float).tiny


@dataclass(frozen=True)
class BoundaryValues:
    """Value and r-derivative of D_in or D_out at a radius."""
    value: float
    derivative: float
    imag_residue: float = 0.0
    path: str = "series"

    def log_derivative(self) -> float:
        return self.derivative / self.value


@dataclass(frozen=True)
class SpectralPoint:
    """One energy level (r0, m, n_r, eps) with its matching residual."""
    r0: float
    m: int
    n_r: int
    eps: float
    residual: float

    @property
    def abs_m(self) -> int:
        return abs(self.m)

    def degraded(self, tol: float = DEFAULT_SOLVER_CONFIG.residual_tol) -> bool:
        return self.residual > tol

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# =============================================================================
# AVALIADORES
# =============================================================================

def _inner_series(eps: float, m: int, r0: float, r: float,
                  config: SolverConfig) -> BoundaryValues:
    p = spectral_params(eps, m, r0)
    s = p.abs_m
    z = 1j * 0.5 * r * r
    fm = kummer_m(p.alpha, p.gamma, z, min_digits=config.inner_min_digits, config=config)
    fmp = kummer_m_prime(p.alpha, p.gamma, z, min_digits=config.inner_min_digits, config=config)
    phase = cmath.exp(-0.25j * r * r)
    g = phase * fm.value
    # d/dr of e^(-ir²/4) F(alpha, gamma; ir²/2)
    gp = phase * (-0.5j * r * fm.value + 1j * r * fmp.value)
    rs = r ** s
    d = rs * g
    dp = gp * rs if s == 0 else s * r ** (s - 1) * g + rs * gp
    scale = abs(d) + r * abs(dp) if r > 0 else abs(d) + abs(dp)
    residue = abs(d.imag) / scale if scale > 0 else 0.0
    return BoundaryValues(value=d.real, derivative=dp.real, imag_residue=residue, path="series")


def _inner_ode(eps: float, m: int, r0: float, r: float,
               config: SolverConfig) -> BoundaryValues:
    p = spectral_params(eps, m, r0)
    profile = InnerProfile(p.xi_in, m, r, config=config)
    d, dp = profile.values(r)
    return BoundaryValues(value=float(d[0]), derivative=float(dp[0]), path="ode")


def eval_inner(eps: float, m: int, r0: float, r: float,
               config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> BoundaryValues:
    """
    D_in(r) = r^|m| e^(-ir²/4) F(alpha, gamma; ir²/2) and its r-derivative.

    Falls back to integrating the inner equation when the series loses too
    many digits.

    Raises:
        EvaluatorFailure: If both paths fail
    """
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    try:
        return _inner_series(eps, m, r0, r, config)
    except HypergeometricError as exc:
        logger.debug("inner series failed at eps=%.10g r=%.4g (%s); integrating ODE", eps, r, exc)
        series_error = exc
    try:
        return _inner_ode(eps, m, r0, r, config)
    except (SolverError, ArithmeticError) as exc:
        raise EvaluatorFailure(
            f"D_in failed at eps={eps}, m={m}, r={r}: {series_error}; {exc}") from exc


def _outer_special(eps: float, m: int, r0: float, r: float,
                   config: SolverConfig) -> BoundaryValues:
    p = spectral_params(eps, m, r0)
    s = p.abs_m
    z = 0.5 * r * r
    u = tricomi_u(p.a, p.gamma, z, config=config).value
    up = tricomi_u_prime(p.a, p.gamma, z, config=config).value
    envelope = r ** s * math.exp(-0.25 * r * r)
    d = envelope * u
    dp = envelope * (u * (s / r - 0.5 * r) + up * r)
    return BoundaryValues(value=d, derivative=dp, path="special")


def _outer_ode(eps: float, m: int, r0: float, r: float,
               config: SolverConfig) -> BoundaryValues:
    p = spectral_params(eps, m, r0)
    profile = OuterProfile(p.a, m, r, outer_far_radius(r, eps), config=config)
    d, dp = profile.values(r)
    return BoundaryValues(value=float(d[0]), derivative=float(dp[0]), path="ode")


def eval_outer(eps: float, m: int, r0: float, r: float,
               config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> BoundaryValues:
    """
    D_out(r) = r^|m| e^(-r²/4) Psi(a, gamma; r²/2) and its r-derivative.

    Falls back to inward integration of the outer equation from a large-r
    asymptotic seed.

    Raises:
        EvaluatorFailure: If both paths fail
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    try:
        return _outer_special(eps, m, r0, r, config)
    except HypergeometricError as exc:
        logger.debug("Psi evaluation failed at eps=%.10g r=%.4g (%s); integrating ODE", eps, r, exc)
        special_error = exc
    try:
        return _outer_ode(eps, m, r0, r, config)
    except (SolverError, ArithmeticError) as exc:
        raise EvaluatorFailure(
            f"D_out failed at eps={eps}, m={m}, r={r}: {special_error}; {exc}") from exc


def wronskian(eps: float, m: int, r0: float,
              config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> Tuple[float, BoundaryValues, BoundaryValues]:
    """Scaled Wronskian plus the boundary values it was built from."""
    inner = eval_inner(eps, m, r0, r0, config)
    outer = eval_outer(eps, m, r0, r0, config)
    w = inner.value * outer.derivative - inner.derivative * outer.value
    scale = abs(inner.value * outer.value) + abs(inner.derivative * outer.derivative)
    if scale == 0:
        raise EvaluatorFailure(f"D_in and D_out both vanish at r0={r0}, eps={eps}")
    return w / scale, inner, outer


def mismatch(eps: float, m: int, r0: float,
             config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> float:
    """
    Real-valued matching function; zero exactly at the energy levels.

    Raises:
        EvaluatorFailure: Propagated from the evaluators
    """
    if not r0 > 0:
        raise ValueError(f"r0 must be positive, got {r0}")
    return wronskian(eps, m, r0, config)[0]


# =============================================================================
# CONTAGEM DE NÓS
# =============================================================================

def node_count(eps: float, m: int, r0: float,
               config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> int:
    """Radial nodes of the matched solution at energy eps (eps must be a level)."""
    p = spectral_params(eps, m, r0)
    r_far = outer_far_radius(r0, eps)
    inner = InnerProfile(p.xi_in, m, r0, config=config)
    outer = OuterProfile(p.a, m, r0, r_far, config=config, polynomial_tol=config.bisect_tol)
    inner_step = min(config.node_step, r0 / 50.0)
    inside = count_sign_changes(lambda r: inner.values(r)[0], 0.0, r0, inner_step)
    outside = count_sign_changes(lambda r: outer.values(r)[0], r0, r_far, config.node_step)
    near_zero = [x for x in inside if x < 1e-12]
    return len(inside) - len(near_zero) + len(outside)


# =============================================================================
# BUSCA DE NÍVEIS
# =============================================================================

def _brackets(f_lo: float, f_hi: float) -> bool:
    return f_lo != 0 and f_hi != 0 and math.copysign(1.0, f_lo) != math.copysign(1.0, f_hi)


def _refine_root(func, lo: float, hi: float, f_lo: float, f_hi: float,
                 config: SolverConfig) -> Tuple[float, float]:
    """
    Bracketed Brent iteration to config.bisect_tol, then guarded secant steps.

    A root whose |W| is still above config.residual_tol is polished by a
    second Brent pass down to the last representable digit of eps. Near
    a = -n the outer function carries a·z^(-|m|), so at small r0 the
    residual of the best double may itself stay above the tolerance.
    """
    root = optimize.brentq(func, lo, hi, xtol=config.bisect_tol, rtol=_BRENT_RTOL)
    best, f_best = root, func(root)
    half = 0.5 * config.bisect_tol
    near_lo, near_hi = max(lo, root - half), min(hi, root + half)
    f_near_lo, f_near_hi = func(near_lo), func(near_hi)
    for x, fx in ((near_lo, f_near_lo), (near_hi, f_near_hi)):
        if fx == 0:
            return x, 0.0
    if _brackets(f_near_lo, f_near_hi):
        lo, hi = near_lo, near_hi
        x0, f0, x1, f1 = near_lo, f_near_lo, near_hi, f_near_hi
        for _ in range(config.secant_steps):
            if f1 == f0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            if not (lo <= x2 <= hi):
                break
            f2 = func(x2)
            if abs(f2) < abs(f_best):
                best, f_best = x2, f2
            if f2 == 0:
                break
            x0, f0, x1, f1 = x1, f1, x2, f2
    if abs(f_best) > config.residual_tol:
        polished = optimize.brentq(func, lo, hi, xtol=_FULL_XTOL, rtol=_BRENT_RTOL)
        f_polished = func(polished)
        if abs(f_polished) < abs(f_best):
            best, f_best = polished, f_polished
        logger.debug("polished root %.17g -> %.17g, |W| = %.3g", root, best, abs(f_best))
    return best, abs(f_best)


def _scan_roots(m: int, r0: float, count: int, eps_start: float, eps_max: float,
                step: float, config: SolverConfig) -> List[Tuple[float, float]]:
    def func(e):
        return mismatch(e, m, r0, config)

    roots = []
    e_lo = eps_start
    f_lo = func(e_lo)
    while len(roots) < count:
        e_hi = e_lo + step
        if e_hi > eps_max:
            raise ScanExhausted(
                f"found {len(roots)} of {count} levels for m={m}, r0={r0} below eps={eps_max:.6g}")
        f_hi = func(e_hi)
        if f_lo == 0:
            roots.append((e_lo, 0.0))
        elif f_hi != 0 and math.copysign(1.0, f_lo) != math.copysign(1.0, f_hi):
            roots.append(_refine_root(func, e_lo, e_hi, f_lo, f_hi, config))
        e_lo, f_lo = e_hi, f_hi
    return roots


def find_levels(m: int, r0: float, count: int, eps_start: float = 0.0,
                config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> List[SpectralPoint]:
    """
    The `count` lowest levels for angular number m at radius r0, ascending.

    The eps axis is scanned for sign changes of the matching function; each
    bracket is refined to config.bisect_tol. Every root is labelled by its
    node count, which must equal its index. When labels disagree the scan is
    repeated with half the step.

    Args:
        eps_start: Lower end of the scan (a continuation hint); labels that
            do not start at 0 force a restart from eps = 0

    Raises:
        ScanExhausted: If eps_max = r0²/4 + 4·count + 20 is passed first
    """
    if not r0 > 0:
        raise ValueError("r0 must be positive; use special_case_r0_zero for r0 = 0")
    if not 1 <= count <= config.max_count:
        raise ValueError(f"count must be in [1, {config.max_count}], got {count}")
    eps_max = barrier_top(r0) + 4.0 * count + 20.0
    step = config.scan_step
    start = max(0.0, eps_start)
    for attempt in range(config.scan_halvings + 1):
        roots = _scan_roots(m, r0, count, start, eps_max, step, config)
        labels = [node_count(eps, m, r0, config) for eps, _ in roots]
        if labels == list(range(count)):
            return [SpectralPoint(r0=float(r0), m=int(m), n_r=k, eps=float(eps), residual=float(res))
                    for k, (eps, res) in enumerate(roots)]
        if labels and labels[0] > 0 and start > 0:
            logger.debug("m=%d r0=%.4g: labels %s from eps=%.4g, restarting at 0",
                         m, r0, labels, start)
            start = 0.0
            continue
        logger.debug("m=%d r0=%.4g: labels %s with step %.3g, halving", m, r0, labels, step)
        step *= 0.5
    raise ScanExhausted(f"node labels {labels} do not match level order for m={m}, r0={r0}")


def special_case_r0_zero(m: int, count: int) -> List[SpectralPoint]:
    """Exact circular-oscillator levels eps = 2·n_r + |m| + 1 (matching is ill-posed at r0 = 0)."""
    return [SpectralPoint(r0=0.0, m=int(m), n_r=n_r, eps=float(2 * n_r + abs(m) + 1), residual=0.0)
            for n_r in range(count)]


def levels(m: int, r0: float, count: int,
           config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> List[SpectralPoint]:
    """find_levels for r0 > 0, the exact oscillator spectrum at r0 = 0."""
    if r0 == 0:
        return special_case_r0_zero(m, count)
    return find_levels(m, r0, count, config=config)
