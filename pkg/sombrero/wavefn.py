"""
Normalized radial wavefunctions, densities, node counts and the
Hellmann–Feynman consistency check.

R_in = C_in·D_in and R_out = C_out·D_out are sewn at r0 with
C_in = D_out(r0)/Q and C_out = D_in(r0)/Q, where

    Q² = D_out(r0)² ∫_0^r0 D_in² r dr + D_in(r0)² ∫_r0^inf D_out² r dr.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy import integrate

from .config import SolverConfig, DEFAULT_SOLVER_CONFIG
from .errors import NotAnEigenvalue, QuadratureFailure
from .model import spectral_params
from .solver.matching import SpectralPoint, find_levels
from .solver.radial import InnerProfile, OuterProfile, count_sign_changes, outer_far_radius

logger = logging.getLogger(__name__)

_TAIL_RATIO = 1e-18
_INNER_RTOL = 1e-10


def _integrate(func: Callable[[float], float], lo: float, hi: float, rtol: float = _INNER_RTOL) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=rtol, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"integral on [{lo:.6g}, {hi:.6g}] failed: {exc}") from exc
    return value


@dataclass
class RadialSolution:
    """Matched and normalized radial wavefunction of one level."""
    point: SpectralPoint
    c_in: float
    c_out: float
    q: float
    inner_integral: float
    outer_integral: float
    r_far: float
    inner: InnerProfile
    outer: OuterProfile

    @property
    def r0(self) -> float:
        return self.point.r0

    def evaluate(self, r) -> Tuple[np.ndarray, np.ndarray]:
        """R(r) and R'(r): inner profile up to r0, outer beyond."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        values = np.empty_like(r)
        slopes = np.empty_like(r)
        inside = r <= self.r0
        if np.any(inside):
            d, dp = self.inner.values(r[inside])
            values[inside], slopes[inside] = self.c_in * d, self.c_in * dp
        if np.any(~inside):
            d, dp = self.outer.values(r[~inside])
            values[~inside], slopes[~inside] = self.c_out * d, self.c_out * dp
        return values, slopes

    @property
    def evaluator(self) -> Callable:
        return self.evaluate

    def continuity_gap(self) -> float:
        """|R(r0-) - R(r0+)| relative to max|R|."""
        left = self.c_in * self.inner.values(self.r0)[0][0]
        right = self.c_out * self.outer.values(self.r0)[0][0]
        return abs(left - right) / max_abs(self, 0)

    def derivative_jump(self) -> float:
        """|R'(r0+) - R'(r0-)| relative to max|R'|."""
        left = self.c_in * self.inner.values(self.r0)[1][0]
        right = self.c_out * self.outer.values(self.r0)[1][0]
        return abs(left - right) / max_abs(self, 1)


def max_abs(sol: RadialSolution, which: int, n: int = 4001) -> float:
    """max|R| (which=0) or max|R'| (which=1) on a uniform grid of (0, r_far]."""
    grid = np.linspace(sol.r_far / n, sol.r_far, n)
    grid = np.union1d(grid, [sol.r0])
    return float(np.max(np.abs(sol.evaluate(grid)[which])))


def _outer_extent(outer: OuterProfile, r0: float, r_far: float) -> float:
    """Extend r_far until the outer integrand drops below 1e-18 of its peak."""
    while True:
        grid = np.linspace(r0, r_far, 400)
        density = outer.values(grid)[0] ** 2 * grid
        peak = np.max(np.abs(density))
        if peak == 0 or abs(density[-1]) <= _TAIL_RATIO * peak:
            return r_far
        r_far += 2.0


def normalize(point: SpectralPoint, config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> RadialSolution:
    """
    Sew and normalize the solution at a level.

    Raises:
        NotAnEigenvalue: If the residual is too large or R' jumps at r0
        QuadratureFailure: If a norm integral fails
    """
    if point.residual > config.residual_tol:
        raise NotAnEigenvalue(
            f"point (m={point.m}, n_r={point.n_r}, r0={point.r0}) has residual {point.residual:.3g}")
    r0, eps = point.r0, point.eps
    if not r0 > 0:
        raise ValueError("normalize needs r0 > 0")
    p = spectral_params(eps, point.m, r0)
    r_far = outer_far_radius(r0, eps)
    inner = InnerProfile(p.xi_in, point.m, r0, config=config)
    outer = OuterProfile(p.a, point.m, r0, r_far, config=config, polynomial_tol=config.bisect_tol)
    r_far = _outer_extent(outer, r0, r_far)

    d_in = float(inner.values(r0)[0][0])
    d_out = float(outer.values(r0)[0][0])
    inner_integral = _integrate(lambda r: float(inner.values(r)[0][0]) ** 2 * r, 0.0, r0)
    outer_integral = _integrate(lambda r: float(outer.values(r)[0][0]) ** 2 * r, r0, r_far)
    q = math.sqrt(d_out ** 2 * inner_integral + d_in ** 2 * outer_integral)
    if not q > 0:
        raise NotAnEigenvalue(f"Q(r0) = {q} for point {point}")
    c_in, c_out = d_out / q, d_in / q
    if c_in < 0:
        c_in, c_out = -c_in, -c_out

    sol = RadialSolution(point=point, c_in=c_in, c_out=c_out, q=q,
                         inner_integral=inner_integral, outer_integral=outer_integral,
                         r_far=r_far, inner=inner, outer=outer)
    jump = sol.derivative_jump()
    if jump > config.derivative_jump_tol:
        raise NotAnEigenvalue(
            f"R' jumps by {jump:.3g} (relative) at r0={r0} for eps={eps}")
    logger.debug("normalized m=%d n_r=%d r0=%.4g: Q=%.6g P_in=%.6g",
                 point.m, point.n_r, r0, q, c_in ** 2 * inner_integral)
    return sol


def density(sol: RadialSolution, r_samples: Sequence[float]) -> np.ndarray:
    """Radial probability density r·R(r)² at the samples."""
    r = np.asarray(r_samples, dtype=float)
    if np.any(r < 0):
        raise ValueError("r samples must be non-negative")
    return r * sol.evaluate(r)[0] ** 2


def p_inside(sol: RadialSolution) -> float:
    """Probability of finding the particle at r < r0."""
    return float(sol.c_in ** 2 * sol.inner_integral)


def total_norm(sol: RadialSolution, n: int = 200001) -> float:
    """∫ r R² dr on a fresh uniform grid (Simpson), independent of the quadrature."""
    grid = np.union1d(np.linspace(0.0, sol.r_far, n), [sol.r0])
    inner = grid[grid <= sol.r0]
    outer = grid[grid >= sol.r0]
    total = 0.0
    for part in (inner, outer):
        if part.size >= 3:
            total += integrate.simpson(density(sol, part), x=part)
        elif part.size == 2:
            total += integrate.trapezoid(density(sol, part), x=part)
    return float(total)


def expectation_r(sol: RadialSolution) -> float:
    """<r> = ∫ r·R² r dr."""
    inner = _integrate(lambda r: r * r * float(sol.evaluate(r)[0][0]) ** 2, 0.0, sol.r0)
    outer = _integrate(lambda r: r * r * float(sol.evaluate(r)[0][0]) ** 2, sol.r0, sol.r_far)
    return inner + outer


def count_nodes(sol: RadialSolution, config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> int:
    """
    Sign changes of R on (0, r_far).

    Raises:
        GridTooCoarse: If two changes share a grid step after refinement
    """
    values = lambda r: sol.evaluate(r)[0]
    inner_step = min(config.node_step, sol.r0 / 50.0)
    inside = count_sign_changes(values, 0.0, sol.r0, inner_step)
    outside = count_sign_changes(values, sol.r0, sol.r_far, config.node_step)
    return len(inside) + len(outside)


def density_maxima(values: Sequence[float], rel_floor: float = 1e-9) -> int:
    """Number of interior local maxima of a sampled density."""
    v = np.asarray(values, dtype=float)
    floor = rel_floor * np.max(np.abs(v))
    peaks = (v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]) & (v[1:-1] > floor)
    return int(np.count_nonzero(peaks))


@dataclass(frozen=True)
class HellmannFeynman:
    """Both sides of d eps/d r0 = (r0/2)(2·P_in - 1)."""
    m: int
    n_r: int
    r0: float
    fd_slope: float
    hf_slope: float
    p_in: float

    @property
    def residual(self) -> float:
        return abs(self.fd_slope - self.hf_slope)

    @property
    def tolerance(self) -> float:
        return 1e-3 * max(1.0, abs(self.fd_slope))


def hellmann_feynman(m: int, n_r: int, r0: float, h: float = None,
                     config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> HellmannFeynman:
    """
    Compare a centered difference of eps(r0) with (r0/2)(2·P_in - 1).

    The dimensionless form follows from dE/drho0 = mu·omega²·rho0·(2·P_in - 1)
    with r = (2·mu·omega/hbar)^(1/2)·rho and eps = E/(hbar·omega).
    """
    if h is None:
        h = config.hf_step
    if not (1e-4 <= h <= 1e-2) or r0 - h <= 0:
        raise ValueError(f"need 1e-4 <= h <= 1e-2 and r0 - h > 0, got h={h}, r0={r0}")
    count = n_r + 1
    upper = find_levels(m, r0 + h, count, config=config)[n_r].eps
    lower = find_levels(m, r0 - h, count, config=config)[n_r].eps
    point = find_levels(m, r0, count, config=config)[n_r]
    p_in = p_inside(normalize(point, config))
    return HellmannFeynman(m=m, n_r=n_r, r0=r0,
                           fd_slope=(upper - lower) / (2.0 * h),
                           hf_slope=0.5 * r0 * (2.0 * p_in - 1.0),
                           p_in=p_in)


def hf_residual(m: int, n_r: int, r0: float, h: float = None,
                config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> float:
    """|centered difference - (r0/2)(2·P_in - 1)|."""
    return hellmann_feynman(m, n_r, r0, h, config).residual
