"""
ODE integrators for the inner and outer radial equations.

Inner region, D_in = r^|m| f(r) with f(0) = 1:

    f'' + (2|m|+1)/r f' + (r²/4 - xi_in) f = 0

integrated outward from a power-series start near r = 0.

Outer region, D_out = r^|m| e^(-r²/4) U(z), z = r²/2, with U solving
Kummer's equation written in t = ln z,

    U_tt + (b - 1 - z) U_t - a z U = 0,

integrated inward from a large-z asymptotic seed. Both directions follow the
growing solution, so the integration is stable, except when a sits on a
non-positive integer -n: U is then the polynomial (-1)^n n! L_n^(b-1)(z),
which is recessive as z -> 0, and the profile uses that closed form. The
profiles keep scipy's dense output so that densities, norms and node counts
are cheap.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize, special

from ..config import SolverConfig, DEFAULT_SOLVER_CONFIG
from ..errors import EvaluatorFailure, GridTooCoarse
from ..hyp.tricomi import tricomi_u_asymptotic

logger = logging.getLogger(__name__)

_SERIES_TERMS = 24
_SERIES_RADIUS = 0.05


def inner_series(xi: float, s: int, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """f and f' from the power series sum c_2k r^2k, valid for small r."""
    r = np.asarray(r, dtype=float)
    coeffs = [1.0, xi / (4.0 * (s + 1))]
    for k in range(2, _SERIES_TERMS):
        coeffs.append((xi * coeffs[k - 1] - 0.25 * coeffs[k - 2]) / (4.0 * k * (k + s)))
    r2 = r * r
    f = np.zeros_like(r)
    fp = np.zeros_like(r)
    for k in reversed(range(len(coeffs))):
        f = f * r2 + coeffs[k]
        if k >= 1:
            fp = fp * r2 + 2 * k * coeffs[k]
    fp = fp * r
    return f, fp


class InnerProfile:
    """Regular solution of the inner equation on [0, r_end]."""

    def __init__(self, xi_in: float, m: int, r_end: float,
                 config: SolverConfig = DEFAULT_SOLVER_CONFIG):
        self.xi = float(xi_in)
        self.s = abs(int(m))
        self.r_end = float(r_end)
        self.r_start = min(_SERIES_RADIUS, 0.5 * self.r_end)
        self._solution = None
        if self.r_end > self.r_start:
            f0, fp0 = inner_series(self.xi, self.s, np.array([self.r_start]))
            sol = integrate.solve_ivp(
                self._rhs, (self.r_start, self.r_end), [f0[0], fp0[0]],
                method="DOP853", rtol=config.ode_rtol, atol=config.ode_atol,
                dense_output=True)
            if not sol.success:
                raise EvaluatorFailure(f"inner ODE failed: {sol.message}")
            self._solution = sol.sol

    def _rhs(self, r, y):
        f, fp = y
        return [fp, -(2 * self.s + 1) / r * fp - (0.25 * r * r - self.xi) * f]

    def reduced(self, r) -> Tuple[np.ndarray, np.ndarray]:
        """f(r), f'(r)."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        f = np.empty_like(r)
        fp = np.empty_like(r)
        near = r <= self.r_start
        if np.any(near):
            f[near], fp[near] = inner_series(self.xi, self.s, r[near])
        if np.any(~near):
            y = self._solution(np.minimum(r[~near], self.r_end))
            f[~near], fp[~near] = y[0], y[1]
        return f, fp

    def values(self, r) -> Tuple[np.ndarray, np.ndarray]:
        """D_in(r), dD_in/dr."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        f, fp = self.reduced(r)
        s = self.s
        rs = r ** s
        d = rs * f
        if s == 0:
            dp = fp
        else:
            dp = s * r ** (s - 1) * f + rs * fp
        return d, dp


def polynomial_degree(a: float, tol: float) -> Optional[int]:
    """n when |a + n| <= tol for some integer n >= 0, else None."""
    n = int(round(-a))
    if n >= 0 and abs(a + n) <= tol:
        return n
    return None


class OuterProfile:
    """
    Decaying solution of the outer equation on [r_lo, r_hi].

    Args:
        polynomial_tol: a within this distance of -n (n >= 0) is taken as -n
            exactly and U becomes a Laguerre polynomial. Callers that only
            need the matched state (node counts, norms) pass the root
            tolerance; the matching fallback keeps 0.
    """

    def __init__(self, a: float, m: int, r_lo: float, r_hi: float,
                 config: SolverConfig = DEFAULT_SOLVER_CONFIG, polynomial_tol: float = 0.0):
        if not r_lo > 0:
            raise EvaluatorFailure(f"outer profile needs r_lo > 0, got {r_lo}")
        self.a = float(a)
        self.s = abs(int(m))
        self.b = self.s + 1.0
        self.r_lo = float(r_lo)
        self.r_hi = float(max(r_hi, r_lo))
        self.degree = polynomial_degree(self.a, polynomial_tol) if polynomial_tol > 0 else None
        if self.degree is not None:
            logger.debug("outer profile a=%.17g m=%d taken as the degree-%d polynomial",
                         self.a, self.s, self.degree)
            self.a = -float(self.degree)
            self.z_far = math.inf
            return
        z_lo = 0.5 * self.r_lo ** 2
        z_far = max(0.5 * self.r_hi ** 2, 2.0 * z_lo + 20.0, 40.0)
        seed_u, seed_ut = self._seed(z_far)
        while seed_u is None:
            z_far *= 2.0
            if z_far > 1e5:
                raise EvaluatorFailure(f"no asymptotic seed for a={self.a:.6g}")
            seed_u, seed_ut = self._seed(z_far)
        self.z_far = z_far
        self.t_lo = math.log(z_lo)
        self.t_far = math.log(z_far)
        logger.debug("outer profile a=%.6g m=%d z in [%.3g, %.3g]", self.a, self.s, z_lo, z_far)
        scale = abs(seed_u) if seed_u else 1.0
        sol = integrate.solve_ivp(
            self._rhs, (self.t_far, self.t_lo), [seed_u / scale, seed_ut / scale],
            method="DOP853", rtol=config.ode_rtol, atol=config.ode_atol,
            dense_output=True)
        if not sol.success:
            raise EvaluatorFailure(f"outer ODE failed: {sol.message}")
        self._scale = scale
        self._solution = sol.sol

    def _seed(self, z: float):
        u, tail = tricomi_u_asymptotic(self.a, self.b, z)
        up, tail_p = tricomi_u_asymptotic(self.a + 1.0, self.b + 1.0, z)
        if max(tail, tail_p) > 1e-15:
            return None, None
        return u, -self.a * z * up

    def _rhs(self, t, y):
        u, ut = y
        z = math.exp(t)
        return [ut, -(self.b - 1.0 - z) * ut + self.a * z * u]

    def _laguerre(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        # U(-n, b; z) = (-1)^n n! L_n^(b-1)(z), d/dz L_n^(k) = -L_(n-1)^(k+1)
        n, k = self.degree, self.s
        factor = (-1.0) ** n * math.factorial(n)
        u = factor * special.eval_genlaguerre(n, k, z)
        if n == 0:
            return u, np.zeros_like(z)
        return u, -factor * special.eval_genlaguerre(n - 1, k + 1, z)

    def kummer(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """U(z) and dU/dz on [z_lo, z_far]; beyond z_far the asymptotic series."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        if self.degree is not None:
            return self._laguerre(z)
        u = np.empty_like(z)
        up = np.empty_like(z)
        inside = z <= self.z_far
        if np.any(inside):
            t = np.clip(np.log(z[inside]), self.t_lo, self.t_far)
            y = self._solution(t) * self._scale
            u[inside] = y[0]
            up[inside] = y[1] / z[inside]
        for idx in np.flatnonzero(~inside):
            zz = z[idx]
            u[idx] = tricomi_u_asymptotic(self.a, self.b, zz)[0]
            up[idx] = -self.a * tricomi_u_asymptotic(self.a + 1.0, self.b + 1.0, zz)[0]
        return u, up

    def values(self, r) -> Tuple[np.ndarray, np.ndarray]:
        """D_out(r), dD_out/dr."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u, up = self.kummer(0.5 * r * r)
        s = self.s
        envelope = r ** s * np.exp(-0.25 * r * r)
        d = envelope * u
        dp = envelope * (u * (s / r - 0.5 * r) + up * r)
        return d, dp


def outer_far_radius(r0: float, eps: float) -> float:
    """r0 + max(8, 4·sqrt(max(eps, 1))): where the outer tail has decayed."""
    return r0 + max(8.0, 4.0 * math.sqrt(max(eps, 1.0)))


def count_sign_changes(func: Callable[[np.ndarray], np.ndarray], r_lo: float, r_hi: float,
                       step: float, max_refine: int = 3) -> List[float]:
    """
    Locate sign changes of func on (r_lo, r_hi) by a grid scan.

    Each step is checked at its midpoint; a step whose midpoint has the
    opposite sign of both ends hides two changes and is refined. Each change
    is confirmed by Brent's method.

    Raises:
        GridTooCoarse: If a step still hides two changes after refinement
    """
    if r_hi <= r_lo:
        return []
    n_steps = max(2, int(math.ceil((r_hi - r_lo) / step)))
    grid = np.linspace(r_lo, r_hi, n_steps + 1)
    values = np.asarray(func(grid), dtype=float)
    mids = 0.5 * (grid[:-1] + grid[1:])
    mid_values = np.asarray(func(mids), dtype=float)
    nodes = []

    def scalar(x):
        return float(np.asarray(func(np.array([x])))[0])

    for i in range(n_steps):
        lo, hi = grid[i], grid[i + 1]
        flo, fhi, fmid = values[i], values[i + 1], mid_values[i]
        if flo == 0:
            continue
        if fhi == 0:
            if i < n_steps - 1:
                nodes.append(float(hi))
            continue
        if np.sign(flo) != np.sign(fhi):
            nodes.append(optimize.brentq(scalar, lo, hi, xtol=1e-12))
        elif fmid != 0 and np.sign(fmid) != np.sign(flo):
            if max_refine <= 0:
                raise GridTooCoarse(f"two sign changes inside [{lo:.6g}, {hi:.6g}]")
            nodes.extend(count_sign_changes(func, lo, hi, (hi - lo) / 4.0, max_refine - 1))
    return nodes
