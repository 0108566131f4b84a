"""
Level curves eps(r0), their cluster structure and asymptotic fits.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np

from ..config import SolverConfig, DEFAULT_SOLVER_CONFIG
from ..errors import (
    ContinuationBroken, InsufficientRange, MissingCurves, NoCapture, ScanExhausted,
)
from ..model import barrier_top
from .matching import SpectralPoint, levels, find_levels

logger = logging.getLogger(__name__)


@dataclass
class LevelCurve:
    """One level (m, n_r) sampled over an ascending r0 grid."""
    m: int
    n_r: int
    r0: np.ndarray
    eps: np.ndarray
    residual: np.ndarray = field(default=None)

    def __post_init__(self):
        self.r0 = np.asarray(self.r0, dtype=float)
        self.eps = np.asarray(self.eps, dtype=float)
        if self.residual is None:
            self.residual = np.zeros_like(self.eps)
        self.residual = np.asarray(self.residual, dtype=float)
        if self.r0.shape != self.eps.shape:
            raise ValueError("r0 and eps must have the same length")
        if np.any(np.diff(self.r0) <= 0):
            raise ValueError("r0 samples must be strictly increasing")

    @property
    def abs_m(self) -> int:
        return abs(self.m)

    @property
    def n(self) -> int:
        return 2 * self.n_r + abs(self.m)

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.r0.tolist(), self.eps.tolist()))

    def eps_at(self, r0: float) -> float:
        """Linear interpolation of the curve at r0."""
        if r0 < self.r0[0] or r0 > self.r0[-1]:
            raise ValueError(f"r0={r0} outside the sampled range")
        return float(np.interp(r0, self.r0, self.eps))

    def above_barrier(self) -> np.ndarray:
        """Mask of samples lying above the barrier top r0²/4."""
        return self.eps > barrier_top(self.r0)

    def crossings(self, other: "LevelCurve") -> List[float]:
        """r0 values where this curve and `other` cross on their common range."""
        lo = max(self.r0[0], other.r0[0])
        hi = min(self.r0[-1], other.r0[-1])
        grid = np.union1d(self.r0, other.r0)
        grid = grid[(grid >= lo) & (grid <= hi)]
        if grid.size < 2:
            return []
        diff = np.interp(grid, self.r0, self.eps) - np.interp(grid, other.r0, other.eps)
        # a run of exact zeros between opposite signs is one crossing, at its first sample
        nonzero = np.flatnonzero(diff != 0)
        found = []
        for i, j in zip(nonzero[:-1], nonzero[1:]):
            if np.sign(diff[i]) == np.sign(diff[j]):
                continue
            if j == i + 1:
                found.append(float(grid[i] - diff[i] * (grid[j] - grid[i]) / (diff[j] - diff[i])))
            else:
                found.append(float(grid[i + 1]))
        return found

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n_r": self.n_r,
            "r0": self.r0.tolist(),
            "eps": self.eps.tolist(),
            "residual": self.residual.tolist(),
        }


class ClusterKind(Enum):
    """Quantum number shared by the lines of a cluster."""
    N = "n"
    ABS_M = "abs_m"
    NR = "n_r"


@dataclass
class Cluster:
    """A family of level curves sharing n, |m| or n_r."""
    kind: ClusterKind
    label: int
    curves: List[LevelCurve]

    def spread(self, r0: float) -> float:
        """max - min of eps over the member curves at r0."""
        values = [c.eps_at(r0) for c in self.curves]
        return float(max(values) - min(values))

    @property
    def members(self) -> List[Tuple[int, int]]:
        return [(c.n_r, c.abs_m) for c in self.curves]


# =============================================================================
# CONTINUAÇÃO
# =============================================================================

def _solve_at(m: int, r0: float, count: int, hint: Optional[float],
              config: SolverConfig) -> List[SpectralPoint]:
    if r0 == 0:
        return levels(m, 0.0, count, config)
    start = 0.0 if hint is None else max(0.0, hint - config.continuation_window)
    try:
        return find_levels(m, r0, count, eps_start=start, config=config)
    except ScanExhausted as exc:
        raise ContinuationBroken(f"continuation of m={m} broke at r0={r0}: {exc}") from exc


def _max_jump(a: List[SpectralPoint], b: List[SpectralPoint]) -> float:
    return max(abs(p.eps - q.eps) for p, q in zip(a, b))


def scan_levels(m: int, nr_max: int, r0_grid: Sequence[float],
                config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> List[LevelCurve]:
    """
    Follow the levels n_r = 0..nr_max of angular number m over r0_grid.

    Each sample warm-starts the eps scan just below the previous ground
    level; node counts relabel every accepted point. Grid intervals across
    which a level moves by more than config.continuation_jump are bisected.

    Raises:
        ContinuationBroken: If labels cannot be established or a jump
            survives the refinement
    """
    grid = np.asarray(r0_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("r0_grid must be non-empty and strictly ascending")
    count = nr_max + 1
    accepted: List[List[SpectralPoint]] = []

    def refine(r_lo: float, p_lo: List[SpectralPoint], r_hi: float,
               p_hi: List[SpectralPoint], depth: int) -> List[List[SpectralPoint]]:
        if _max_jump(p_lo, p_hi) <= config.continuation_jump:
            return [p_hi]
        if depth >= config.continuation_depth:
            raise ContinuationBroken(
                f"m={m}: levels jump by {_max_jump(p_lo, p_hi):.3g} between r0={r_lo:.6g} and {r_hi:.6g}")
        r_mid = 0.5 * (r_lo + r_hi)
        logger.debug("m=%d: refining between r0=%.6g and %.6g", m, r_lo, r_hi)
        p_mid = _solve_at(m, r_mid, count, p_lo[0].eps, config)
        return (refine(r_lo, p_lo, r_mid, p_mid, depth + 1)
                + refine(r_mid, p_mid, r_hi, p_hi, depth + 1))

    for r0 in grid:
        hint = accepted[-1][0].eps if accepted else None
        points = _solve_at(m, float(r0), count, hint, config)
        if accepted:
            accepted.extend(refine(accepted[-1][0].r0, accepted[-1], float(r0), points, 0))
        else:
            accepted.append(points)

    curves = []
    for n_r in range(count):
        curves.append(LevelCurve(
            m=m, n_r=n_r,
            r0=[pts[n_r].r0 for pts in accepted],
            eps=[pts[n_r].eps for pts in accepted],
            residual=[pts[n_r].residual for pts in accepted],
        ))
    return curves


def scan_many(m_values: Sequence[int], nr_max: int, r0_grid: Sequence[float],
              threads: int = 1,
              config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> List[LevelCurve]:
    """scan_levels for several m; result ordered by (m, n_r) whatever the thread count."""
    m_values = list(m_values)
    if threads > 1 and len(m_values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda m: scan_levels(m, nr_max, r0_grid, config), m_values))
    else:
        results = [scan_levels(m, nr_max, r0_grid, config) for m in m_values]
    curves = [c for group in results for c in group]
    return sorted(curves, key=lambda c: (c.m, c.n_r))


# =============================================================================
# CLUSTERS
# =============================================================================

def clusters(curves: Sequence[LevelCurve], kind: ClusterKind, label: int,
             size: Optional[int] = None) -> Cluster:
    """
    Gather the curves of one cluster.

    N-cluster n: all (n_r, |m|) with 2·n_r + |m| = n, i.e. floor(n/2)+1 lines.
    ABS_M-cluster: n_r = 0..size-1 at fixed |m|. NR-cluster: |m| = 0..size-1
    at fixed n_r. Without `size` every matching curve present is taken.

    Raises:
        MissingCurves: If a required member is absent
    """
    by_key: Dict[Tuple[int, int], LevelCurve] = {}
    for curve in curves:
        by_key.setdefault((curve.n_r, curve.abs_m), curve)

    if kind is ClusterKind.N:
        wanted = [(n_r, label - 2 * n_r) for n_r in range(label // 2 + 1)]
    elif kind is ClusterKind.ABS_M:
        if size is None:
            wanted = sorted(k for k in by_key if k[1] == label)
        else:
            wanted = [(n_r, label) for n_r in range(size)]
    else:
        if size is None:
            wanted = sorted((k for k in by_key if k[0] == label), key=lambda k: k[1])
        else:
            wanted = [(label, abs_m) for abs_m in range(size)]

    missing = [k for k in wanted if k not in by_key]
    if missing or not wanted:
        raise MissingCurves(f"{kind.value}-cluster {label}: missing (n_r, |m|) {missing}")
    return Cluster(kind=kind, label=label, curves=[by_key[k] for k in wanted])


# =============================================================================
# CAPTURA E ASSINTÓTICAS
# =============================================================================

def capture_radius(curve: LevelCurve) -> float:
    """
    r0 of the interior minimum of eps(r0).

    The minimum is where d eps/d r0 = 0, i.e. where the probability of being
    inside r < r0 equals 1/2. Refined by a parabola through the three
    samples around the discrete minimum.

    Raises:
        NoCapture: If eps is monotone over the sampled range
    """
    i = int(np.argmin(curve.eps))
    if i == 0 or i == curve.eps.size - 1:
        raise NoCapture(f"curve (m={curve.m}, n_r={curve.n_r}) has no interior minimum")
    x = curve.r0[i - 1:i + 2]
    y = curve.eps[i - 1:i + 2]
    c2, c1, _ = np.polyfit(x, y, 2)
    if c2 <= 0:
        return float(curve.r0[i])
    return float(np.clip(-c1 / (2.0 * c2), x[0], x[-1]))


def refine_capture_radius(m: int, n_r: int, r_guess: float, half_width: float = 0.15,
                          samples: int = 13,
                          config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> float:
    """capture_radius on a fine local scan around a coarse estimate."""
    lo = max(r_guess - half_width, 0.5 * r_guess)
    grid = np.linspace(lo, r_guess + half_width, samples)
    return capture_radius(scan_levels(m, n_r, grid, config)[n_r])


@dataclass(frozen=True)
class AsymptoticFit:
    """Small- and large-r0 fits of one curve."""
    m: int
    n_r: int
    c_small: float
    A_fit: float
    exponent_fit: float
    window: Tuple[float, float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m, "n_r": self.n_r,
            "c_small": self.c_small, "A_fit": self.A_fit,
            "exponent_fit": self.exponent_fit, "window": list(self.window),
        }


def fit_asymptotics(curve: LevelCurve, window: Optional[Tuple[float, float]] = None,
                    small_limit: float = 0.5) -> AsymptoticFit:
    """
    Fit the small- and large-r0 behaviour of a curve.

    c_small is the r0² coefficient of eps - (2n_r+|m|+1) on (0, small_limit],
    fitted together with an r0⁴ term that absorbs the curvature. A_fit is the
    least-squares A in eps ≈ r0²/4 - A·r0 over `window` (default [5, max r0]),
    and exponent_fit the slope of log eps against log r0 over the positive
    eps of the same window (NaN with fewer than two).

    Raises:
        InsufficientRange: If either range holds fewer than three samples
    """
    r0, eps = curve.r0, curve.eps
    if window is None:
        window = (5.0, float(r0[-1]))
    small = (r0 > 0) & (r0 <= small_limit)
    large = (r0 >= window[0]) & (r0 <= window[1])
    if small.sum() < 3 or large.sum() < 3:
        raise InsufficientRange(
            f"curve (m={curve.m}, n_r={curve.n_r}) needs >= 3 samples in (0, {small_limit}] "
            f"and in [{window[0]}, {window[1]}]")

    c_small = fit_small_r0(curve, small_limit)

    rl, el = r0[large], eps[large]
    a_fit = float(np.sum(rl * (0.25 * rl * rl - el)) / np.sum(rl * rl))
    positive = el > 0
    if positive.sum() >= 2:
        exponent = float(np.polyfit(np.log(rl[positive]), np.log(el[positive]), 1)[0])
    else:
        exponent = float("nan")
    return AsymptoticFit(m=curve.m, n_r=curve.n_r, c_small=c_small,
                         A_fit=a_fit, exponent_fit=exponent,
                         window=(float(window[0]), float(window[1])))


def fit_small_r0(curve: LevelCurve, small_limit: float = 0.5) -> float:
    """r0² coefficient of eps - (2n_r+|m|+1) on (0, small_limit], with an r0⁴ term."""
    small = (curve.r0 > 0) & (curve.r0 <= small_limit)
    if small.sum() < 3:
        raise InsufficientRange(
            f"curve (m={curve.m}, n_r={curve.n_r}) needs >= 3 samples in (0, {small_limit}]")
    x = curve.r0[small] ** 2
    y = curve.eps[small] - (2 * curve.n_r + curve.abs_m + 1)
    coeffs, *_ = np.linalg.lstsq(np.column_stack([x, x * x]), y, rcond=None)
    return float(coeffs[0])


def relative_spread(values: Sequence[float]) -> float:
    """(max - min)/|mean| of a set of fitted values."""
    values = np.asarray(values, dtype=float)
    return float((values.max() - values.min()) / abs(values.mean()))
