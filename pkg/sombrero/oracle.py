"""
Independent finite-difference eigensolver for the radial problem.

The equation -(1/r)(r R')' + (m²/r² + |r²-r0²|/4) R = eps R is discretized
in flux form on the staggered grid r_j = (j+½)h, j = 0..N-1, with
R = 0 beyond r_max = N·h. Substituting u_j = sqrt(r_j)·R_j makes the
matrix symmetric tridiagonal:

    A_jj     = (r_{j+½} + r_{j-½}) / (r_j h²) + m²/r_j² + V(r_j)
    A_j,j+1  = -r_{j+½} / (h² sqrt(r_j r_{j+1}))

The face at r = 0 carries zero flux, so no boundary condition is needed at
the origin and the scheme stays second order for m = 0. The step is shrunk
so that r0 lies on a cell face, keeping the kink of the potential off the
nodes. Eigenvalues come from LAPACK's Sturm-sequence bisection (stebz).
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import GridInvalid

logger = logging.getLogger(__name__)

MAX_STEP = 0.02
MIN_MARGIN = 10.0
GOLDEN_COLUMNS = ("m", "r0", "k", "eps_extrapolated", "h", "r_max")


@dataclass
class OracleSpectrum:
    """Lowest eigenvalues of one discretization, with grid metadata."""
    m: int
    r0: float
    h: float
    r_max: float
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)
    grid: Optional[np.ndarray] = field(default=None, repr=False)

    def sign_changes(self, k: int) -> int:
        """Interior sign changes of eigenvector k."""
        if self.eigenvectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        vec = self.eigenvectors[:, k]
        vec = vec[np.abs(vec) > 1e-12 * np.max(np.abs(vec))]
        return int(np.count_nonzero(np.signbit(vec[1:]) != np.signbit(vec[:-1])))

    def expectation_r(self, k: int) -> float:
        """<r> of eigenvector k; the columns hold sqrt(h)·R with sum r·(sqrt(h)R)² = 1."""
        if self.eigenvectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        vec = self.eigenvectors[:, k]
        return float(np.sum(self.grid ** 2 * vec ** 2))

    def to_dict(self) -> dict:
        return {
            'm': self.m,
            'r0': self.r0,
            'h': self.h,
            'r_max': self.r_max,
            'eigenvalues': [float(e) for e in self.eigenvalues],
        }


def effective_step(r0: float, h: float) -> float:
    """Largest step <= h that puts r0 on a cell face."""
    if r0 <= 0:
        return h
    cells = max(1, int(math.ceil(r0 / h - 1e-9)))
    return r0 / cells


def tridiagonal(m: int, r0: float, h: float, r_max: float):
    """Diagonal, off-diagonal and grid of the symmetric discretization."""
    n = int(round(r_max / h))
    j = np.arange(n, dtype=float)
    r = (j + 0.5) * h
    faces_up = (j + 1.0) * h
    faces_down = j * h
    potential = 0.25 * np.abs(r * r - r0 * r0)
    diag = (faces_up + faces_down) / (r * h * h) + (m * m) / (r * r) + potential
    off = -faces_up[:-1] / (h * h * np.sqrt(r[:-1] * r[1:]))
    return diag, off, r


def fd_spectrum(m: int, r0: float, count: int, h: float = 0.01, r_max: Optional[float] = None,
                with_vectors: bool = False) -> OracleSpectrum:
    """
    Lowest `count` eigenvalues of the discretized radial problem.

    Args:
        m: Angular quantum number (sign irrelevant)
        r0: Sombrero radius, >= 0
        count: Number of eigenvalues
        h: Requested step; shrunk so that r0 is a cell face
        r_max: Outer wall, defaults to r0 + 10 rounded up to the step
        with_vectors: Also return the eigenvectors as samples of R

    Raises:
        GridInvalid: If h > 0.02 or r_max < r0 + 10
    """
    if r0 < 0:
        raise GridInvalid(f"r0 must be non-negative, got {r0}")
    if not 0 < h <= MAX_STEP:
        raise GridInvalid(f"step {h} outside (0, {MAX_STEP}]")
    if count < 1:
        raise GridInvalid(f"count must be positive, got {count}")
    if r_max is None:
        r_max = r0 + MIN_MARGIN
    if r_max < r0 + MIN_MARGIN - 1e-12:
        raise GridInvalid(f"r_max={r_max} closer than {MIN_MARGIN} to r0={r0}")

    step = effective_step(r0, h)
    cells = int(math.ceil(r_max / step - 1e-9))
    r_wall = cells * step
    diag, off, grid = tridiagonal(abs(m), r0, step, r_wall)
    if count > diag.size:
        raise GridInvalid(f"{count} eigenvalues requested from a {diag.size}-point grid")

    logger.debug("fd_spectrum m=%d r0=%.4g h=%.5g N=%d", m, r0, step, diag.size)
    result = eigh_tridiagonal(diag, off, eigvals_only=not with_vectors,
                              select='i', select_range=(0, count - 1),
                              lapack_driver='stebz')
    if with_vectors:
        values, vectors = result
        # u = sqrt(r)·R
        vectors = vectors / np.sqrt(grid)[:, None]
        vectors = vectors * np.sign(vectors[0, :])
    else:
        values, vectors = result, None
    return OracleSpectrum(m=m, r0=r0, h=step, r_max=r_wall,
                          eigenvalues=np.asarray(values, dtype=float),
                          eigenvectors=vectors, grid=grid if with_vectors else None)


def sturm_count(diag: np.ndarray, off: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the tridiagonal matrix below x."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    for i in range(diag.size):
        coupling = off[i - 1] ** 2 / q if i > 0 else 0.0
        q = diag[i] - x - coupling
        if q == 0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def spectrum_sturm_count(spectrum: OracleSpectrum, x: float) -> int:
    """Sturm count at x on the grid that produced the spectrum."""
    diag, off, _ = tridiagonal(abs(spectrum.m), spectrum.r0, spectrum.h, spectrum.r_max)
    return sturm_count(diag, off, x)


def richardson(eps_h, eps_h2):
    """Second-order extrapolation (4·eps_{h/2} - eps_h)/3."""
    if isinstance(eps_h, (list, tuple)):
        eps_h, eps_h2 = np.asarray(eps_h), np.asarray(eps_h2)
    return (4.0 * eps_h2 - eps_h) / 3.0


def extrapolated(m: int, r0: float, count: int, h: float = 0.01,
                 r_max: Optional[float] = None) -> np.ndarray:
    """Richardson-extrapolated eigenvalues from steps h and h/2 on the same wall."""
    coarse = fd_spectrum(m, r0, count, h, r_max)
    fine = fd_spectrum(m, r0, count, coarse.h / 2.0, coarse.r_max)
    return richardson(coarse.eigenvalues, fine.eigenvalues)


# ============================================================================
# ARQUIVO GOLDEN
# ============================================================================

@dataclass(frozen=True)
class GoldenRow:
    m: int
    r0: float
    k: int
    eps_extrapolated: float
    h: float
    r_max: float


def golden_rows(m_values: Iterable[int], r0_values: Iterable[float], count: int,
                h: float = 0.01, margin: float = MIN_MARGIN) -> List[GoldenRow]:
    """Extrapolated oracle values for every (m, r0), in (m, r0, k) order."""
    rows = []
    r0_values = sorted(r0_values)
    for m in sorted(m_values):
        for r0 in r0_values:
            eps = extrapolated(m, r0, count, h, r0 + margin)
            for k, value in enumerate(eps):
                rows.append(GoldenRow(m, r0, k, float(value), h, r0 + margin))
    return rows


def write_golden(path, rows: Sequence[GoldenRow]) -> Path:
    """Write rows to a CSV with 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f)
        writer.writerow(GOLDEN_COLUMNS)
        for row in rows:
            writer.writerow([row.m, f"{row.r0:.17g}", row.k, f"{row.eps_extrapolated:.17g}",
                             f"{row.h:.17g}", f"{row.r_max:.17g}"])
    logger.info("golden file with %d rows written to %s", len(rows), path)
    return path


def read_golden(path) -> List[GoldenRow]:
    with open(path, newline='', encoding='utf-8') as f:
        return [GoldenRow(int(rec['m']), float(rec['r0']), int(rec['k']),
                          float(rec['eps_extrapolated']), float(rec['h']), float(rec['r_max']))
                for rec in csv.DictReader(f)]
