"""
Invariant suite behind `sombrero validate`.

Each check returns a CheckResult; solver errors raised inside a check turn
into a failed result instead of aborting the run. `run_validation` collects
them into a ValidationReport whose `passed` drives the exit code.
"""

import cmath
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import SolverConfig, DEFAULT_SOLVER_CONFIG, GridSpec
from .errors import SombreroError
from .hyp import kummer_m, kummer_m_prime, tricomi_u, tricomi_u_prime
from .model import gather_level, oscillator_degeneracy, spectral_params
from .oracle import extrapolated, fd_spectrum, read_golden
from .solver import (
    ClusterKind, LevelCurve, capture_radius, clusters, find_levels, fit_asymptotics,
    fit_small_r0, levels, refine_capture_radius, relative_spread, scan_many,
)
from .wavefn import (
    count_nodes, density, density_maxima, expectation_r, hellmann_feynman, normalize,
    p_inside, total_norm,
)

logger = logging.getLogger(__name__)

SWEEP_SEED = 20240517
ORACLE_TOL = 5e-4
ORACLE_R0 = (1.0, 2.0, 4.0, 6.0)
DENSITY_R0_SMALL = 1e-3
DENSITY_R0_LARGE = (4.0, 5.0, 6.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    data: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'passed': self.passed,
            'detail': self.detail,
            'data': self.data,
        }


@dataclass
class ValidationReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def lines(self) -> List[str]:
        summary = sum(c.passed for c in self.checks)
        return [c.line() for c in self.checks] + [f"{summary}/{len(self.checks)} checks passed"]

    def to_dict(self) -> Dict[str, Any]:
        return {'passed': self.passed, 'checks': [c.to_dict() for c in self.checks]}


def _run(name: str, check: Callable[[], Tuple[bool, str, Dict[str, Any]]]) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail, data = check()
    except SombreroError as exc:
        logger.debug("check %s raised", name, exc_info=True)
        passed, detail, data = False, f"{type(exc).__name__}: {exc}", {}
    result = CheckResult(name, bool(passed), detail, data, time.perf_counter() - start)
    logger.info(result.line())
    return result


# ============================================================================
# FUNÇÕES HIPERGEOMÉTRICAS
# ============================================================================

def hyp_identity_errors(samples: int = 200, seed: int = SWEEP_SEED,
                        config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> Dict[str, float]:
    """
    Worst relative error of each function identity over a seeded sweep.

    Both derivatives are checked against exact relations that share no
    evaluation with the derivative formulas: z·M' = a·(M(a+1, b) - M(a, b))
    for Kummer and U(a, b; z) - U'(a, b; z) = U(a, b+1; z) for Tricomi.
    """
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(
        ("kummer_transform", "recurrence", "realness", "kummer_derivative",
         "tricomi_derivative", "tricomi_closed_form", "quadrature_vs_recurrence"), 0.0)

    def record(key, value):
        worst[key] = max(worst[key], float(value))

    for _ in range(samples):
        # sombrero parameters: gamma = |m|+1, alpha = (gamma - i·xi_in)/2, z = i·r0²/2
        m = int(rng.integers(0, 4))
        r0 = float(rng.uniform(0.3, 3.0))
        eps = float(rng.uniform(0.2, 12.0))
        p = spectral_params(eps, m, r0)
        alpha, gamma, iz = p.alpha, p.gamma, 1j * p.z0

        f = kummer_m(alpha, gamma, iz, config=config)
        back = kummer_m(gamma - alpha, gamma, -iz, config=config)
        record("kummer_transform", abs(f.value - cmath.exp(iz) * back.value) / abs(f.value))

        f_b1 = kummer_m(alpha, gamma + 1, iz, config=config).value
        f_up = kummer_m(alpha + 1, gamma + 1, iz, config=config).value
        terms = ((alpha - gamma) * f_b1, gamma * f.value, -alpha * f_up)
        record("recurrence", abs(sum(terms)) / max(abs(t) for t in terms))

        rotated = cmath.exp(-0.5 * iz) * f.value
        record("realness", abs(rotated.imag) / abs(rotated.real))

        # z·M'(a, b; z) = a·(M(a+1, b; z) - M(a, b; z))
        fp = kummer_m_prime(alpha, gamma, iz, config=config).value
        f_a1 = kummer_m(alpha + 1, gamma, iz, config=config).value
        terms = (iz * fp, alpha * f_a1, alpha * f.value)
        record("kummer_derivative",
               abs(terms[0] - terms[1] + terms[2]) / max(abs(t) for t in terms))

        a = float(rng.uniform(0.1, 1.0))
        b = float(m + 1)
        z = float(rng.uniform(0.5, 6.0))
        u = tricomi_u(a, b, z, config=config).value
        u_b1 = tricomi_u(a, b + 1.0, z, config=config).value
        up = tricomi_u_prime(a, b, z, config=config).value
        record("tricomi_derivative", abs(u - up - u_b1) / abs(u_b1))

        quad = tricomi_u(a, b, z, method="quadrature", config=config).value
        rec = tricomi_u(a, b, z, method="recurrence", config=config).value
        record("quadrature_vs_recurrence", abs(quad - rec) / abs(quad))

    for a in (0.5, 1.0, 2.0):
        for z in (0.5, 2.0, 10.0):
            value = tricomi_u(a, a + 1.0, z, method="quadrature", config=config).value
            record("tricomi_closed_form", abs(value - z ** (-a)) / z ** (-a))
    return worst


HYP_TOLERANCES = {
    "kummer_transform": 1e-12,
    "recurrence": 1e-12,
    "realness": 1e-10,
    "kummer_derivative": 1e-10,
    "tricomi_derivative": 1e-8,
    "tricomi_closed_form": 1e-12,
    "quadrature_vs_recurrence": 1e-10,
}


def check_hyp_identities(samples: int = 200, seed: int = SWEEP_SEED,
                         config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        errors = hyp_identity_errors(samples, seed, config)
        failed = [k for k, v in errors.items() if v > HYP_TOLERANCES[k]]
        detail = f"{samples} seeded samples" + (f", failed: {', '.join(failed)}" if failed else "")
        return not failed, detail, errors
    return _run("hyp identities", run)


# ============================================================================
# LIMITES
# ============================================================================

def check_oscillator_limit(r0: float = 1e-3, count: int = 5, m_values: Sequence[int] = (0, 1, 2, 3),
                           tol: float = 1e-5,
                           config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        worst = 0.0
        for m in m_values:
            for p in levels(m, r0, count, config):
                worst = max(worst, abs(p.eps - (2 * p.n_r + abs(m) + 1)))
        degeneracy_ok = all(len(gather_level(n)) == oscillator_degeneracy(n) == n + 1
                            for n in range(6))
        passed = worst <= tol and degeneracy_ok
        return passed, f"max |eps - (2n_r+|m|+1)| = {worst:.3g} at r0={r0}", {
            'max_deviation': worst, 'degeneracy_ok': degeneracy_ok}
    return _run("circular oscillator limit", run)


def check_small_r0_law(pairs: Sequence[Tuple[int, int]] = ((0, 0), (0, 1), (1, 0), (1, 1)),
                       samples: int = 10, rel_tol: float = 0.05,
                       config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        r0_values = np.linspace(0.05, 0.5, samples)
        slopes = {}
        for m, n_r in pairs:
            eps = [find_levels(m, float(r0), n_r + 1, config=config)[n_r].eps for r0 in r0_values]
            slopes[f"m={m},n_r={n_r}"] = fit_small_r0(LevelCurve(m, n_r, r0_values, eps))
        worst = max(abs(s + 0.25) / 0.25 for s in slopes.values())
        return worst <= rel_tol, f"r0² slopes within {100 * worst:.2f}% of -1/4", slopes
    return _run("small-r0 law", run)


# ============================================================================
# ORÁCULO
# ============================================================================

def compare_with_oracle(matching: Dict[Tuple[int, float, int], float],
                        oracle: Dict[Tuple[int, float, int], float],
                        tol: float = ORACLE_TOL) -> Tuple[bool, float, List[Tuple[int, float, int]]]:
    """
    Compare two eigenvalue tables keyed by (m, r0, n_r).

    Returns:
        (all within tol, worst deviation, keys beyond tol or missing)
    """
    bad = []
    worst = 0.0
    for key, expected in sorted(oracle.items()):
        if key not in matching:
            bad.append(key)
            continue
        deviation = abs(matching[key] - expected)
        worst = max(worst, deviation)
        if deviation > tol:
            bad.append(key)
    return not bad, worst, bad


def matching_table(m_values, nr_max, r0_values, config) -> Dict[Tuple[int, float, int], float]:
    table = {}
    for m in m_values:
        for r0 in r0_values:
            for p in find_levels(m, float(r0), nr_max + 1, config=config):
                table[(m, float(r0), p.n_r)] = p.eps
    return table


def oracle_table(m_values, nr_max, r0_values, config) -> Dict[Tuple[int, float, int], float]:
    table = {}
    for m in m_values:
        for r0 in r0_values:
            eps = extrapolated(m, float(r0), nr_max + 1, config.oracle_h,
                               float(r0) + config.oracle_margin)
            for k, value in enumerate(eps):
                table[(m, float(r0), k)] = float(value)
    return table


def check_oracle_equivalence(m_values: Sequence[int] = (0, 1, 2, 3), nr_max: int = 3,
                             r0_values: Sequence[float] = ORACLE_R0,
                             tol: float = ORACLE_TOL,
                             config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        matched = matching_table(m_values, nr_max, r0_values, config)
        oracle = oracle_table(m_values, nr_max, r0_values, config)
        passed, worst, bad = compare_with_oracle(matched, oracle, tol)
        return passed, f"{len(oracle)} comparisons, worst deviation {worst:.3g}", {
            'worst': worst, 'failures': [list(k) for k in bad]}
    return _run("oracle equivalence", run)


def check_golden(path, tol: float = ORACLE_TOL,
                 config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        rows = read_golden(path)
        oracle = {(r.m, r.r0, r.k): r.eps_extrapolated for r in rows}
        groups = sorted({(r.m, r.r0) for r in rows})
        count = {key: 1 + max(r.k for r in rows if (r.m, r.r0) == key) for key in groups}
        matched = {}
        for m, r0 in groups:
            for p in find_levels(m, r0, count[(m, r0)], config=config):
                matched[(m, r0, p.n_r)] = p.eps
        passed, worst, bad = compare_with_oracle(matched, oracle, tol)
        return passed, f"{len(rows)} golden rows from {Path(path).name}, worst {worst:.3g}", {
            'worst': worst, 'failures': [list(k) for k in bad]}
    return _run("golden file", run)


# ============================================================================
# FUNÇÕES DE ONDA
# ============================================================================

HF_POINTS = tuple((m, n_r, r0) for m in (0, 1, 2) for n_r in (0, 1) for r0 in (1.5, 3.0))


def check_hellmann_feynman(points: Sequence[Tuple[int, int, float]] = HF_POINTS,
                           config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        results = [hellmann_feynman(m, n_r, r0, config=config) for m, n_r, r0 in points]
        failed = [r for r in results if r.residual > r.tolerance]
        worst = max(r.residual / r.tolerance for r in results)
        data = {f"m={r.m},n_r={r.n_r},r0={r.r0}": {
            'fd_slope': r.fd_slope, 'hf_slope': r.hf_slope, 'p_in': r.p_in} for r in results}
        return not failed, f"{len(results)} points, worst residual/tolerance {worst:.3g}", data
    return _run("Hellmann-Feynman", run)


def check_normalization(points: Sequence[Tuple[int, int, float]] = HF_POINTS,
                        norm_tol: float = 1e-8, gap_tol: float = 1e-10,
                        config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    def run():
        worst_norm = worst_gap = 0.0
        bad_nodes = []
        wanted: Dict[Tuple[int, float], set] = {}
        for m, n_r, r0 in points:
            wanted.setdefault((m, float(r0)), set()).add(n_r)
        for (m, r0), n_rs in sorted(wanted.items()):
            spectrum = levels(m, r0, max(n_rs) + 1, config)
            for n_r in sorted(n_rs):
                sol = normalize(spectrum[n_r], config)
                worst_norm = max(worst_norm, abs(total_norm(sol) - 1.0))
                worst_gap = max(worst_gap, sol.continuity_gap())
                if count_nodes(sol, config) != n_r:
                    bad_nodes.append([m, n_r, r0])
        passed = worst_norm <= norm_tol and worst_gap <= gap_tol and not bad_nodes
        states = sum(len(v) for v in wanted.values())
        return passed, (f"{states} states, |norm - 1| <= {worst_norm:.3g}, "
                        f"continuity gap <= {worst_gap:.3g}"), {
            'states': states, 'norm': worst_norm, 'gap': worst_gap, 'bad_nodes': bad_nodes}
    return _run("normalization", run)


def capture_states(curves: Sequence[LevelCurve],
                   config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> Dict[int, float]:
    """Refined capture radius of each n_r = 0, |m| <= 3 curve, keyed by m."""
    return {c.m: refine_capture_radius(c.m, 0, capture_radius(c), config=config)
            for c in curves if c.n_r == 0 and c.abs_m <= 3}


def check_capture(radii: Dict[int, float], tol: float = 1e-3,
                  config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    """P_in = 1/2 at the capture radius of each ground-state curve."""
    def run():
        if not radii:
            return False, "no capture radius", {}
        report = {}
        for m, r_c in sorted(radii.items()):
            sol = normalize(find_levels(m, r_c, 1, config=config)[0], config)
            report[f"m={m}"] = {'capture_radius': r_c, 'p_in': p_inside(sol)}
        worst = max(abs(v['p_in'] - 0.5) for v in report.values())
        return worst <= tol, f"max |P_in - 1/2| = {worst:.3g} at {len(report)} capture radii", report
    return _run("capture radius", run)


def acceptance_states(radii: Optional[Dict[int, float]] = None) -> List[Tuple[int, int, float]]:
    """(m, n_r, r0) of every state built by the oracle, HF, density and capture checks."""
    states = list(HF_POINTS)
    states += [(m, n_r, r0) for m in range(4) for n_r in range(4) for r0 in ORACLE_R0]
    states += [(0, 3, r0) for r0 in (DENSITY_R0_SMALL,) + DENSITY_R0_LARGE]
    states += [(m, 0, r_c) for m, r_c in sorted((radii or {}).items())]
    return list(dict.fromkeys(states))


def check_density(r0_small: float = DENSITY_R0_SMALL, r0_large: Sequence[float] = DENSITY_R0_LARGE,
                  m: int = 0, n_r: int = 3, rel_tol: float = 1e-3,
                  config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CheckResult:
    """
    n_r + 1 density maxima near the oscillator limit and <r> past capture.

    <r> of the matched state must agree with the finite-difference
    eigenvector to rel_tol·r0. Whether |<r> - r0| shrinks monotonically over
    r0_large is reported in `approaching` but does not fail the check: for
    excited states the ring still spreads across the inner region at these
    radii.
    """
    def run():
        sol = normalize(levels(m, r0_small, n_r + 1, config)[n_r], config)
        grid = np.linspace(0.0, sol.r_far, 4001)
        maxima = density_maxima(density(sol, grid))
        means, oracle_means, gaps = [], [], []
        for r0 in r0_large:
            far = normalize(find_levels(m, r0, n_r + 1, config=config)[n_r], config)
            means.append(expectation_r(far))
            spectrum = fd_spectrum(m, r0, n_r + 1, config.oracle_h, r0 + config.oracle_margin,
                                   with_vectors=True)
            oracle_means.append(spectrum.expectation_r(n_r))
            gaps.append(abs(means[-1] - r0))
        agree = all(abs(x - y) <= rel_tol * r0
                    for x, y, r0 in zip(means, oracle_means, r0_large))
        approaching = all(later <= earlier + 1e-2 * r0
                          for earlier, later, r0 in zip(gaps, gaps[1:], r0_large[1:]))
        passed = maxima == n_r + 1 and agree
        detail = (f"{maxima} maxima at r0={r0_small}, |<r> - r0| = "
                  + ", ".join(f"{g:.3g}" for g in gaps)
                  + (" (approaching)" if approaching else " (not monotone)"))
        return passed, detail, {'maxima': maxima, 'mean_r': means, 'oracle_mean_r': oracle_means,
                                'gaps': gaps, 'approaching': approaching}
    return _run("density profile", run)


# ============================================================================
# CURVAS
# ============================================================================

def validation_grid() -> np.ndarray:
    return GridSpec(r0_min=0.01, r0_max=8.0, n_geometric=8, n_linear=36).build()


def check_curves(curves: Sequence[LevelCurve]) -> CheckResult:
    """No crossings at fixed m and a single slope flip at the capture radius."""
    def run():
        crossings = 0
        by_m: Dict[int, List[LevelCurve]] = {}
        for c in curves:
            by_m.setdefault(c.m, []).append(c)
        for group in by_m.values():
            group.sort(key=lambda c: c.n_r)
            for lower, upper in zip(group, group[1:]):
                crossings += len(lower.crossings(upper)) + int(np.any(upper.eps - lower.eps <= 0))
        flips = {}
        for c in curves:
            if c.n_r != 0 or c.abs_m > 3:
                continue
            slope = np.diff(c.eps)
            flips[f"m={c.m}"] = int(np.count_nonzero(np.signbit(slope[1:]) != np.signbit(slope[:-1])))
            flips[f"m={c.m} capture"] = capture_radius(c)
        single = all(v == 1 for k, v in flips.items() if not k.endswith("capture"))
        return crossings == 0 and single, f"{crossings} fixed-m crossings", {
            'crossings': crossings, 'slope_flips': flips}
    return _run("level curves", run)


def check_clusters(curves: Sequence[LevelCurve]) -> CheckResult:
    def run():
        sizes = {n: len(clusters(curves, ClusterKind.N, n).curves) for n in (5, 6)}
        ground = clusters(curves, ClusterKind.NR, 0, size=5)
        spread_4, spread_7 = ground.spread(4.0), ground.spread(7.0)
        passed = sizes == {5: 3, 6: 4} and spread_7 < spread_4
        return passed, f"n-cluster sizes {sizes}, n_r=0 spread {spread_4:.4g} -> {spread_7:.4g}", {
            'sizes': sizes, 'spread_r0_4': spread_4, 'spread_r0_7': spread_7}
    return _run("clusters", run)


def check_large_r0(curves: Sequence[LevelCurve], m_values: Sequence[int] = (0, 1, 2, 3),
                   windows: Sequence[Tuple[float, float]] = ((4.0, 6.0), (6.0, 8.0))) -> CheckResult:
    """Relative m-spread of A_fit shrinking with the window; A_fit and exponent_fit reported."""
    def run():
        report = {}
        trend_ok = True
        for n_r in sorted({c.n_r for c in curves}):
            group = [c for c in curves if c.n_r == n_r and c.abs_m in m_values]
            if len(group) < 2:
                continue
            spreads = []
            for window in windows:
                fits = [fit_asymptotics(c, window) for c in group]
                spreads.append(relative_spread([f.A_fit for f in fits]))
                report[f"n_r={n_r} window={window}"] = {
                    'fits': [f.to_dict() for f in fits], 'A_spread': spreads[-1]}
            trend_ok = trend_ok and all(b < a for a, b in zip(spreads, spreads[1:]))
        return trend_ok, "A_fit m-spread " + ("decreasing" if trend_ok else "not decreasing"), report
    return _run("large-r0 fits", run)


# ============================================================================
# SUITE
# ============================================================================

def run_validation(config: SolverConfig = DEFAULT_SOLVER_CONFIG, quick: bool = False,
                   golden_path: Optional[str] = None, threads: int = 1) -> ValidationReport:
    """
    Run the invariant suite.

    quick keeps only the checks that need no r0 scan, on reduced parameter
    sets; the full run covers every acceptance criterion.
    """
    report = ValidationReport()
    if quick:
        report.checks.append(check_hyp_identities(samples=20, config=config))
        report.checks.append(check_oscillator_limit(count=3, m_values=(0, 1), config=config))
        report.checks.append(check_oracle_equivalence((0, 1), 1, (1.0, 2.0), config=config))
        report.checks.append(check_hellmann_feynman(((0, 0, 1.5), (1, 0, 3.0)), config=config))
        report.checks.append(check_normalization(((0, 0, 2.0),), config=config))
    else:
        report.checks.append(check_hyp_identities(config=config))
        report.checks.append(check_oscillator_limit(config=config))
        report.checks.append(check_small_r0_law(config=config))
        report.checks.append(check_oracle_equivalence(config=config))
        report.checks.append(check_hellmann_feynman(config=config))
        report.checks.append(check_density(config=config))

        curves = scan_many(range(7), 3, validation_grid(), threads, config)
        try:
            radii = capture_states(curves, config)
        except SombreroError as exc:
            logger.warning("capture radii unavailable: %s", exc)
            radii = {}
        report.checks.append(check_normalization(acceptance_states(radii), config=config))
        report.checks.append(check_capture(radii, config=config))
        report.checks.append(check_curves(curves))
        report.checks.append(check_clusters(curves))
        report.checks.append(check_large_r0([c for c in curves if c.abs_m <= 3]))
    if golden_path is not None and Path(golden_path).exists():
        report.checks.append(check_golden(golden_path, config=config))
    return report
