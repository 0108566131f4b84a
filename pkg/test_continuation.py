#!/usr/bin/env python3
"""
Testes da continuação em r0 e da estrutura de clusters.

Este script testa:
1. Validação e cruzamentos de LevelCurve
2. Montagem de clusters por n, |m| e n_r
3. Raio de captura e ajustes assintóticos em curvas sintéticas
4. Uma varredura real pequena (marcada como lenta)
"""

import warnings

import numpy as np
import pytest

from sombrero.errors import InsufficientRange, MissingCurves, NoCapture
from sombrero.solver import (
    ClusterKind, LevelCurve, capture_radius, clusters, fit_asymptotics, fit_small_r0,
    relative_spread, scan_levels, scan_many,
)


def synthetic_family(n_max: int = 6):
    """Curvas eps = n + 1 + 0.1·|m|·r0 para todos (n_r, m >= 0) com n <= n_max."""
    r0 = np.linspace(0.0, 2.0, 21)
    curves = []
    for n_r in range(n_max // 2 + 1):
        for m in range(n_max - 2 * n_r + 1):
            eps = 2 * n_r + m + 1 + 0.1 * m * r0
            curves.append(LevelCurve(m=m, n_r=n_r, r0=r0, eps=eps))
    return curves


# ============================================================================
# CURVAS
# ============================================================================

def test_curve_validation():
    with pytest.raises(ValueError):
        LevelCurve(m=0, n_r=0, r0=[0.0, 1.0], eps=[1.0])
    with pytest.raises(ValueError):
        LevelCurve(m=0, n_r=0, r0=[1.0, 1.0], eps=[1.0, 1.0])


def test_curve_properties():
    curve = LevelCurve(m=-2, n_r=1, r0=[0.0, 2.0, 4.0], eps=[5.0, 3.0, 4.5])
    assert curve.abs_m == 2
    assert curve.n == 4
    assert curve.eps_at(1.0) == pytest.approx(4.0)
    assert curve.above_barrier().tolist() == [True, True, True]
    assert curve.samples[1] == (2.0, 3.0)
    with pytest.raises(ValueError):
        curve.eps_at(5.0)


def test_crossings():
    r0 = np.linspace(0.0, 2.0, 5)
    rising = LevelCurve(m=0, n_r=0, r0=r0, eps=1.0 + r0)
    flat = LevelCurve(m=1, n_r=0, r0=r0, eps=np.full_like(r0, 2.0))
    assert rising.crossings(flat) == pytest.approx([1.0])
    assert flat.crossings(flat) == []


def test_crossing_on_a_shared_sample():
    """Cruzamento exatamente sobre uma amostra conta uma vez; um toque não conta."""
    r0 = np.linspace(0.0, 2.0, 5)
    flat = LevelCurve(m=1, n_r=0, r0=r0, eps=np.full_like(r0, 2.0))
    falling = LevelCurve(m=0, n_r=0, r0=r0, eps=3.0 - r0)
    assert falling.crossings(flat) == pytest.approx([1.0])
    touching = LevelCurve(m=2, n_r=0, r0=r0, eps=2.0 + (r0 - 1.0) ** 2)
    assert touching.crossings(flat) == []
    plateau = LevelCurve(m=3, n_r=0, r0=r0, eps=np.array([1.0, 2.0, 2.0, 2.0, 3.0]))
    assert plateau.crossings(flat) == pytest.approx([0.5])


# ============================================================================
# CLUSTERS
# ============================================================================

@pytest.mark.parametrize("n,size", [(5, 3), (6, 4), (0, 1)])
def test_n_cluster_sizes(n, size):
    """O cluster n tem floor(n/2)+1 linhas."""
    cluster = clusters(synthetic_family(), ClusterKind.N, n)
    assert len(cluster.curves) == size
    assert all(2 * n_r + abs_m == n for n_r, abs_m in cluster.members)


def test_n_cluster_degenerate_at_origin():
    cluster = clusters(synthetic_family(), ClusterKind.N, 4)
    assert cluster.spread(0.0) == 0.0
    assert cluster.spread(2.0) == pytest.approx(0.8)


def test_abs_m_and_nr_clusters():
    curves = synthetic_family()
    by_m = clusters(curves, ClusterKind.ABS_M, 1, size=3)
    assert by_m.members == [(0, 1), (1, 1), (2, 1)]
    by_nr = clusters(curves, ClusterKind.NR, 0, size=4)
    assert by_nr.members == [(0, 0), (0, 1), (0, 2), (0, 3)]
    assert len(clusters(curves, ClusterKind.NR, 3).curves) == 1


def test_cluster_missing_curves():
    with pytest.raises(MissingCurves):
        clusters(synthetic_family(4), ClusterKind.N, 6)
    with pytest.raises(MissingCurves):
        clusters(synthetic_family(4), ClusterKind.ABS_M, 0, size=5)


# ============================================================================
# CAPTURA E AJUSTES
# ============================================================================

def test_capture_radius_parabola():
    """Mínimo de (r0 - 3.3)² + 1 amostrado em passo 0.5."""
    r0 = np.arange(0.0, 6.01, 0.5)
    curve = LevelCurve(m=0, n_r=0, r0=r0, eps=(r0 - 3.3) ** 2 + 1.0)
    assert capture_radius(curve) == pytest.approx(3.3, abs=1e-10)


def test_no_capture_for_monotone_curve():
    r0 = np.linspace(0.0, 3.0, 7)
    with pytest.raises(NoCapture):
        capture_radius(LevelCurve(m=1, n_r=0, r0=r0, eps=2.0 + r0))


def test_fit_small_r0_recovers_coefficient():
    r0 = np.linspace(0.05, 0.5, 10)
    curve = LevelCurve(m=1, n_r=0, r0=r0, eps=2.0 + 0.25 * r0 ** 2 - 0.01 * r0 ** 4)
    assert fit_small_r0(curve) == pytest.approx(0.25, rel=1e-8)


def test_fit_asymptotics_on_synthetic_curve():
    """eps = r0²/4 - 1.5·r0 + 0.1: A_fit perto de 1.5 na janela [5, 8]."""
    r0 = np.concatenate([np.linspace(0.05, 0.5, 6), np.linspace(1.0, 8.0, 29)])
    eps = np.where(r0 < 1.0, 1.0 + 0.5 * r0 ** 2, 0.25 * r0 ** 2 - 1.5 * r0 + 0.1)
    fit = fit_asymptotics(LevelCurve(m=0, n_r=0, r0=r0, eps=eps))
    assert fit.c_small == pytest.approx(0.5, rel=1e-8)
    assert fit.A_fit == pytest.approx(1.5, abs=0.05)
    assert fit.window == (5.0, 8.0)
    assert fit.to_dict()["m"] == 0


def test_fit_asymptotics_needs_samples():
    curve = LevelCurve(m=0, n_r=0, r0=[0.1, 6.0, 7.0], eps=[1.0, 2.0, 3.0])
    with pytest.raises(InsufficientRange):
        fit_asymptotics(curve)


def test_fit_asymptotics_skips_nonpositive_eps():
    """eps <= 0 na janela fica fora do ajuste em log, sem RuntimeWarning."""
    r0 = np.concatenate([np.linspace(0.05, 0.5, 6), np.linspace(5.0, 8.0, 7)])
    eps = np.where(r0 < 1.0, 1.0 + 0.5 * r0 ** 2, r0 - 6.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit = fit_asymptotics(LevelCurve(m=0, n_r=0, r0=r0, eps=eps))
    assert np.isfinite(fit.exponent_fit)
    eps[r0 >= 5.0] = -1.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit = fit_asymptotics(LevelCurve(m=0, n_r=0, r0=r0, eps=eps))
    assert np.isnan(fit.exponent_fit)


def test_relative_spread():
    assert relative_spread([1.0, 1.1, 0.9]) == pytest.approx(0.2)


# ============================================================================
# VARREDURA REAL
# ============================================================================

@pytest.mark.slow
def test_scan_levels_small_grid():
    """Curvas de m=0 partem do oscilador e mantêm a ordem dos rótulos."""
    grid = [0.0, 0.5, 1.0, 1.5]
    curves = scan_levels(0, 1, grid)
    assert [(c.m, c.n_r) for c in curves] == [(0, 0), (0, 1)]
    ground, excited = curves
    assert ground.eps[0] == 1.0 and excited.eps[0] == 3.0
    assert np.all(excited.eps > ground.eps)
    assert np.all(ground.residual <= 1e-9)
    assert ground.r0[0] == 0.0 and ground.r0[-1] == 1.5


@pytest.mark.slow
def test_scan_many_is_ordered_and_thread_independent():
    grid = [0.5, 1.0]
    serial = scan_many([1, 0], 0, grid, threads=1)
    parallel = scan_many([1, 0], 0, grid, threads=2)
    assert [(c.m, c.n_r) for c in serial] == [(0, 0), (1, 0)]
    for a, b in zip(serial, parallel):
        np.testing.assert_array_equal(a.eps, b.eps)


def test_scan_levels_rejects_bad_grid():
    with pytest.raises(ValueError):
        scan_levels(0, 1, [1.0, 0.5])


@pytest.mark.slow
def test_small_r0_law_on_ground_state():
    """O ajuste em r0² do estado fundamental fica perto de -1/4."""
    from sombrero.validation import check_small_r0_law
    result = check_small_r0_law(pairs=((0, 0),), samples=6)
    assert result.passed, result.detail


@pytest.mark.slow
def test_validation_scan_keeps_labels():
    """Varredura completa |m| <= 6, n_r <= 3: sem ScanExhausted nem ContinuationBroken."""
    from sombrero.validation import validation_grid
    curves = scan_many(range(7), 3, validation_grid())
    assert len(curves) == 28
    by_m = {}
    for c in curves:
        by_m.setdefault(c.m, []).append(c)
    for group in by_m.values():
        group.sort(key=lambda c: c.n_r)
        for lower, upper in zip(group, group[1:]):
            assert np.all(upper.eps > lower.eps)
    for c in curves:
        assert c.eps[0] == pytest.approx(2 * c.n_r + c.m + 1, abs=1e-3)
