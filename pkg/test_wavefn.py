#!/usr/bin/env python3
"""
Testes das funções de onda normalizadas.

Este script testa:
1. Normalização, continuidade de R e de R' em r0
2. Contagem de nós e probabilidade interna
3. Densidade radial e seus máximos
4. A verificação de Hellmann-Feynman
5. P_in = 1/2 no raio de captura
"""

import numpy as np
import pytest

from sombrero.errors import NotAnEigenvalue
from sombrero.solver import (
    SpectralPoint, capture_radius, find_levels, refine_capture_radius, scan_levels,
)
from sombrero.wavefn import (
    count_nodes, density, density_maxima, expectation_r, hellmann_feynman, hf_residual,
    normalize, p_inside, total_norm,
)


@pytest.fixture(scope="module")
def solutions():
    """Três estados normalizados de m=1 em r0=2."""
    return [normalize(p) for p in find_levels(1, 2.0, 3)]


# ============================================================================
# NORMALIZAÇÃO
# ============================================================================

def test_normalized(solutions):
    for sol in solutions:
        assert abs(total_norm(sol) - 1.0) <= 1e-8


def test_norm_split_adds_to_one(solutions):
    """C_in²·∫D_in² r + C_out²·∫D_out² r = 1 pela construção de Q."""
    for sol in solutions:
        outside = sol.c_out ** 2 * sol.outer_integral
        assert p_inside(sol) + outside == pytest.approx(1.0, abs=1e-12)


def test_sewn_at_r0(solutions):
    for sol in solutions:
        assert sol.continuity_gap() <= 1e-10
        assert sol.derivative_jump() <= 1e-7
        assert sol.c_in > 0


def test_node_count_matches_label(solutions):
    for sol in solutions:
        assert count_nodes(sol) == sol.point.n_r


def test_p_inside_in_unit_interval(solutions):
    for sol in solutions:
        assert 0.0 < p_inside(sol) < 1.0


def test_expectation_r_in_range(solutions):
    r_mean = expectation_r(solutions[0])
    assert 0.0 < r_mean < solutions[0].r_far


def test_rejects_degraded_point():
    point = SpectralPoint(r0=2.0, m=0, n_r=0, eps=1.0, residual=1e-3)
    with pytest.raises(NotAnEigenvalue):
        normalize(point)


def test_rejects_energy_off_level():
    """Fora de um nível o R' salta em r0."""
    level = find_levels(0, 2.0, 1)[0]
    off = SpectralPoint(r0=2.0, m=0, n_r=0, eps=level.eps + 1e-2, residual=0.0)
    with pytest.raises(NotAnEigenvalue):
        normalize(off)


# ============================================================================
# DENSIDADE
# ============================================================================

def test_density_values(solutions):
    sol = solutions[0]
    rho = density(sol, [0.0, 1.0, sol.r0, 3.0])
    assert rho[0] == 0.0
    assert np.all(rho[1:] > 0)
    with pytest.raises(ValueError):
        density(sol, [-0.5])


def test_density_maxima_synthetic():
    r = np.linspace(0.0, np.pi, 1001)
    assert density_maxima(np.sin(3 * r) ** 2) == 3
    assert density_maxima(np.zeros(10) + 1e-30 * np.arange(10)) == 0


def test_oscillator_density_has_four_maxima():
    """m=0, n_r=3 no limite do oscilador: n_r+1 máximos."""
    sol = normalize(find_levels(0, 1e-3, 4)[3])
    grid = np.linspace(0.0, sol.r_far, 4001)
    assert density_maxima(density(sol, grid)) == 4


# ============================================================================
# HELLMANN-FEYNMAN
# ============================================================================

def test_hellmann_feynman_ground_state():
    """d eps/d r0 por diferença central concorda com (r0/2)(2·P_in - 1)."""
    hf = hellmann_feynman(0, 0, 2.0)
    assert hf.residual <= hf.tolerance
    assert 0.0 < hf.p_in < 1.0


@pytest.mark.slow
def test_hf_residual_excited():
    hf = hellmann_feynman(1, 1, 3.0)
    assert hf_residual(1, 1, 3.0) == pytest.approx(hf.residual)
    assert hf.residual <= hf.tolerance


def test_hellmann_feynman_step_bounds():
    with pytest.raises(ValueError):
        hellmann_feynman(0, 0, 2.0, h=0.1)
    with pytest.raises(ValueError):
        hellmann_feynman(0, 0, 5e-3, h=1e-2)


# ============================================================================
# RAIO DE CAPTURA
# ============================================================================

@pytest.fixture(scope="module")
def ground_capture():
    """Raio de captura refinado da curva (m=0, n_r=0)."""
    curve = scan_levels(0, 0, np.linspace(0.5, 4.0, 15))[0]
    return refine_capture_radius(0, 0, capture_radius(curve))


def _p_in(m, n_r, r0):
    return p_inside(normalize(find_levels(m, r0, n_r + 1)[n_r]))


@pytest.mark.slow
def test_p_inside_is_half_at_capture(ground_capture):
    """No mínimo de eps(r0) o peso interno é 1/2."""
    assert 1.0 < ground_capture < 3.5
    assert abs(_p_in(0, 0, ground_capture) - 0.5) <= 1e-3


@pytest.mark.slow
def test_p_inside_grows_through_capture(ground_capture):
    """P_in cresce com r0 ao longo da curva até pouco além da captura."""
    values = [_p_in(0, 0, f * ground_capture) for f in (0.25, 0.5, 0.75, 1.0, 1.1, 1.2)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))
    assert values[2] < 0.5 < values[-1]


def test_acceptance_states_cover_density_and_capture():
    from sombrero.validation import HF_POINTS, acceptance_states
    states = acceptance_states({0: 1.9, 1: 2.4})
    assert set(HF_POINTS) <= set(states)
    for r0 in (1e-3, 4.0, 5.0, 6.0):
        assert (0, 3, r0) in states
    assert (0, 0, 1.9) in states and (1, 0, 2.4) in states
    assert (3, 3, 6.0) in states
    assert len(states) == len(set(states))


@pytest.mark.slow
def test_density_states_normalized():
    """Estados do perfil de densidade também passam na normalização."""
    from sombrero.validation import check_normalization
    result = check_normalization(((0, 3, 1e-3), (0, 3, 4.0), (0, 3, 6.0)))
    assert result.passed, result.detail
    assert result.data['states'] == 3


@pytest.mark.slow
def test_density_mean_r_matches_oracle():
    """<r> do estado casado concorda com o autovetor de diferenças finitas."""
    from sombrero.validation import check_density
    result = check_density(r0_large=(4.0, 5.0))
    assert result.passed, result.detail
    for ours, oracle, r0 in zip(result.data['mean_r'], result.data['oracle_mean_r'], (4.0, 5.0)):
        assert abs(ours - oracle) <= 1e-3 * r0
