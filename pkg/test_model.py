#!/usr/bin/env python3
"""
Testes do modelo físico e da configuração.

Este script testa:
1. Validação de PhysicalParams e o mapeamento adimensional
2. Os parâmetros espectrais derivados de (eps, m, r0)
3. A degenerescência do oscilador circular
4. Grades em r0, faixas de m e presets
5. Salvar e carregar SombreroConfig em JSON
"""

import math
from pathlib import Path

import numpy as np
import pytest

from sombrero.config import (
    BUILTIN_PRESETS, FigurePreset, GridSpec, RunConfig, SolverConfig, SombreroConfig,
    default_r0_grid, parse_m_range, thread_count,
)
from sombrero.errors import InvalidPhysicalParams, ModelError, SombreroError
from sombrero.model import (
    PhysicalParams, QuantumNumbers, barrier_top, energy_from_eps, eps_from_energy, gather_level,
    nondimensionalize, oscillator_degeneracy, potential, r_from_rho, rho_from_r, spectral_params,
)

PRESETS = Path(__file__).parent / "presets"


# ============================================================================
# MODELO
# ============================================================================

def test_unit_mapping():
    """r0 = sqrt(2·mu·omega/hbar)·rho0."""
    p = PhysicalParams(mu=2.0, omega=3.0, hbar=0.5, rho0=1.5)
    assert nondimensionalize(p) == pytest.approx(math.sqrt(24.0) * 1.5)
    assert rho_from_r(r_from_rho(0.7, p), p) == pytest.approx(0.7)
    assert energy_from_eps(eps_from_energy(4.2, p), p) == pytest.approx(4.2)
    assert eps_from_energy(1.5, p) == pytest.approx(1.0)


@pytest.mark.parametrize("kwargs", [
    {"mu": 0.0, "omega": 1.0, "hbar": 1.0},
    {"mu": 1.0, "omega": -1.0, "hbar": 1.0},
    {"mu": 1.0, "omega": 1.0, "hbar": float("nan")},
    {"mu": 1.0, "omega": 1.0, "hbar": 1.0, "rho0": -0.1},
])
def test_invalid_physical_params(kwargs):
    with pytest.raises(InvalidPhysicalParams):
        PhysicalParams(**kwargs)


def test_error_hierarchy():
    assert issubclass(InvalidPhysicalParams, ModelError)
    assert issubclass(ModelError, SombreroError)


def test_spectral_params():
    """xi_in = r0²/4 - eps, xi_out = -r0²/4 - eps, alpha = (gamma - i·xi_in)/2."""
    p = spectral_params(eps=2.4, m=-1, r0=3.0)
    assert p.gamma == 2
    assert p.abs_m == 1
    assert p.xi_in == pytest.approx(2.25 - 2.4)
    assert p.xi_out == pytest.approx(-2.25 - 2.4)
    assert p.alpha == pytest.approx(complex(1.0, 0.5 * (2.4 - 2.25)))
    assert p.a == pytest.approx(0.5 * (2 - 4.65))
    assert p.z0 == pytest.approx(4.5)


def test_oscillator_parameter_is_nonpositive_integer():
    """No oscilador (r0 = 0) o parâmetro de Tricomi a = -n_r."""
    for n_r in range(4):
        for m in range(3):
            eps = QuantumNumbers(m, n_r).oscillator_eps
            assert spectral_params(eps, m, 0.0).a == pytest.approx(-n_r)


def test_potential_and_barrier():
    assert barrier_top(4.0) == 4.0
    assert potential(0.0, 4.0) == barrier_top(4.0)
    assert potential(4.0, 4.0) == 0.0
    assert potential(5.0, 3.0) == pytest.approx(4.0)


def test_degeneracy_table():
    """O nível eps = n+1 tem n+1 estados (n_r, m) contando os dois sinais de m."""
    for n in range(6):
        states = gather_level(n)
        assert len(states) == oscillator_degeneracy(n) == n + 1
        assert all(2 * n_r + abs(m) == n for n_r, m in states)
    assert sorted(gather_level(2)) == [(0, -2), (0, 2), (1, 0)]


def test_quantum_numbers():
    q = QuantumNumbers(m=-3, n_r=1)
    assert q.abs_m == 3
    assert q.n == 5
    assert q.oscillator_eps == 6.0
    with pytest.raises(ValueError):
        QuantumNumbers(0, -1)


# ============================================================================
# CONFIGURAÇÃO
# ============================================================================

def test_default_grid():
    grid = default_r0_grid()
    assert grid.size == 141
    assert grid[0] == pytest.approx(0.01)
    assert grid[-1] == pytest.approx(7.0)
    assert np.all(np.diff(grid) > 0)


@pytest.mark.parametrize("text,expected", [
    ("0.5,1,2", [0.5, 1.0, 2.0]),
    ("2", [2.0]),
    ("1:3:5", [1.0, 1.5, 2.0, 2.5, 3.0]),
])
def test_grid_parse_values(text, expected):
    np.testing.assert_allclose(GridSpec.parse(text).build(), expected)


def test_grid_parse_hybrid():
    spec = GridSpec.parse("0.05:8")
    grid = spec.build()
    assert grid[0] == pytest.approx(0.05)
    assert grid[-1] == pytest.approx(8.0)


@pytest.mark.parametrize("text,expected", [
    ("0..3", [0, 1, 2, 3]),
    ("-1..1", [-1, 0, 1]),
    ("1,3", [1, 3]),
    ("2", [2]),
])
def test_parse_m_range(text, expected):
    assert parse_m_range(text) == expected


def test_parse_m_range_empty():
    with pytest.raises(ValueError):
        parse_m_range("3..1")


def test_thread_count(monkeypatch):
    monkeypatch.setenv("SOMBRERO_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("SOMBRERO_THREADS", "lots")
    assert thread_count() == 1
    monkeypatch.delenv("SOMBRERO_THREADS")
    assert thread_count() == 1


def test_run_config_validation():
    RunConfig(command="levels", r0=2.0).validate()
    with pytest.raises(ValueError):
        RunConfig(command="plot").validate()
    with pytest.raises(ValueError):
        RunConfig(command="scan", output_format="xlsx").validate()
    with pytest.raises(ValueError):
        RunConfig(command="scan", m_values=[]).validate()
    with pytest.raises(ValueError):
        RunConfig(command="scan", grid=GridSpec(values=[2.0, 2.0])).validate()


def test_builtin_presets():
    names = [p.name for p in BUILTIN_PRESETS]
    assert names == ["fig1", "fig2", "fig3", "fig5", "fig6"]
    config = SombreroConfig()
    assert config.active_preset.name == "fig1"
    config.set_active_preset("fig6")
    assert config.active_preset.command == "density"
    with pytest.raises(KeyError):
        config.set_active_preset("fig4")


def test_config_round_trip(tmp_path):
    """Configuração salva e recarregada mantém solver e presets."""
    config = SombreroConfig()
    config.solver = SolverConfig(scan_step=0.025, residual_tol=1e-10)
    config.add_preset(FigurePreset(name="custom", description="teste", command="scan",
                                   m_values=[2], nr_max=1, grid=GridSpec(values=[1.0, 2.0])))
    config.set_active_preset("custom")
    path = tmp_path / "cfg" / "sombrero.json"
    config.save_to_file(str(path))

    loaded = SombreroConfig(str(path))
    assert loaded.solver.scan_step == 0.025
    assert loaded.solver.residual_tol == 1e-10
    assert loaded.active_preset_name == "custom"
    assert loaded.active_preset.grid.build().tolist() == [1.0, 2.0]
    assert set(loaded.list_presets()) >= {"fig1", "fig6", "custom"}


def test_config_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        SombreroConfig(str(tmp_path / "nope.json"))


def test_shipped_presets_load():
    """Os arquivos em presets/ são configurações válidas."""
    config = SombreroConfig(str(PRESETS / "default.json"))
    assert config.solver == SolverConfig()
    coarse = SombreroConfig(str(PRESETS / "coarse.json"))
    assert coarse.active_preset.name == "fig1-coarse"
    assert coarse.presets["fig6-panels"].r0_values == [0.001, 2.5, 3.5, 7.0]


def test_density_panels():
    config = SombreroConfig()
    values = config.density_r0_values(r_capture=3.0)
    assert values[0] == pytest.approx(1e-3)
    assert values[1:3] == (3.0, 4.0)
    assert values[3] >= 5.0
