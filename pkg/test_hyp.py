#!/usr/bin/env python3
"""
Testes das funções hipergeométricas confluentes.

Este script testa:
1. Valores fechados de M(a, b; z) e U(a, b; z)
2. Identidades de derivada por diferença central
3. A realidade de e^(-iz0/2)·F para os parâmetros do sombrero
4. Os limites de precisão da série (CancellationExceeded)
5. A concordância entre quadratura, recorrência e integração da EDO
"""

import cmath
import math

import numpy as np
import pytest
from scipy import special

from sombrero.errors import CancellationExceeded
from sombrero.hyp import (
    kummer_m, kummer_m_prime, lanczos_gamma, tricomi_u, tricomi_u_asymptotic, tricomi_u_prime,
)
from sombrero.model import spectral_params
from sombrero.solver.radial import OuterProfile
from sombrero.validation import HYP_TOLERANCES, hyp_identity_errors


# ============================================================================
# KUMMER
# ============================================================================

@pytest.mark.parametrize("a", [0.3, -1.7 + 0.4j, 2.0j])
def test_kummer_at_zero(a):
    """F(a, b; 0) = 1 para qualquer a."""
    result = kummer_m(a, 2.0, 0.0)
    assert result.value == 1
    assert result.cancellation_digits == 0


def test_kummer_exponential():
    """F(1, 1; z) = e^z."""
    result = kummer_m(1.0, 1.0, 1.5)
    assert abs(result.value - math.exp(1.5)) <= 1e-14 * math.exp(1.5)


def test_kummer_sombrero_realness():
    """e^(-iz0/2)·F(alpha, gamma; iz0) é real para os parâmetros do sombrero."""
    p = spectral_params(1.3, 0, 2.0)
    z0 = p.z0
    value = cmath.exp(-0.5j * z0) * kummer_m(p.alpha, p.gamma, 1j * z0).value
    assert abs(value.imag) <= 1e-10 * abs(value)


def test_kummer_reports_cancellation():
    """Argumentos imaginários grandes perdem cerca de 0.43·|z| dígitos."""
    p = spectral_params(4.0, 0, 5.0)
    result = kummer_m(p.alpha, p.gamma, 10j)
    assert 2.0 < result.cancellation_digits < 8.0
    assert result.surviving_digits > 6.0


def test_kummer_cancellation_guard():
    """Abaixo de 6 dígitos sobreviventes a série recusa o resultado."""
    p = spectral_params(4.0, 0, 8.0)
    with pytest.raises(CancellationExceeded) as info:
        kummer_m(p.alpha, p.gamma, 45j)
    assert info.value.surviving_digits < 6.0


def test_kummer_beyond_series_limit():
    with pytest.raises(CancellationExceeded):
        kummer_m(0.5, 1.0, 60j)


def test_kummer_rejects_nonpositive_integer_b():
    with pytest.raises(ValueError):
        kummer_m(0.5, -2.0, 1.0)


def test_kummer_prime_at_zero():
    """F'(a, b; 0) = a/b."""
    assert abs(kummer_m_prime(0.7 - 0.2j, 3.0, 0.0).value - (0.7 - 0.2j) / 3.0) < 1e-15


def test_kummer_prime_exponential():
    assert abs(kummer_m_prime(1.0, 1.0, 0.8).value - math.exp(0.8)) <= 1e-14 * math.exp(0.8)


def test_kummer_prime_central_difference():
    """(F(z+h) - F(z-h))/2h concorda com a fórmula da derivada."""
    a, b, z, h = 0.5 - 0.2j, 1.0, 1j, 1e-5
    fd = (kummer_m(a, b, z + h).value - kummer_m(a, b, z - h).value) / (2 * h)
    exact = kummer_m_prime(a, b, z).value
    assert abs(fd - exact) <= 1e-9 * max(1.0, abs(exact))


def test_kummer_transformation():
    """F(a, b; z) = e^z F(b-a, b; -z)."""
    a, b, z = 0.4 + 1.1j, 2.0, 0.3 + 2.5j
    left = kummer_m(a, b, z).value
    right = cmath.exp(z) * kummer_m(b - a, b, -z).value
    assert abs(left - right) <= 1e-12 * abs(left)


# ============================================================================
# TRICOMI
# ============================================================================

def test_tricomi_closed_form():
    """U(1, 2; 3) = 1/3."""
    assert abs(tricomi_u(1.0, 2.0, 3.0).value - 1.0 / 3.0) <= 1e-13


def test_tricomi_a_zero():
    """U(0, b; z) = 1."""
    assert tricomi_u(0.0, 1.0, 2.0).value == 1.0


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("z", [0.5, 2.0, 10.0])
def test_tricomi_power_law_by_quadrature(a, z):
    """O caminho de quadratura reproduz U(a, a+1; z) = z^-a."""
    value = tricomi_u(a, a + 1.0, z, method="quadrature").value
    assert abs(value - z ** (-a)) <= 1e-11 * z ** (-a)


@pytest.mark.parametrize("a,b,z", [(0.3, 1.0, 0.7), (0.9, 2.0, 3.0), (0.55, 3.0, 12.0)])
def test_tricomi_paths_agree(a, b, z):
    """Quadratura e recorrência descendente coincidem para a em (0, 1]."""
    quad = tricomi_u(a, b, z, method="quadrature").value
    rec = tricomi_u(a, b, z, method="recurrence").value
    assert abs(quad - rec) <= 1e-10 * abs(quad)


def test_tricomi_matches_scipy():
    for a, b, z in [(0.7, 1.0, 2.0), (2.5, 2.0, 0.4), (1.3, 4.0, 7.0)]:
        expected = special.hyperu(a, b, z)
        assert abs(tricomi_u(a, b, z).value - expected) <= 1e-9 * abs(expected)


def test_tricomi_negative_a_against_ode():
    """U(-1.3, 1; 2) pela recorrência concorda com a integração para dentro da EDO."""
    value = tricomi_u(-1.3, 1.0, 2.0).value
    profile = OuterProfile(-1.3, 0, 1.0, 8.0)
    u_ode = profile.kummer(2.0)[0][0]
    assert abs(value - u_ode) <= 1e-8 * abs(value)


def test_tricomi_prime_zero():
    assert tricomi_u_prime(0.0, 1.0, 2.5).value == 0.0


def test_tricomi_prime_power_law():
    """d/dz z^-1 = -z^-2."""
    assert abs(tricomi_u_prime(1.0, 2.0, 2.0).value + 0.25) <= 1e-12


def test_tricomi_prime_central_difference():
    a, b, z, h = 0.7, 1.0, 2.0, 1e-4
    fd = (tricomi_u(a, b, z + h).value - tricomi_u(a, b, z - h).value) / (2 * h)
    exact = tricomi_u_prime(a, b, z).value
    assert abs(fd - exact) <= 1e-8 * abs(exact)


@pytest.mark.parametrize("a,b,z", [(0.7, 1.0, 2.0), (1.3, 3.0, 0.4), (0.25, 2.0, 9.0)])
def test_tricomi_contiguous_relation(a, b, z):
    """U(a, b; z) - U'(a, b; z) = U(a, b+1; z)."""
    lhs = tricomi_u(a, b, z).value - tricomi_u_prime(a, b, z).value
    rhs = tricomi_u(a, b + 1.0, z).value
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)
    assert HYP_TOLERANCES["tricomi_derivative"] <= 1e-8


def test_tricomi_asymptotic_large_z():
    value, tail = tricomi_u_asymptotic(0.6, 1.0, 60.0)
    assert tail < 1e-15
    assert abs(value - special.hyperu(0.6, 1.0, 60.0)) <= 1e-9 * value


def test_tricomi_asymptotic_terminates():
    """Para a inteiro não positivo a série é um polinômio exato."""
    value, tail = tricomi_u_asymptotic(-2.0, 1.0, 3.0)
    assert tail == 0.0
    # U(-2, 1; z) = z² - 4z + 2
    assert abs(value - (9.0 - 12.0 + 2.0)) < 1e-12


def test_tricomi_rejects_nonpositive_z():
    with pytest.raises(ValueError):
        tricomi_u(0.5, 1.0, 0.0)


# ============================================================================
# GAMA E VARREDURA
# ============================================================================

def test_lanczos_gamma_accuracy():
    """Aproximação de Lanczos com erro relativo <= 1e-13 em (0, 30]."""
    x = np.linspace(0.05, 30.0, 157)
    ours = np.array([lanczos_gamma(v) for v in x])
    np.testing.assert_allclose(ours, special.gamma(x), rtol=1e-13)


def test_lanczos_gamma_reflection():
    assert abs(lanczos_gamma(-0.5) - special.gamma(-0.5)) <= 1e-13 * abs(special.gamma(-0.5))


def test_identity_sweep():
    """Varredura semeada de 200 pontos passa em todas as identidades."""
    errors = hyp_identity_errors(samples=200)
    for name, error in errors.items():
        assert error <= HYP_TOLERANCES[name], f"{name}: {error:.3g}"
