"""Units, dimensionless mapping and the spectral parameters of the sombrero."""

import math
from dataclasses import dataclass, asdict
from typing import Dict, Any, List, Tuple

from .errors import InvalidPhysicalParams


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, frequency, Planck constant and sombrero radius in physical units."""
    mu: float
    omega: float
    hbar: float
    rho0: float = 0.0

    def __post_init__(self):
        for name in ("mu", "omega", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidPhysicalParams(f"{name} must be positive, got {value}")
        if not (self.rho0 >= 0 and math.isfinite(self.rho0)):
            raise InvalidPhysicalParams(f"rho0 must be non-negative, got {self.rho0}")

    @property
    def length_scale(self) -> float:
        """Factor (2·mu·omega/hbar)^(1/2) mapping rho to r."""
        return math.sqrt(2.0 * self.mu * self.omega / self.hbar)

    @property
    def energy_scale(self) -> float:
        return self.hbar * self.omega

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class QuantumNumbers:
    """Angular quantum number m and radial node count n_r."""
    m: int
    n_r: int

    def __post_init__(self):
        if self.n_r < 0:
            raise ValueError(f"n_r must be >= 0, got {self.n_r}")

    @property
    def abs_m(self) -> int:
        return abs(self.m)

    @property
    def n(self) -> int:
        """Oscillator shell index n = 2·n_r + |m|."""
        return 2 * self.n_r + abs(self.m)

    @property
    def oscillator_eps(self) -> float:
        """Level of the circular oscillator (r0 = 0): n + 1."""
        return float(self.n + 1)


@dataclass(frozen=True)
class SpectralParams:
    """Derived quantities entering F(alpha, gamma; i·r²/2) and Psi(a, gamma; r²/2)."""
    r0: float
    eps: float
    xi_in: float
    xi_out: float
    alpha: complex
    a: float
    gamma: int

    @property
    def z0(self) -> float:
        return 0.5 * self.r0 * self.r0

    @property
    def abs_m(self) -> int:
        return self.gamma - 1


def nondimensionalize(p: PhysicalParams) -> float:
    """Dimensionless radius r0 = (2·mu·omega/hbar)^(1/2)·rho0."""
    return p.length_scale * p.rho0


def r_from_rho(rho: float, p: PhysicalParams) -> float:
    return p.length_scale * rho


def rho_from_r(r: float, p: PhysicalParams) -> float:
    return r / p.length_scale


def eps_from_energy(energy: float, p: PhysicalParams) -> float:
    """eps = E/(hbar·omega)."""
    return energy / p.energy_scale


def energy_from_eps(eps: float, p: PhysicalParams) -> float:
    """E = hbar·omega·eps."""
    return eps * p.energy_scale


def barrier_top(r0: float) -> float:
    """Height of the central maximum of the potential, r0²/4."""
    return 0.25 * r0 * r0


def potential(r: float, r0: float) -> float:
    """Dimensionless potential |r² - r0²|/4."""
    return 0.25 * abs(r * r - r0 * r0)


def spectral_params(eps: float, m: int, r0: float) -> SpectralParams:
    """Build the parameter record for energy eps, angular number m and radius r0."""
    abs_m = abs(int(m))
    quarter = 0.25 * r0 * r0
    xi_in = quarter - eps
    xi_out = -quarter - eps
    gamma = abs_m + 1
    alpha = complex(0.5 * gamma, -0.5 * xi_in)
    a = 0.5 * (gamma + xi_out)
    return SpectralParams(r0=float(r0), eps=float(eps), xi_in=xi_in, xi_out=xi_out,
                          alpha=alpha, a=a, gamma=gamma)


def oscillator_degeneracy(n: int) -> int:
    """Multiplicity n + 1 of the circular-oscillator level eps = n + 1."""
    return n + 1


def gather_level(n: int) -> List[Tuple[int, int]]:
    """All (n_r, m) with 2·n_r + |m| = n, both signs of m."""
    states = []
    for n_r in range(n // 2 + 1):
        abs_m = n - 2 * n_r
        states.append((n_r, abs_m))
        if abs_m:
            states.append((n_r, -abs_m))
    return states
