"""
Sombrero Spectroscopy

Biblioteca Python para o espectro de uma partícula quântica no potencial
bidimensional "sombrero parabólico" V = μω²|ρ²-ρ0²|/2. Os níveis de energia
saem da equação espectral obtida casando as soluções hipergeométricas
confluentes interna (Kummer) e externa (Tricomi) no círculo r = r0.

Uso Básico:
    from sombrero import levels, scan_levels, normalize, density

    # Quatro níveis de m=0 para r0=2
    points = levels(0, 2.0, 4)

    # Curvas eps(r0) de m=1, n_r=0..3
    curves = scan_levels(1, 3, [0.5, 1.0, 1.5, 2.0])

    # Densidade radial r·R² do estado fundamental
    sol = normalize(points[0])
    rho = density(sol, [0.5, 1.0, 2.0])

Módulos Principais:
    hyp: Funções de Kummer e Tricomi
    solver: Casamento, continuação em r0 e clusters
    wavefn: Funções de onda normalizadas e densidades
    oracle: Autovalores por diferenças finitas
    validation: Suite de invariantes
"""

__version__ = "1.0.0"

from .config import (
    SolverConfig,
    SombreroConfig,
    FigurePreset,
    GridSpec,
    RunConfig,
    DEFAULT_SOLVER_CONFIG,
)
from .errors import SombreroError
from .model import PhysicalParams, QuantumNumbers, spectral_params, barrier_top
from .solver import (
    SpectralPoint,
    LevelCurve,
    ClusterKind,
    levels,
    find_levels,
    scan_levels,
    scan_many,
    clusters,
    capture_radius,
    fit_asymptotics,
)
from .wavefn import RadialSolution, normalize, density, p_inside, count_nodes, hf_residual
from .oracle import OracleSpectrum, fd_spectrum, richardson

__all__ = [
    # Configuração
    "SolverConfig",
    "SombreroConfig",
    "FigurePreset",
    "GridSpec",
    "RunConfig",
    "DEFAULT_SOLVER_CONFIG",
    "SombreroError",

    # Modelo
    "PhysicalParams",
    "QuantumNumbers",
    "spectral_params",
    "barrier_top",

    # Níveis e curvas
    "SpectralPoint",
    "LevelCurve",
    "ClusterKind",
    "levels",
    "find_levels",
    "scan_levels",
    "scan_many",
    "clusters",
    "capture_radius",
    "fit_asymptotics",

    # Funções de onda
    "RadialSolution",
    "normalize",
    "density",
    "p_inside",
    "count_nodes",
    "hf_residual",

    # Oráculo
    "OracleSpectrum",
    "fd_spectrum",
    "richardson",
]
