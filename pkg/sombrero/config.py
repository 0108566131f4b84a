"""
Configuração do toolkit sombrero.

Este módulo reúne os parâmetros numéricos dos solvers (tolerâncias, limites
de série, passos de varredura) e os presets das figuras reproduzidas pela
CLI. Presets podem ser salvos e carregados de arquivos JSON em `presets/`.
"""

import json
import os
from pathlib import Path
from dataclasses import dataclass, field, asdict
from typing import Dict, Any, Optional, List, Tuple

import numpy as np


@dataclass
class SolverConfig:
    """Parâmetros numéricos compartilhados por todos os solvers."""
    # Série de Kummer
    series_z_max: float = 50.0
    series_max_terms: int = 600
    series_tail_rtol: float = 1e-16
    series_min_digits: float = 6.0
    # Avaliador interno: troca a série pela EDO abaixo deste número de dígitos.
    # A realidade de M(alpha, b; i·xi·r²) é checada a 1e-10, o que pede 10 dígitos.
    inner_min_digits: float = 10.0
    # Tricomi
    quad_rtol: float = 1e-12
    recurrence_floor: float = 1e-13
    # EDOs de fallback / perfis
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-14
    # Varredura em ε
    scan_step: float = 0.05
    scan_halvings: int = 3
    bisect_tol: float = 1e-10
    secant_steps: int = 3
    max_count: int = 64
    # Continuação em r0
    continuation_window: float = 0.5
    continuation_jump: float = 0.5
    continuation_depth: int = 6
    # Funções de onda
    residual_tol: float = 1e-9
    derivative_jump_tol: float = 1e-7
    hf_step: float = 1e-3
    node_step: float = 0.02
    # Oráculo
    oracle_h: float = 0.01
    oracle_margin: float = 10.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


DEFAULT_SOLVER_CONFIG = SolverConfig()


def default_r0_grid(r0_min: float = 0.01, r0_max: float = 7.0,
                    n_geometric: int = 41, n_linear: int = 100) -> np.ndarray:
    """
    Grade híbrida padrão: geométrica em [r0_min, 1], uniforme em (1, r0_max].

    Com os valores padrão tem 141 pontos, densa perto de 0 para a lei
    quadrática de pequenos r0.
    """
    if r0_max <= 1.0:
        return np.geomspace(r0_min, r0_max, n_geometric)
    geometric = np.geomspace(r0_min, 1.0, n_geometric)
    linear = np.linspace(1.0, r0_max, n_linear + 1)[1:]
    return np.concatenate([geometric, linear])


@dataclass
class GridSpec:
    """Especificação de uma grade em r0."""
    r0_min: float = 0.01
    r0_max: float = 7.0
    n_geometric: int = 41
    n_linear: int = 100
    values: Optional[List[float]] = None  # valores explícitos têm prioridade

    def build(self) -> np.ndarray:
        if self.values:
            return np.asarray(sorted(self.values), dtype=float)
        return default_r0_grid(self.r0_min, self.r0_max,
                               self.n_geometric, self.n_linear)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridSpec":
        return cls(**data)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """
        Lê uma grade da linha de comando.

        Formatos aceitos: "min:max" (grade híbrida), "min:max:n" (linear com
        n pontos) ou lista separada por vírgulas.
        """
        if "," in text:
            return cls(values=[float(v) for v in text.split(",")])
        parts = text.split(":")
        if len(parts) == 2:
            return cls(r0_min=float(parts[0]), r0_max=float(parts[1]))
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            return cls(values=[float(v) for v in np.linspace(lo, hi, n)])
        return cls(values=[float(text)])


@dataclass
class FigurePreset:
    """
    Preset de reprodução de uma figura.

    Cada preset define quais curvas (m, n_r) e qual grade em r0 são usadas.
    """
    name: str
    description: str
    command: str
    m_values: List[int] = field(default_factory=lambda: [0])
    nr_max: int = 3
    grid: GridSpec = field(default_factory=GridSpec)
    r0_values: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "command": self.command,
            "m_values": list(self.m_values),
            "nr_max": self.nr_max,
            "grid": self.grid.to_dict(),
            "r0_values": list(self.r0_values),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FigurePreset":
        return cls(
            name=data["name"],
            description=data["description"],
            command=data["command"],
            m_values=list(data.get("m_values", [0])),
            nr_max=data.get("nr_max", 3),
            grid=GridSpec.from_dict(data.get("grid", {})),
            r0_values=list(data.get("r0_values", [])),
        )


# =============================================================================
# PRESETS DAS FIGURAS
# =============================================================================

BUILTIN_PRESETS: List[FigurePreset] = [
    FigurePreset(
        name="fig1",
        description="Níveis de energia em função de r0 (m=0..3, n_r=0..3)",
        command="scan",
        m_values=[0, 1, 2, 3],
        nr_max=3,
    ),
    FigurePreset(
        name="fig2",
        description="Linhas dos n-clusters n=5 e n=6",
        command="scan",
        m_values=[0, 1, 2, 3, 4, 5, 6],
        nr_max=3,
    ),
    FigurePreset(
        name="fig3",
        description="Linhas dos |m|-clusters para m=0..3",
        command="scan",
        m_values=[0, 1, 2, 3],
        nr_max=4,
    ),
    FigurePreset(
        name="fig5",
        description="Linhas dos n_r-clusters para n_r=0 e 1",
        command="scan",
        m_values=[0, 1, 2, 3, 4],
        nr_max=1,
        grid=GridSpec(r0_max=8.0),
    ),
    FigurePreset(
        name="fig6",
        description="Densidades r·R² para m=0, n_r=3 antes e depois da captura",
        command="density",
        m_values=[0],
        nr_max=3,
    ),
]


@dataclass
class RunConfig:
    """Configuração de uma execução da CLI."""
    command: str
    m_values: List[int] = field(default_factory=lambda: [0])
    nr_max: int = 3
    count: int = 4
    r0: Optional[float] = None
    grid: GridSpec = field(default_factory=GridSpec)
    output_format: str = "csv"
    output_path: str = "output"
    preset: Optional[str] = None

    COMMANDS = ("levels", "scan", "density", "clusters", "asym", "validate")
    FORMATS = ("csv", "json")

    def validate(self) -> None:
        """
        Verifica as invariantes da configuração.

        Raises:
            ValueError: Se comando, formato ou faixas forem inválidos
        """
        if self.command not in self.COMMANDS:
            raise ValueError(f"Comando '{self.command}' desconhecido. "
                             f"Disponíveis: {list(self.COMMANDS)}")
        if self.output_format not in self.FORMATS:
            raise ValueError(f"Formato '{self.output_format}' desconhecido")
        if not self.m_values:
            raise ValueError("Faixa de m vazia")
        if self.nr_max < 0 or self.count < 1:
            raise ValueError("nr_max deve ser >= 0 e count >= 1")
        grid = self.grid.build()
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("A grade em r0 deve ser não vazia e crescente")


def parse_m_range(text: str) -> List[int]:
    """Converte "0..3", "-2..2", "1,3" ou "2" em lista de inteiros."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        lo_i, hi_i = int(lo), int(hi)
        if hi_i < lo_i:
            raise ValueError(f"Faixa de m vazia: {text}")
        return list(range(lo_i, hi_i + 1))
    return [int(v) for v in text.split(",")]


def thread_count() -> int:
    """Número de threads permitido pela variável SOMBRERO_THREADS."""
    raw = os.environ.get("SOMBRERO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class SombreroConfig:
    """
    Gerenciador de configuração.

    Guarda a configuração dos solvers e o registro de presets de figuras;
    permite carregar e salvar tudo em JSON.
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Inicializa o gerenciador de configuração.

        Args:
            config_path: Caminho opcional para arquivo de configuração JSON
        """
        self.solver = SolverConfig()
        self.presets: Dict[str, FigurePreset] = {p.name: p for p in BUILTIN_PRESETS}
        self.active_preset_name: str = "fig1"
        self.output_dir: str = "output"
        self.debug_mode: bool = False

        if config_path:
            self.load_from_file(config_path)

    @property
    def active_preset(self) -> FigurePreset:
        """Retorna o preset ativo."""
        return self.presets[self.active_preset_name]

    def set_active_preset(self, preset_name: str) -> None:
        """
        Define o preset ativo pelo nome.

        Raises:
            KeyError: Se o preset não existir
        """
        if preset_name not in self.presets:
            raise KeyError(f"Preset '{preset_name}' não encontrado. "
                           f"Disponíveis: {list(self.presets.keys())}")
        self.active_preset_name = preset_name

    def add_preset(self, preset: FigurePreset) -> None:
        self.presets[preset.name] = preset

    def list_presets(self) -> List[str]:
        """Retorna lista de nomes dos presets disponíveis."""
        return list(self.presets.keys())

    def load_from_file(self, config_path: str) -> None:
        """
        Carrega configuração de um arquivo JSON.

        Args:
            config_path: Caminho para o arquivo de configuração
        """
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Arquivo de configuração não encontrado: {config_path}")

        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)

        self.output_dir = data.get("output_dir", "output")
        self.debug_mode = data.get("debug_mode", False)
        if "solver" in data:
            self.solver = SolverConfig.from_dict(data["solver"])

        for preset_data in data.get("presets", []):
            preset = FigurePreset.from_dict(preset_data)
            self.presets[preset.name] = preset

        if data.get("active_preset") in self.presets:
            self.active_preset_name = data["active_preset"]

    def save_to_file(self, config_path: str) -> None:
        """
        Salva configuração em um arquivo JSON.

        Args:
            config_path: Caminho para salvar o arquivo de configuração
        """
        path = Path(config_path)
        path.parent.mkdir(parents=True, exist_ok=True)

        data = {
            "output_dir": self.output_dir,
            "debug_mode": self.debug_mode,
            "active_preset": self.active_preset_name,
            "solver": self.solver.to_dict(),
            "presets": [p.to_dict() for p in self.presets.values()],
        }

        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)

    def density_r0_values(self, r_capture: float, delta: float = 1.0,
                          r0_small: float = 1e-3, r0_large: float = 7.0) -> Tuple[float, ...]:
        """Valores de r0 dos quatro painéis de densidade."""
        preset = self.presets.get("fig6")
        if preset is not None and preset.r0_values:
            return tuple(preset.r0_values)
        return (r0_small, r_capture, r_capture + delta, max(r0_large, r_capture + 2 * delta))
