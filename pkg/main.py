#!/usr/bin/env python3
"""
Sombrero Spectroscopy - Interface de Linha de Comando

Gera os dados das figuras do espectro do sombrero parabólico e executa a
suite de validação.

Comandos:
1. levels    - níveis de energia para um r0 fixo
2. scan      - curvas eps(r0) por (m, n_r) e a parábola r0²/4
3. density   - densidades radiais r·R² em vários r0
4. clusters  - linhas de um n-, |m|- ou n_r-cluster
5. asym      - ajustes de pequeno e grande r0
6. validate  - suite de invariantes

Exemplos de Uso:
    # Três primeiros níveis do oscilador circular
    python main.py levels --r0 0 --m 0 --count 3

    # Reproduzir a Figura 1
    python main.py scan --preset fig1 -o output/fig1

    # Validação completa
    python main.py validate
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from sombrero.config import (
    GridSpec, RunConfig, SombreroConfig, parse_m_range, thread_count,
)
from sombrero.errors import SombreroError
from sombrero.export import (
    CURVE_COLUMNS, DENSITY_COLUMNS, LEVEL_COLUMNS, PARABOLA_COLUMNS,
    curve_filename, curve_rows, export_table, level_rows, parabola_rows, render_json, write_text,
)
from sombrero.oracle import golden_rows, write_golden
from sombrero.solver import (
    ClusterKind, capture_radius, clusters, fit_asymptotics, levels, relative_spread,
    scan_levels, scan_many,
)
from sombrero.validation import run_validation
from sombrero.wavefn import density, normalize

EXIT_OK = 0
EXIT_BAD_ARGS = 1
EXIT_SOLVER = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser que sai com código 1 em argumentos inválidos."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: erro: {message}", file=sys.stderr)
        sys.exit(EXIT_BAD_ARGS)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Arquivo de configuração JSON (ex: presets/default.json)")
    common.add_argument("--preset", help="Preset de figura (fig1, fig2, fig3, fig5, fig6)")
    common.add_argument("--format", dest="output_format", choices=RunConfig.FORMATS,
                        default="csv", help="Formato de saída (padrão: csv)")
    common.add_argument("-o", "--output",
                        help="Arquivo de saída (diretório para scan); padrão: saída padrão")
    common.add_argument("--debug", action="store_true", help="Ativa logs de debug e tracebacks")

    parser = CliParser(
        description="Espectro de uma partícula no sombrero parabólico",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos:
  python main.py levels --r0 2 --m 0..2 --count 4
  python main.py scan --preset fig2 -o output/fig2
  python main.py density --preset fig6
  python main.py clusters --kind n --label 5
  python main.py asym --m 0..3 --nr-max 1 --r0-grid 0.05:8
  python main.py validate --quick

Variável de ambiente SOMBRERO_THREADS limita as threads das varreduras.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("levels", parents=[common], help="Níveis para um r0 fixo")
    p.add_argument("--r0", type=float, required=True, help="Raio do sombrero (adimensional)")
    p.add_argument("--m", default="0", help="Faixa de m: '0..3', '1,3' ou '2' (padrão: 0)")
    p.add_argument("--count", type=int, default=4, help="Níveis por m (padrão: 4)")

    p = sub.add_parser("scan", parents=[common], help="Curvas eps(r0)")
    p.add_argument("--m", help="Faixa de m (padrão: 0..3)")
    p.add_argument("--nr-max", type=int, help="Maior n_r (padrão: 3)")
    p.add_argument("--r0-grid", help="Grade: 'min:max', 'min:max:n' ou 'a,b,c'")

    p = sub.add_parser("density", parents=[common], help="Densidades r·R²")
    p.add_argument("--m", help="Valor de m (padrão: 0)")
    p.add_argument("--nr", type=int, help="n_r do estado (padrão: 3)")
    p.add_argument("--r0-values", help="Lista de r0 'a,b,c'; padrão: painéis em torno da captura")
    p.add_argument("--samples", type=int, default=801, help="Pontos em r por painel (padrão: 801)")

    p = sub.add_parser("clusters", parents=[common], help="Linhas de um cluster")
    p.add_argument("--kind", choices=[k.value for k in ClusterKind], default="n",
                   help="Tipo do cluster: n, abs_m ou n_r (padrão: n)")
    p.add_argument("--label", type=int, required=True, help="Número quântico fixo do cluster")
    p.add_argument("--size", type=int, default=4, help="Linhas de clusters abs_m/n_r (padrão: 4)")
    p.add_argument("--r0-grid", help="Grade em r0")

    p = sub.add_parser("asym", parents=[common], help="Ajustes assintóticos")
    p.add_argument("--m", help="Faixa de m (padrão: 0..3)")
    p.add_argument("--nr-max", type=int, help="Maior n_r (padrão: 1)")
    p.add_argument("--r0-grid", help="Grade em r0 (padrão: 0.01:8)")
    p.add_argument("--window", default=None, help="Janela de grande r0 'a:b' (padrão: 5:max)")

    p = sub.add_parser("validate", parents=[common], help="Suite de invariantes")
    p.add_argument("--quick", action="store_true", help="Subconjunto rápido das verificações")
    p.add_argument("--golden", default="oracle_golden.csv",
                   help="Arquivo golden a comparar, se existir (padrão: oracle_golden.csv)")
    p.add_argument("--emit-golden", help="Escreve o arquivo golden do oráculo neste caminho")
    return parser


# ============================================================================
# CONFIGURAÇÃO
# ============================================================================

def _load_config(args) -> SombreroConfig:
    config = SombreroConfig(args.config) if args.config else SombreroConfig()
    if args.debug:
        config.debug_mode = True
    if args.preset:
        config.set_active_preset(args.preset)
    return config


def build_run_config(args, config: SombreroConfig) -> RunConfig:
    """
    Junta argumentos, preset e padrões numa RunConfig validada.

    Raises:
        ValueError: Se o preset não servir ao comando ou as faixas forem inválidas
    """
    run = RunConfig(command=args.command, output_format=args.output_format,
                    output_path=args.output or config.output_dir, preset=args.preset)
    if args.preset:
        preset = config.active_preset
        if preset.command != args.command:
            raise ValueError(f"Preset '{preset.name}' é do comando '{preset.command}'")
        run.m_values = list(preset.m_values)
        run.nr_max = preset.nr_max
        run.grid = GridSpec(values=list(preset.r0_values)) if preset.r0_values else preset.grid
    elif args.command == "asym":
        run.m_values, run.nr_max, run.grid = [0, 1, 2, 3], 1, GridSpec(r0_max=8.0)
    elif args.command == "density":
        run.m_values, run.nr_max = [0], 3
    else:
        run.m_values = [0, 1, 2, 3]

    if getattr(args, "m", None):
        run.m_values = parse_m_range(args.m)
    if getattr(args, "nr_max", None) is not None:
        run.nr_max = args.nr_max
    if getattr(args, "nr", None) is not None:
        run.nr_max = args.nr
    if getattr(args, "count", None) is not None:
        run.count = args.count
    if getattr(args, "r0", None) is not None:
        run.r0 = args.r0
        run.grid = GridSpec(values=[args.r0])
    if getattr(args, "r0_grid", None):
        run.grid = GridSpec.parse(args.r0_grid)
    if getattr(args, "r0_values", None):
        run.grid = GridSpec.parse(args.r0_values)
    run.validate()
    return run


def _emit(text: str, path) -> None:
    if path:
        write_text(text, path)
        print(f"Exportado para: {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


# ============================================================================
# COMANDOS
# ============================================================================

def cmd_levels(run: RunConfig, config: SombreroConfig, args) -> int:
    """Tabela r0,m,n_r,eps,residual,degraded."""
    if run.r0 is None or run.r0 < 0:
        raise ValueError("--r0 deve ser >= 0")
    points = []
    for m in run.m_values:
        points.extend(levels(m, run.r0, run.count, config.solver))
    rows = level_rows(points, config.solver.residual_tol)
    _emit(export_table(rows, LEVEL_COLUMNS, run.output_format), args.output)
    return EXIT_OK


def cmd_scan(run: RunConfig, config: SombreroConfig, args) -> int:
    """Uma curva por (m, n_r) e parabola.csv no diretório de saída."""
    grid = run.grid.build()
    out_dir = Path(run.output_path)
    print(f"Varredura de m={run.m_values}, n_r=0..{run.nr_max} em {grid.size} valores de r0")
    curves = scan_many(run.m_values, run.nr_max, grid, thread_count(), config.solver)

    degraded = 0
    for curve in curves:
        path = out_dir / curve_filename(curve.m, curve.n_r, run.output_format)
        rows = curve_rows(curve, config.solver.residual_tol)
        export_table(rows, CURVE_COLUMNS, run.output_format, path, key="curve")
        degraded += int(np.count_nonzero(curve.residual > config.solver.residual_tol))
    export_table(parabola_rows(grid), PARABOLA_COLUMNS, run.output_format,
                 out_dir / f"parabola.{run.output_format}", key="parabola")

    print("\n" + "=" * 50)
    print("Varredura Completa!")
    print("=" * 50)
    print(f"Curvas: {len(curves)}")
    print(f"Pontos com resíduo acima da tolerância: {degraded}")
    print(f"Diretório: {out_dir}")
    return EXIT_OK


def _density_r0_values(run: RunConfig, config: SombreroConfig, m: int, n_r: int):
    if run.grid.values:
        return [float(v) for v in run.grid.build()]
    curve = scan_levels(m, n_r, GridSpec(0.05, 7.0, 8, 40).build(), config.solver)[n_r]
    r_capture = capture_radius(curve)
    print(f"Raio de captura de (m={m}, n_r={n_r}): {r_capture:.6g}", file=sys.stderr)
    return list(config.density_r0_values(r_capture))


def cmd_density(run: RunConfig, config: SombreroConfig, args) -> int:
    """Colunas r0, r, rR2, region para cada painel."""
    m, n_r = run.m_values[0], run.nr_max
    rows = []
    for r0 in _density_r0_values(run, config, m, n_r):
        sol = normalize(levels(m, r0, n_r + 1, config.solver)[n_r], config.solver)
        r = np.linspace(0.0, sol.r_far, args.samples)
        for ri, value in zip(r, density(sol, r)):
            rows.append({'r0': float(r0), 'r': float(ri), 'rR2': float(value),
                         'region': "in" if ri <= r0 else "out"})
    _emit(export_table(rows, ("r0",) + DENSITY_COLUMNS, run.output_format), args.output)
    return EXIT_OK


def cmd_clusters(run: RunConfig, config: SombreroConfig, args) -> int:
    """Membros de um cluster ao longo da grade, com a marcação acima/abaixo do topo."""
    kind = ClusterKind(args.kind)
    if kind is ClusterKind.N:
        m_values, nr_max = list(range(args.label + 1)), args.label // 2
    elif kind is ClusterKind.ABS_M:
        m_values, nr_max = [args.label], args.size - 1
    else:
        m_values, nr_max = list(range(args.size)), args.label
    curves = scan_many(m_values, nr_max, run.grid.build(), thread_count(), config.solver)
    cluster = clusters(curves, kind, args.label, None if kind is ClusterKind.N else args.size)

    rows = []
    for curve in cluster.curves:
        above = curve.above_barrier()
        for row, flag in zip(curve_rows(curve, config.solver.residual_tol), above):
            rows.append({'kind': kind.value, 'label': args.label, 'n_r': curve.n_r,
                         'm': curve.m, **row, 'above_barrier': bool(flag)})
    columns = ("kind", "label", "n_r", "m") + CURVE_COLUMNS + ("above_barrier",)
    _emit(export_table(rows, columns, run.output_format, key="cluster"), args.output)
    last = float(curves[0].r0[-1])
    print(f"{kind.value}-cluster {args.label}: {len(cluster.curves)} linhas, "
          f"spread em r0={last:.4g}: {cluster.spread(last):.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_asym(run: RunConfig, config: SombreroConfig, args) -> int:
    """JSON com c_small, A_fit e exponent_fit por curva e o spread em m de A_fit."""
    window = None
    if args.window:
        lo, hi = (float(v) for v in args.window.split(":"))
        window = (lo, hi)
    curves = scan_many(run.m_values, run.nr_max, run.grid.build(), thread_count(), config.solver)
    fits = [fit_asymptotics(c, window) for c in curves]
    spread = {}
    for n_r in sorted({f.n_r for f in fits}):
        values = [f.A_fit for f in fits if f.n_r == n_r]
        if len(values) > 1:
            spread[str(n_r)] = relative_spread(values)
    payload = {'fits': [f.to_dict() for f in fits], 'A_fit_m_spread': spread}
    _emit(render_json(payload), args.output)
    return EXIT_OK


def cmd_validate(run: RunConfig, config: SombreroConfig, args) -> int:
    """Imprime PASS/FAIL por verificação; código 0 sse todas passam."""
    if args.emit_golden:
        rows = golden_rows(range(4), (1.0, 2.0, 4.0, 6.0), 4, config.solver.oracle_h,
                           config.solver.oracle_margin)
        path = write_golden(args.emit_golden, rows)
        print(f"Arquivo golden gerado: {path}")
    report = run_validation(config.solver, quick=args.quick, golden_path=args.golden,
                            threads=thread_count())
    print("=" * 50)
    print("Validação")
    print("=" * 50)
    for line in report.lines():
        print(line)
    if args.output:
        write_text(render_json(report.to_dict()), args.output)
        print(f"\nRelatório exportado para: {args.output}")
    return EXIT_OK if report.passed else EXIT_SOLVER


COMMANDS = {
    "levels": cmd_levels,
    "scan": cmd_scan,
    "density": cmd_density,
    "clusters": cmd_clusters,
    "asym": cmd_asym,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    """Função principal da CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _load_config(args)
        run = build_run_config(args, config)
    except (ValueError, KeyError, FileNotFoundError) as e:
        print(f"Erro: {e}", file=sys.stderr)
        return EXIT_BAD_ARGS

    try:
        return COMMANDS[args.command](run, config, args)
    except ValueError as e:
        print(f"Erro: {e}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except SombreroError as e:
        print(f"\nErro do solver ({type(e).__name__}): {e}", file=sys.stderr)
        if args.debug:
            import traceback
            traceback.print_exc()
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
