"""
Escrita dos resultados em CSV e JSON.

Os números reais saem com 17 dígitos significativos para que a ida e volta
texto -> float seja exata; a ordem das linhas é fixada pelo chamador antes
da escrita, de modo que a mesma configuração gera arquivos idênticos.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

logger = logging.getLogger(__name__)

LEVEL_COLUMNS = ("r0", "m", "n_r", "eps", "residual", "degraded")
CURVE_COLUMNS = ("r0", "eps", "residual", "degraded")
PARABOLA_COLUMNS = ("r0", "barrier_top")
DENSITY_COLUMNS = ("r", "rR2", "region")


def format_value(value) -> str:
    """Texto de uma célula: floats com 17 dígitos, bool em minúsculas."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return f"{value:.17g}"
    return str(value)


def _json_ready(value):
    if isinstance(value, dict):
        return {key: _json_ready(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(item) for item in value]
    if hasattr(value, "item") and callable(value.item):
        # escalares numpy
        return value.item()
    return value


def render_csv(rows: Iterable[Dict], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[col]) for col in columns])
    return buffer.getvalue()


def render_json(payload) -> str:
    # repr de float em Python já é a forma mais curta que preserva o valor
    return json.dumps(_json_ready(payload), indent=2, ensure_ascii=False) + "\n"


def write_text(text: str, path) -> str:
    """
    Grava o texto no caminho, criando diretórios.

    Returns:
        Caminho do arquivo gravado
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info("exportado para %s", path)
    return str(path)


def export_table(rows: List[Dict], columns: Sequence[str], output_format: str,
                 path: Optional[str] = None, key: Optional[str] = None) -> str:
    """
    Serializa uma tabela em CSV ou JSON.

    Args:
        rows: Linhas já ordenadas
        columns: Colunas (e ordem) do CSV
        output_format: "csv" ou "json"
        path: Arquivo de saída; None devolve só o texto
        key: Nome da lista no JSON (padrão "rows")

    Returns:
        O texto serializado
    """
    if output_format == "csv":
        text = render_csv(rows, columns)
    elif output_format == "json":
        text = render_json({key or "rows": [{col: row[col] for col in columns} for row in rows]})
    else:
        raise ValueError(f"formato desconhecido: {output_format}")
    if path is not None:
        write_text(text, path)
    return text


def level_rows(points, residual_tol: float = 1e-9) -> List[Dict]:
    """Linhas r0,m,n_r,eps,residual,degraded ordenadas por (r0, m, n_r)."""
    rows = [{
        'r0': float(p.r0),
        'm': int(p.m),
        'n_r': int(p.n_r),
        'eps': float(p.eps),
        'residual': float(p.residual),
        'degraded': bool(p.degraded(residual_tol)),
    } for p in points]
    rows.sort(key=lambda row: (row['r0'], row['m'], row['n_r']))
    return rows


def curve_rows(curve, residual_tol: float = 1e-9) -> List[Dict]:
    """Linhas r0,eps,residual,degraded de uma curva."""
    return [{'r0': float(r0), 'eps': float(eps), 'residual': float(res),
             'degraded': bool(res > residual_tol)}
            for r0, eps, res in zip(curve.r0, curve.eps, curve.residual)]


def parabola_rows(r0_values: Iterable[float]) -> List[Dict]:
    """Topo da barreira r0²/4 ao longo da grade."""
    return [{'r0': float(r0), 'barrier_top': 0.25 * float(r0) ** 2} for r0 in r0_values]


def curve_filename(m: int, n_r: int, output_format: str = "csv") -> str:
    return f"curve_m{m}_nr{n_r}.{output_format}"
