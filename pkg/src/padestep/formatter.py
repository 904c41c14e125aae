"""CSV output for every command, plus a rich summary table for the terminal."""

import csv
import io

import numpy as np
from rich.console import Console
from rich.table import Table

from padestep.errors import ParameterError
from padestep.models import ConvergenceLevel, HistoryRecord, SpectralCurvePoint

SPECTRAL_FIELDS = ("rho", "phase", "period_error", "damping_ratio")


def _num(value) -> str:
    """13 significant digits, trailing zeros kept (`1.000000000000`); None is an empty field."""
    if value is None:
        return ""
    return f"{float(value):#.13g}"


def _write(header: list[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def format_spectral_csv(
    points: list[SpectralCurvePoint], hht_points: list[SpectralCurvePoint] | None = None
) -> str:
    header = ["x", *SPECTRAL_FIELDS]
    if hht_points is not None:
        if len(hht_points) != len(points):
            raise ParameterError("HHT sweep must use the same grid as the scheme sweep")
        header += [f"hht_{name}" for name in SPECTRAL_FIELDS]
    rows = []
    for i, point in enumerate(points):
        row = [_num(point.x)] + [_num(getattr(point, name)) for name in SPECTRAL_FIELDS]
        if hht_points is not None:
            row += [_num(getattr(hht_points[i], name)) for name in SPECTRAL_FIELDS]
        rows.append(row)
    return _write(header, rows)


def format_history_csv(
    history: list[HistoryRecord],
    probes: list[str],
    reference: dict[str, np.ndarray] | None = None,
) -> str:
    """One row per record; record arrays hold the probe DOFs in the order of ``probes``."""
    header = ["t"]
    for name in probes:
        header += [f"{name}_u", f"{name}_v", f"{name}_a"]
    reference = reference or {}
    header += list(reference)
    rows = []
    for i, rec in enumerate(history):
        row = [_num(rec.t)]
        for j in range(len(probes)):
            row += [_num(rec.u[j]), _num(rec.v[j]), _num(rec.a[j])]
        row += [_num(series[i]) for series in reference.values()]
        rows.append(row)
    return _write(header, rows)


def format_convergence_csv(levels: list[ConvergenceLevel]) -> str:
    rows = [[_num(lv.dt), _num(lv.error), _num(lv.order_estimate)] for lv in levels]
    return _write(["dt", "error", "order_estimate"], rows)


def nearest_indices(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    """Index into ``fine`` of the sample nearest to each time in ``coarse``."""
    fine = np.asarray(fine, dtype=float)
    pos = np.clip(np.searchsorted(fine, coarse), 1, max(fine.size - 1, 1))
    left = np.clip(pos - 1, 0, fine.size - 1)
    right = np.clip(pos, 0, fine.size - 1)
    take_left = np.abs(coarse - fine[left]) <= np.abs(fine[right] - coarse)
    return np.where(take_left, left, right)


def format_comparison_csv(
    pade: list[HistoryRecord], hht: list[HistoryRecord], probes: list[str]
) -> str:
    """Both histories on the coarser of the two grids.

    The other series is sampled at its nearest step; ``exact_match`` is 1 where
    that step falls on the same time and 0 where it was shifted.
    """
    if not pade or not hht:
        raise ParameterError("both histories must hold at least one record")
    t_pade = np.array([rec.t for rec in pade])
    t_hht = np.array([rec.t for rec in hht])
    pade_coarse = len(pade) <= len(hht)
    grid = t_pade if pade_coarse else t_hht
    if pade_coarse:
        pade_idx = np.arange(len(pade))
        hht_idx = nearest_indices(grid, t_hht)
        offset = np.abs(t_hht[hht_idx] - grid)
    else:
        hht_idx = np.arange(len(hht))
        pade_idx = nearest_indices(grid, t_pade)
        offset = np.abs(t_pade[pade_idx] - grid)
    tol = 1e-9 * max(float(np.max(np.abs(grid))), 1e-300)

    header = ["t"]
    for name in probes:
        header += [f"{name}_u", f"{name}_v", f"{name}_hht_u", f"{name}_hht_v"]
    header.append("exact_match")
    rows = []
    for i, t in enumerate(grid):
        p, h = pade[pade_idx[i]], hht[hht_idx[i]]
        row = [_num(t)]
        for j in range(len(probes)):
            row += [_num(p.u[j]), _num(p.v[j]), _num(h.u[j]), _num(h.v[j])]
        row.append("1" if offset[i] <= tol else "0")
        rows.append(row)
    return _write(header, rows)


def format_summary(title: str, rows: list[tuple[str, object]]) -> str:
    """Render a two-column rich table to a string."""
    buffer = io.StringIO()
    console = Console(file=buffer, force_terminal=True, width=120)
    table = Table(title=f"[bold]{title}[/bold]", show_header=False)
    table.add_column("key", style="cyan")
    table.add_column("value")
    for key, value in rows:
        text = f"{value:.6g}" if isinstance(value, float) else str(value)
        table.add_row(key, text)
    console.print(table)
    return buffer.getvalue()
