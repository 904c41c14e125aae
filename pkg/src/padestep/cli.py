"""CLI entrypoint for padestep."""

import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np

from padestep.config import config_callback
from padestep.errors import DivergenceError, PadeStepError, ParameterError
from padestep.formatter import (
    format_comparison_csv,
    format_convergence_csv,
    format_history_csv,
    format_spectral_csv,
    format_summary,
)
from padestep.models import Grading, ProblemKind, RunResult, StepperConfig
from padestep.pade import mixed_scheme
from padestep.problems import MeshedModel, ProblemSpec, build_model, cfl_to_dt, recommended_cfl
from padestep.problems.rod import bimaterial_segments, rod_segments
from padestep.problems.sdof import build_sdof, richardson_levels, sdof_error
from padestep.runner import Runner
from padestep.spectral import (
    HHTTarget,
    log_grid,
    max_step_ratio,
    rho_infty_to_alpha,
    sweep,
)
from padestep.stepper import hht_integrate, integrate

DEFAULT_DT = {ProblemKind.THREE_DOF: 0.14, ProblemKind.SDOF: 0.05}
DEFAULT_DURATION = {
    ProblemKind.THREE_DOF: 100.0,
    ProblemKind.SDOF: 1.0,
    ProblemKind.SCALAR_WAVE_2D: 1.0,
}
DEFAULT_RHO_INF = 0.8

POSITIVE = click.FloatRange(min=0.0, min_open=True)


def _config_option(fn):
    return click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False),
        is_eager=True,
        expose_value=False,
        callback=config_callback,
        help="Flat TOML file of option values; flags override it.",
    )(fn)


def _output_options(fn):
    fn = click.option("--quiet", is_flag=True, help="Suppress warnings and the summary table.")(fn)
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV path.")(fn)
    return fn


def _scheme_options(fn):
    fn = click.option(
        "--pf", "p_f", type=click.IntRange(min=0), default=None, help="Force expansion degree."
    )(fn)
    fn = click.option(
        "--rho-inf",
        type=click.FloatRange(0.0, 1.0),
        default=None,
        help="High-frequency spectral radius (default 0 for three_dof, else 0.8).",
    )(fn)
    fn = click.option(
        "--M", "order", type=click.IntRange(1, 8), default=2, help="Denominator order M."
    )(fn)
    return fn


def _problem_options(fn):
    fn = click.option("--probe", multiple=True, help="Probe name(s) to record (default: all).")(fn)
    fn = click.option("--duration", type=POSITIVE, default=None, help="Simulated time.")(fn)
    fn = click.option("--cfl", type=POSITIVE, default=None, help="CFL number (default 10L).")(fn)
    fn = click.option("--dt", type=POSITIVE, default=None, help="Time step.")(fn)
    fn = click.option(
        "--grading",
        type=click.Choice([g.value for g in Grading]),
        default=Grading.UNIFORM.value,
        help="Rod element size distribution.",
    )(fn)
    fn = click.option(
        "--elements", type=click.IntRange(min=1), default=None, help="Elements (per segment/side)."
    )(fn)
    fn = click.option(
        "--problem",
        type=click.Choice([k.value for k in ProblemKind]),
        default=ProblemKind.ROD.value,
        help="Benchmark problem.",
    )(fn)
    return fn


def _max_concurrent_option(fn):
    return click.option(
        "--max-concurrent",
        type=click.IntRange(1, 32),
        default=4,
        help="Max concurrent jobs (1-32).",
    )(fn)


@contextmanager
def _exit_codes() -> Iterator[None]:
    try:
        yield
    except DivergenceError as exc:
        click.echo(f"Error: diverged at step {exc.step}: {exc}", err=True)
        sys.exit(3)
    except ParameterError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(2)
    except PadeStepError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(1)


def _setup(quiet: bool) -> None:
    if quiet:
        logging.getLogger("padestep").setLevel(logging.ERROR)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _summary(quiet: bool, title: str, rows: list[tuple[str, object]]) -> None:
    if not quiet:
        click.echo(format_summary(title, rows), err=True)


def _raise_failures(result: RunResult) -> None:
    if not result.failed:
        return
    errors = list(result.failed.values())
    raise next((e for e in errors if isinstance(e, DivergenceError)), errors[0])


def _check_step(dt: float | None, cfl: float | None) -> None:
    if dt is not None and cfl is not None:
        raise click.UsageError("give either --dt or --cfl, not both")


def _build(problem: str, elements: int | None, grading: str) -> tuple[ProblemKind, MeshedModel]:
    kind = ProblemKind(problem)
    spec = ProblemSpec(kind=kind, elements=elements, grading=Grading(grading))
    return kind, build_model(spec)


def _rho_inf(kind: ProblemKind, rho_inf: float | None) -> float:
    if rho_inf is not None:
        return rho_inf
    return 0.0 if kind is ProblemKind.THREE_DOF else DEFAULT_RHO_INF


def _resolve_dt(
    kind: ProblemKind, model: MeshedModel, dt: float | None, cfl: float | None, order: int
) -> float:
    if dt is not None:
        return dt
    if model.wave_speed is None:
        if cfl is not None:
            raise click.UsageError(f"--cfl needs a wave problem; {model.name} has no wave speed")
        return DEFAULT_DT[kind]
    cfl = recommended_cfl(order) if cfl is None else cfl
    return cfl_to_dt(cfl, model.wave_speed, model.cfl_length)


def _duration(kind: ProblemKind, model: MeshedModel, duration: float | None) -> float:
    """Requested duration, else two transits of the rod or the problem's default."""
    if duration is not None:
        return duration
    if kind in DEFAULT_DURATION:
        return DEFAULT_DURATION[kind]
    if kind is ProblemKind.ROD:
        segments = rod_segments(model.params)
    else:
        segments = bimaterial_segments(model.params)
    return 2.0 * sum(s.length / s.speed for s in segments)


def _probes(model: MeshedModel, names: tuple[str, ...]) -> tuple[list[str], list[int]]:
    names = list(names) or list(model.probes)
    unknown = [n for n in names if n not in model.probes]
    if unknown:
        raise click.UsageError(
            f"unknown probe(s) {', '.join(unknown)} for {model.name}; "
            f"expected {', '.join(model.probes)}"
        )
    return names, [model.probes[n] for n in names]


def _reference_columns(
    model: MeshedModel, names: list[str], t_grid: np.ndarray
) -> dict[str, np.ndarray]:
    if model.reference is None:
        return {}
    series = model.reference(t_grid)
    return {
        key: values
        for key, values in series.items()
        if any(key.startswith(f"{name}_") for name in names)
    }


def _reference_errors(history, names, reference) -> list[tuple[str, object]]:
    """max |numeric - reference| per reference column such as ``mid_v_ref``."""
    rows = []
    if not history:
        return rows
    for key, exact in reference.items():
        name, quantity = key.removesuffix("_ref").rsplit("_", 1)
        j = names.index(name)
        numeric = np.array([getattr(rec, quantity)[j] for rec in history])
        rows.append((f"max |{name}_{quantity} error|", float(np.max(np.abs(numeric - exact)))))
    return rows


@click.group()
def main():
    """Mixed-order Padé time integration for linear structural dynamics."""


@main.command()
@_config_option
@click.option("--M", "order", type=click.IntRange(1, 8), default=2, help="Denominator order M.")
@click.option("--rho-inf", type=click.FloatRange(0.0, 1.0), default=DEFAULT_RHO_INF)
@click.option("--hht-alpha", type=float, default=None, help="Add HHT-α columns for this α.")
@click.option("--x-min", type=POSITIVE, default=1e-3, help="Smallest Δt/T.")
@click.option("--x-max", type=POSITIVE, default=1e3, help="Largest Δt/T.")
@click.option("--points", type=click.IntRange(min=2), default=400, help="Grid points.")
@_max_concurrent_option
@_output_options
def spectral(order, rho_inf, hht_alpha, x_min, x_max, points, max_concurrent, out, quiet):
    """Spectral radius, phase, period error and damping ratio over a log grid of Δt/T."""
    _setup(quiet)
    with _exit_codes():
        grid = log_grid(x_min, x_max, points)
        scheme = mixed_scheme(order, rho_inf)
        jobs = {"pade": lambda: sweep(scheme, grid)}
        hht = HHTTarget(hht_alpha) if hht_alpha is not None else None
        if hht is not None:
            jobs["hht"] = lambda: sweep(hht, grid)
        result = Runner(max_concurrent).run(jobs)
        _raise_failures(result)
        points_pade = result.results["pade"]
        _emit(format_spectral_csv(points_pade, result.results.get("hht")), out)

        if not quiet:
            rows: list[tuple[str, object]] = [
                ("scheme", f"M={order} rho_inf={rho_inf:g}"),
                ("points", len(points_pade)),
                ("rho at x_max", points_pade[-1].rho),
                ("dt/T for 1% period error", max_step_ratio(scheme, 0.01)),
            ]
            if hht is not None:
                rows += [
                    ("HHT alpha", hht.alpha),
                    ("HHT rho_inf", hht.rho_inf),
                    ("HHT dt/T for 1% period error", max_step_ratio(hht, 0.01)),
                ]
            _summary(quiet, "Spectral sweep", rows)


@main.command()
@_config_option
@_problem_options
@_scheme_options
@click.option(
    "--reference/--no-reference", default=True, help="Append analytical reference columns."
)
@_output_options
def simulate(
    problem, elements, grading, dt, cfl, duration, probe, order, rho_inf, p_f, reference, out, quiet
):
    """Integrate a benchmark problem and write probe histories."""
    _setup(quiet)
    with _exit_codes():
        _check_step(dt, cfl)
        kind, model = _build(problem, elements, grading)
        names, indices = _probes(model, probe)
        cfg = StepperConfig(
            order=order,
            rho_inf=_rho_inf(kind, rho_inf),
            dt=_resolve_dt(kind, model, dt, cfl, order),
            p_f=p_f,
            duration=_duration(kind, model, duration),
        )
        history = integrate(model.system, cfg, model.u0, model.v0, probes=indices)[1:]
        t_grid = np.array([rec.t for rec in history])
        ref = _reference_columns(model, names, t_grid) if reference else {}
        _emit(format_history_csv(history, names, ref), out)

        rows = [
            ("problem", model.name),
            ("DOFs", model.system.n_dof),
            ("scheme", f"M={cfg.order} rho_inf={cfg.rho_inf:g} p_f={cfg.force_degree}"),
            ("dt", cfg.dt),
            ("steps", len(history)),
        ]
        _summary(quiet, "Simulation", rows + _reference_errors(history, names, ref))


@main.command()
@_config_option
@_scheme_options
@click.option("--dt0", type=POSITIVE, default=0.05, help="Coarsest time step.")
@click.option("--levels", type=click.IntRange(2, 12), default=5, help="Number of halvings.")
@click.option("--duration", type=POSITIVE, default=1.0, help="Time at which error is measured.")
@_max_concurrent_option
@_output_options
def convergence(order, rho_inf, p_f, dt0, levels, duration, max_concurrent, out, quiet):
    """Error of the harmonically loaded oscillator under successive step halvings."""
    _setup(quiet)
    with _exit_codes():
        model = build_sdof()
        rho = DEFAULT_RHO_INF if rho_inf is None else rho_inf
        dts = [dt0 / 2**i for i in range(levels)]
        StepperConfig(order=order, rho_inf=rho, dt=dt0, p_f=p_f, duration=duration)

        def level(step: float) -> float:
            cfg = StepperConfig(order=order, rho_inf=rho, dt=step, p_f=p_f, duration=duration)
            last = integrate(model.system, cfg, model.u0, model.v0)[-1]
            return sdof_error(model.params, last.t, last.u[0], last.v[0])

        jobs = {f"{i:02d}": (lambda step=step: level(step)) for i, step in enumerate(dts)}
        result = Runner(max_concurrent).run(jobs)
        _raise_failures(result)
        errors = [result.results[f"{i:02d}"] for i in range(levels)]
        table = richardson_levels(dts, errors)
        _emit(format_convergence_csv(table), out)

        _summary(
            quiet,
            "Convergence",
            [
                ("scheme", f"M={order} rho_inf={rho:g}"),
                ("finest dt", dts[-1]),
                ("finest error", errors[-1]),
                ("terminal order", table[-1].order_estimate),
            ],
        )


@main.command()
@_config_option
@_problem_options
@_scheme_options
@click.option("--hht-alpha", type=float, default=None, help="HHT α (default from rho_inf).")
@click.option("--hht-cfl", type=POSITIVE, default=1.0, help="HHT CFL number.")
@click.option("--hht-dt", type=POSITIVE, default=None, help="HHT time step (overrides --hht-cfl).")
@_max_concurrent_option
@_output_options
def compare(
    problem,
    elements,
    grading,
    dt,
    cfl,
    duration,
    probe,
    order,
    rho_inf,
    p_f,
    hht_alpha,
    hht_cfl,
    hht_dt,
    max_concurrent,
    out,
    quiet,
):
    """Run a problem with the mixed-order scheme and with HHT-α and align the histories."""
    _setup(quiet)
    with _exit_codes():
        _check_step(dt, cfl)
        kind, model = _build(problem, elements, grading)
        names, indices = _probes(model, probe)
        rho = _rho_inf(kind, rho_inf)
        hht = HHTTarget(rho_infty_to_alpha(rho) if hht_alpha is None else hht_alpha)
        span = _duration(kind, model, duration)
        cfg = StepperConfig(
            order=order,
            rho_inf=rho,
            dt=_resolve_dt(kind, model, dt, cfl, order),
            p_f=p_f,
            duration=span,
        )
        if hht_dt is None:
            if model.wave_speed is not None:
                hht_dt = cfl_to_dt(hht_cfl, model.wave_speed, model.cfl_length)
            else:
                hht_dt = cfg.dt

        jobs = {
            "pade": lambda: integrate(model.system, cfg, model.u0, model.v0, probes=indices),
            "hht": lambda: hht_integrate(
                model.system, hht.alpha, hht_dt, model.u0, model.v0, duration=span, probes=indices
            ),
        }
        result = Runner(max_concurrent).run(jobs)
        _raise_failures(result)
        pade_history = result.results["pade"][1:]
        hht_history = result.results["hht"][1:]
        if not pade_history or not hht_history:
            raise click.UsageError("duration is shorter than one step")
        _emit(format_comparison_csv(pade_history, hht_history, names), out)

        _summary(
            quiet,
            "Comparison",
            [
                ("problem", model.name),
                ("scheme", f"M={order} rho_inf={rho:g}, dt={cfg.dt:.6g}"),
                ("HHT", f"alpha={hht.alpha:.6g}, dt={hht_dt:.6g}"),
                ("steps", f"{len(pade_history)} vs {len(hht_history)}"),
            ],
        )
