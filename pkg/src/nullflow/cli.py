"""Command-line interface for nullflow.

Every pipeline stage is a subcommand that reads CSV/JSON inputs, writes its
artifacts to the output directory and records the run in the run log. Errors
are reported as a JSON document on stdout with an exit code per error class.
"""

import json
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import numpy as np
import typer
from loguru import logger
from rich import print as rich_print
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table as RichTable
from scipy.signal import resample

from . import __version__, formats, spectral
from .config import RunConfig, parse_real
from .diffpoly import DiffPoly
from .evolution import CurvatureGrid, consistency_check, curve_from_grid, evolve_curvature, evolve_curve
from .exceptions import (
    FrameDriftError,
    InputError,
    InputInvalidError,
    NullflowError,
    PoleEncounteredError,
    error_payload,
)
from .geometry import Frame, curvature_from_curve, integrate_frenet, pseudo_arc_reparametrize
from .hierarchy import density_table, generate, hierarchy_motion, kdv_rhs, motion_from_p3
from .provenance import RunLog, init_run_log
from .special import (
    WeierstrassParams,
    build_lax,
    charpoly_spread,
    lax_residual,
    miura_check,
    miura_curvature,
    mu_invariant,
    painleve2_solve,
    similarity_profile,
    traveling_wave,
    traveling_wave_residual,
)
from .validators import validate_input_file, validate_output_dir

_debug_mode = False

logger.configure(extra={"stage": ""})
logger.remove()


def configure_logging(debug: bool = False) -> None:
    """Configure logging based on debug mode.

    Args:
        debug: Whether to enable debug mode.

    """
    global _debug_mode
    _debug_mode = debug

    logger.remove()
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
        "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
        "<magenta>{extra[stage]}</magenta> <level>{message}</level>",
        level="DEBUG" if debug else "INFO",
    )
    if debug:
        logger.debug("Debug mode enabled - showing all log messages")


configure_logging(debug=False)

app = typer.Typer(help=f"Nullflow - null curves moved by the KdV hierarchy. Version: {__version__}")

# shared options
OUTPUT = typer.Option("nullflow_out", "--output", "-o", help="Directory where artifacts are written")
FORMAT = typer.Option(None, "--format", "-f", help="Output format for snapshots: csv or json")
CONFIG = typer.Option(None, "--config", "-c", help="TOML configuration file (default: .nullflow.toml)")
RUN_LOG = typer.Option(None, "--run-log", help="Append JSON-lines run events to this file")
DEBUG = typer.Option(False, "--debug", "-d", help="Enable debug mode with verbose logging")


class _Run:
    """State of one command invocation: configuration, run log and output directory."""

    def __init__(self, config: RunConfig, run_log: RunLog, output: Path) -> None:
        self.config = config
        self.run_log = run_log
        self.output = output
        self.partial: Path | None = None

    def input(self, path: Path) -> Path:
        return validate_input_file(path, self.run_log)

    def write(self, kind: str, name: str, writer: Callable[..., Path], *args: Any, **kwargs: Any) -> Path:
        path = writer(self.output / name, *args, **kwargs)
        self.run_log.log_artifact_write(path, kind)
        rich_print(f"[green]Wrote[/green] {kind}: [cyan]{path}[/cyan]")
        return path

    @property
    def meta(self) -> dict[str, Any]:
        return self.config.metadata()


@contextmanager
def _run(
    command: str,
    parameters: dict[str, Any],
    output: str,
    fmt: str | None,
    config_path: Path | None,
    run_log_path: Path | None,
    debug: bool,
) -> Iterator[_Run]:
    configure_logging(debug=debug)
    run_log = RunLog(enabled=False)
    run: _Run | None = None
    try:
        try:
            base = RunConfig.from_file_or_defaults(config_path)
        except (FileNotFoundError, ValueError) as e:
            raise InputInvalidError(config_path or Path(".nullflow.toml"), str(e)) from e
        if output != "nullflow_out" or base.output == "nullflow_out":
            base.output = output
        if fmt is not None:
            base.format = fmt
        if run_log_path is not None:
            base.run_log = str(run_log_path)
        config = base.for_command(command, **parameters)
        run_log = init_run_log(enabled=True, log_file=Path(config.run_log) if config.run_log else None)
        run_log.log_run_start(command, config.to_dict())
        run = _Run(config, run_log, validate_output_dir(Path(config.output), run_log))
        yield run
    except (NullflowError, ValueError) as e:
        error = e if isinstance(e, NullflowError) else InputError(str(e))
        payload = error_payload(error, run.partial if run is not None else None)
        run_log.log_run_error(payload)
        logger.error(error.message)
        typer.echo(json.dumps(payload))
        raise typer.Exit(error.exit_code) from None


def _motion(p3: str | None, hierarchy_n: int | None) -> tuple[Any, int | None]:
    if p3 is not None:
        return motion_from_p3(DiffPoly.parse(p3)), None
    n = 2 if hierarchy_n is None else hierarchy_n
    if n == 1:
        return kdv_rhs(1), 1
    return hierarchy_motion(n), n


def _uniform_step(s: np.ndarray, path: Path) -> float:
    steps = np.diff(s)
    if s.size < 2 or np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
        raise InputInvalidError(path, "the s column must be strictly increasing and uniform")
    return float(steps[0])


@app.callback(invoke_without_command=True)
def callback(ctx: typer.Context) -> None:
    """Show help when nullflow is invoked without a subcommand."""
    if ctx.invoked_subcommand is None:
        print(ctx.get_help())
        raise typer.Exit()


@app.command(name="hierarchy")
def hierarchy_command(
    n: int = typer.Option(3, "--n", "-n", help="Last member of the hierarchy to generate"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Generate the KdV hierarchy g_0..g_n, its densities and flows.

    Example:
        $ nullflow hierarchy --n 3

    """
    with _run("hierarchy", {"n": n}, output, None, config, run_log, debug) as run:
        table = generate(n, max_depth=run.config.max_depth)
        flows = [str(kdv_rhs(k)) for k in range(1, n + 1)]
        report = formats.render_report("hierarchy.txt.j2", table=table, flows=flows)
        typer.echo(report)

        densities = RichTable(title="Conserved densities")
        densities.add_column("textbook")
        densities.add_column("equal mod im(D)")
        for textbook, _, equal in density_table():
            densities.add_row(str(textbook), "yes" if equal else "no")
        Console(stderr=True).print(densities)

        run.write("hierarchy", "hierarchy.json", formats.write_json, {"meta": run.meta, **table.to_json()})
        run.write("report", "hierarchy.txt", lambda path: formats.write_text(path, report))


@app.command(name="motion")
def motion_command(
    p3: str | None = typer.Option(None, "--p3", help="Binormal component as polynomial text, e.g. '4*u0'"),
    hierarchy_n: int | None = typer.Option(None, "--hierarchy-n", help="Use the motion of the n-th KdV flow"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Derive the full local motion p1..p6 and the curvature flow of a binormal component.

    Example:
        $ nullflow motion --p3 2

    """
    with _run("motion", {"p3": p3, "hierarchy_n": hierarchy_n}, output, None, config, run_log, debug) as run:
        motion, n = _motion(p3, hierarchy_n)
        if isinstance(motion, DiffPoly):
            raise InputError("the first flow is not induced by a local motion of the curve")
        report = formats.render_report("motion.txt.j2", motion=motion, n=n)
        typer.echo(report)
        run.write("motion", "motion.json", formats.write_json, {"meta": run.meta, **motion.to_json()})
        run.write("report", "motion.txt", lambda path: formats.write_text(path, report))


@app.command(name="reconstruct")
def reconstruct_command(
    kappa: Path = typer.Option(..., "--kappa", "-k", help="Curvature CSV with columns s,kappa"),
    frame0: str = typer.Option("identity", "--frame0", help="'identity' or a JSON file holding a 4x4 'matrix'"),
    method: str = typer.Option("rkmk4", "--method", help="Frenet stepper: rkmk4 or rk4"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Integrate the Frenet system of a curvature profile into a curve and its frames.

    Example:
        $ nullflow reconstruct --kappa kappa.csv

    """
    parameters = {"kappa": str(kappa), "frame0": frame0, "method": method}
    with _run("reconstruct", parameters, output, None, config, run_log, debug) as run:
        table = formats.read_curvature(run.input(kappa))
        s = table.column("s")
        h = _uniform_step(s, kappa)
        start = Frame.identity()
        if frame0 != "identity":
            document = formats.read_json(run.input(Path(frame0)))
            start = Frame(np.asarray(document["matrix"], dtype=float))
            if not start.is_valid(run.config.frame_tolerance):
                raise FrameDriftError(start.residual(), run.config.frame_tolerance, 0)
        curve = integrate_frenet(
            table.column("kappa"), h, start, s0=float(s[0]), method=method, tolerance=run.config.frame_tolerance
        )
        run.write("curve", "curve.csv", formats.write_curve, curve, run.meta)
        run.write("frames", "frames.csv", formats.write_frames, curve, run.meta)


@app.command(name="extract")
def extract_command(
    curve: Path = typer.Option(..., "--curve", help="Curve CSV with columns s (or t),x1,x2,x3"),
    samples: int | None = typer.Option(None, "--samples", help="Number of output samples (default: input rows)"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Reparametrize a sampled null curve by its natural parameter and estimate its curvature.

    Example:
        $ nullflow extract --curve curve.csv

    """
    with _run("extract", {"curve": str(curve), "samples": samples}, output, None, config, run_log, debug) as run:
        t, points = formats.curve_points(formats.read_curve(run.input(curve)))
        natural = pseudo_arc_reparametrize(
            t,
            points,
            samples,
            null_tolerance=run.config.null_tolerance,
            arc_tolerance=run.config.arc_tolerance,
        )
        kappa = curvature_from_curve(natural, run.config.arc_tolerance)
        valid = np.isfinite(kappa)
        meta = {**run.meta, "length": natural.meta["length"], "h": natural.h}
        run.write("curvature", "curvature.csv", formats.write_curvature, natural.s[valid], kappa[valid], meta)


@app.command(name="evolve")
def evolve_command(
    kappa0: Path = typer.Option(..., "--kappa0", help="Initial curvature CSV (s,kappa) on one period"),
    hierarchy_n: int | None = typer.Option(None, "--hierarchy-n", help="Evolve by the n-th KdV flow (default 2)"),
    p3: str | None = typer.Option(None, "--p3", help="Evolve by the motion of this binormal component instead"),
    length: str | None = typer.Option(None, "--L", help="Period (default: rows times the grid step)"),
    samples: int | None = typer.Option(None, "--N", help="Resample to this power-of-two grid size"),
    dt: str = typer.Option("1e-3", "--dt", help="Time step"),
    t_end: str = typer.Option("1", "--T", help="Final time"),
    snap_every: int = typer.Option(100, "--snap-every", help="Snapshot cadence in steps"),
    method: str = typer.Option("ifrk4", "--method", help="Time stepper: ifrk4 or rk4"),
    with_curve: bool = typer.Option(False, "--with-curve", help="Co-evolve the curve frames"),
    fmt: str | None = FORMAT,
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Evolve periodic curvature by a hierarchy flow, optionally together with the curve.

    Example:
        $ nullflow evolve --hierarchy-n 2 --kappa0 sech2.csv --dt 1e-3 --T 1

    """
    parameters = {
        "kappa0": str(kappa0),
        "hierarchy_n": hierarchy_n,
        "p3": p3,
        "L": length,
        "N": samples,
        "dt": dt,
        "T": t_end,
        "snap_every": snap_every,
        "method": method,
        "with_curve": with_curve,
    }
    with _run("evolve", parameters, output, fmt, config, run_log, debug) as run:
        table = formats.read_curvature(run.input(kappa0))
        values = table.column("kappa")
        h = _uniform_step(table.column("s"), kappa0)
        period = parse_real(length) if length is not None else float(table.meta.get("length", h * values.size))
        if samples is not None and samples != values.size:
            values = resample(values, samples)
        grid = CurvatureGrid(period, values)
        motion, _ = _motion(p3, hierarchy_n)
        if with_curve and isinstance(motion, DiffPoly):
            raise InputError("the first flow is not induced by a local motion of the curve")
        step, stop = parse_real(dt), parse_real(t_end)

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            TextColumn("[cyan]{task.completed}/{task.total}"),
            console=Console(stderr=True),
        ) as progress:
            task = progress.add_task("[green]Evolving...", total=None)

            def on_step(done: int, total: int) -> None:
                progress.update(task, completed=done, total=total)

            if with_curve:
                curve0 = curve_from_grid(grid)
                states = evolve_curve(
                    motion,
                    curve0,
                    step,
                    stop,
                    length=period,
                    snap_every=snap_every,
                    tolerance=run.config.frame_tolerance,
                    arc_tolerance=run.config.arc_tolerance,
                    instability_factor=run.config.instability_factor,
                    on_step=on_step,
                )
            else:
                states = evolve_curvature(
                    motion,
                    grid,
                    step,
                    stop,
                    snap_every=snap_every,
                    method=method,
                    instability_factor=run.config.instability_factor,
                    on_step=on_step,
                )

        suffix = "jsonl" if run.config.format == "json" else "csv"
        meta = {**run.meta, "length": period, "n": grid.n}
        run.write("snapshots", f"snapshots.{suffix}", formats.write_snapshots, states, run.config.format, meta)
        run.write("conserved", "conserved.csv", formats.write_conserved, states, meta)
        drift = formats.relative_drift(states)
        summary: dict[str, Any] = {"meta": meta, "relative_drift": drift.tolist(), "t_end": states[-1].t}
        if with_curve:
            summary["consistency"] = consistency_check(motion, curve0, step, period)
        run.write("summary", "evolve.json", formats.write_json, summary)
        rich_print(f"Relative drift of P0, P1, P2: [bold]{', '.join(f'{d:.2e}' for d in drift)}[/bold]")
        if with_curve:
            rich_print(f"Curve/curvature consistency at dt={step:g}: [bold]{summary['consistency']:.3e}[/bold]")


@app.command(name="travelingwave")
def travelingwave_command(
    lam: str = typer.Option("0", "--lambda", help="Wave speed"),
    g2: str = typer.Option("4", "--g2", help="First Weierstrass invariant"),
    g3: str = typer.Option("0", "--g3", help="Second Weierstrass invariant"),
    period_samples: int = typer.Option(256, "--period-samples", help="Samples per period"),
    periods: int = typer.Option(1, "--periods", help="Number of periods to sample"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Sample the periodic traveling-wave curvature -2 P(s + w3) + lambda/6.

    Example:
        $ nullflow travelingwave --lambda 1 --g2 4 --g3 0

    """
    parameters = {"lambda": lam, "g2": g2, "g3": g3, "period_samples": period_samples, "periods": periods}
    with _run("travelingwave", parameters, output, None, config, run_log, debug) as run:
        speed = parse_real(lam)
        params = WeierstrassParams.from_invariants(parse_real(g2), parse_real(g3))
        s = np.arange(period_samples * periods) * (params.period / period_samples)
        profile = traveling_wave(speed, params, s)
        residual = traveling_wave_residual(speed, params, period_samples)
        meta = {**run.meta, "length": params.period * periods}
        run.write("curvature", "travelingwave.csv", formats.write_curvature, s, profile, meta)
        report = {
            "meta": meta,
            "lambda": speed,
            "g2": params.g2,
            "g3": params.g3,
            "roots": [params.e1, params.e2, params.e3],
            "omega1": params.omega1,
            "omega3": params.omega3,
            "residual": residual,
        }
        run.write("report", "travelingwave.json", formats.write_json, report)
        rich_print(f"Period [bold]{params.period:.12g}[/bold], wave-equation residual [bold]{residual:.3e}[/bold]")


@app.command(name="lax")
def lax_command(
    lam: str = typer.Option(..., "--lambda", help="Spectral parameter (wave speed)"),
    kappa: Path = typer.Option(..., "--kappa", "-k", help="Curvature CSV with columns s,kappa"),
    p3: str = typer.Option("2", "--p3", help="Binormal component of the motion"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Check the Lax equation L' = [L, K] and the constancy of mu = F L F^-1.

    Example:
        $ nullflow lax --lambda 1 --kappa travelingwave.csv

    """
    with _run("lax", {"lambda": lam, "kappa": str(kappa), "p3": p3}, output, None, config, run_log, debug) as run:
        table = formats.read_curvature(run.input(kappa))
        s, values = table.column("s"), table.column("kappa")
        h = _uniform_step(s, kappa)
        motion = motion_from_p3(DiffPoly.parse(p3))
        period = table.meta.get("length")
        if period is not None and np.isclose(float(period), h * values.size):
            # one full period without the endpoint: differentiate spectrally
            jets = spectral.jet(values, float(period), max(motion.order, 0))
            pair = build_lax(motion, jets, parse_real(lam), s=s)
        else:
            pair = build_lax(motion, values, parse_real(lam), h=h, s=s)
        curve = integrate_frenet(values, h, s0=float(s[0]), tolerance=run.config.frame_tolerance)
        report = {
            "lambda": pair.lam,
            "lax_residual": lax_residual(pair, h),
            "mu_spread": mu_invariant(pair, curve.frames),
            "charpoly_spread": charpoly_spread(pair).tolist(),
        }
        run.write("lax", "lax.json", formats.write_json, {"meta": run.meta, **report})
        typer.echo(json.dumps(report, sort_keys=True))


@app.command(name="painleve")
def painleve_command(
    c: str = typer.Option("0", "--c", help="Parameter c of v'' = 2v^3 - xv - c"),
    v0: str = typer.Option("0", "--v0", help="v(x0)"),
    v0p: str = typer.Option("0", "--v0p", help="v'(x0)"),
    xmin: str = typer.Option("-1", "--xmin", help="Left end of the window"),
    xmax: str = typer.Option("1", "--xmax", help="Right end of the window"),
    x0: str = typer.Option("0", "--x0", help="Abscissa of the initial data"),
    samples: int = typer.Option(2001, "--samples", help="Number of grid points"),
    a: str = typer.Option("1", "--a", help="Similarity rate a of the curvature equation"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Solve Painleve II and map the solution to a self-similar curvature profile.

    Example:
        $ nullflow painleve --c 0 --v0 0.1 --v0p 0 --xmin -2 --xmax 3

    """
    parameters = {"c": c, "v0": v0, "v0p": v0p, "xmin": xmin, "xmax": xmax, "x0": x0, "samples": samples, "a": a}
    with _run("painleve", parameters, output, None, config, run_log, debug) as run:
        x = np.linspace(parse_real(xmin), parse_real(xmax), samples)
        try:
            solution = painleve2_solve(
                parse_real(c),
                parse_real(v0),
                parse_real(v0p),
                x,
                x0=parse_real(x0),
                tolerance=run.config.painleve_tolerance,
            )
        except PoleEncounteredError as e:
            rows = np.column_stack([e.partial.x, e.partial.values])
            run.partial = run.write("partial", "painleve_partial.csv", formats.write_table, ("x", "v", "vp"), rows)
            raise
        rate = parse_real(a)
        rows = np.column_stack([solution.x, solution.v, solution.vp])
        run.write("painleve", "painleve.csv", formats.write_table, ("x", "v", "vp"), rows, run.meta)
        s, (kappa, *_) = miura_curvature(solution, rate)
        run.write("curvature", "curvature.csv", formats.write_curvature, s, kappa, run.meta)
        residual = miura_check(solution, rate)
        run.write("report", "painleve.json", formats.write_json, {"meta": run.meta, "residual": residual})
        rich_print(f"Similarity-equation residual of the Miura image: [bold]{residual:.3e}[/bold]")


@app.command(name="similarity")
def similarity_command(
    kappa: Path = typer.Option(..., "--kappa", "-k", help="Similarity profile CSV with columns s,kappa"),
    a: str = typer.Option("1", "--a", help="Rate a in r(t) = (a t + b)^(2/3)"),
    b: str = typer.Option("1", "--b", help="Offset b in r(t) = (a t + b)^(2/3)"),
    t: str = typer.Option("0", "--t", help="Time"),
    output: str = OUTPUT,
    config: Path | None = CONFIG,
    run_log: Path | None = RUN_LOG,
    debug: bool = DEBUG,
) -> None:
    """Evolve a self-similar profile to time t by rescaling.

    Example:
        $ nullflow similarity --kappa curvature.csv --a 1 --b 1 --t 0.5

    """
    with _run("similarity", {"kappa": str(kappa), "a": a, "b": b, "t": t}, output, None, config, run_log, debug) as run:
        table = formats.read_curvature(run.input(kappa))
        s = table.column("s")
        profile = similarity_profile(s, table.column("kappa"), parse_real(a), parse_real(b), parse_real(t))
        valid = np.isfinite(profile)
        if not np.all(valid):
            logger.warning(f"{int(np.sum(~valid))} nodes fall outside the rescaled profile and are dropped")
        run.write("curvature", "similarity.csv", formats.write_curvature, s[valid], profile[valid], run.meta)


@app.command(name="version")
def version_command() -> None:
    """Display the current version of nullflow."""
    rich_print(f"[bold green]Nullflow[/bold green] version: [bold blue]{__version__}[/bold blue]")


def cli() -> None:
    """Entry point for the nullflow command-line interface.

    Running without a subcommand displays help text.

    Example:
        $ nullflow                  # Shows help
        $ nullflow hierarchy --n 3  # Print g_0..g_3

    """
    app()
