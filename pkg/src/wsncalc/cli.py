"""CLI entrypoint — Typer-based command interface.

Commands:
    wsncalc report            — Node and path bounds of a scenario
    wsncalc sweep             — Bounds over a range of one parameter, as CSV
    wsncalc validate          — Check the closed-form bounds against the grid oracle
    wsncalc replicate-paper   — Run every built-in scenario and diff against published values
    wsncalc show              — Print a scenario in canonical units

Scenarios are file paths or builtin:<name>. Exit codes: 0 success, 2 validation
failure or replication mismatch, 3 unstable node, 4 input error.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer
from pydantic import ValidationError

from wsncalc.bounds.models import EffectiveBandwidthMode, PathScenario
from wsncalc.config import Settings, get_settings
from wsncalc.errors import HorizonTooShort, ScenarioError, UnstableNode
from wsncalc.log_config import bind_run_context, configure_logging
from wsncalc.oracle.checks import (
    ValidationReport,
    margin_convergence,
    random_corpus,
    validate_corpus,
)
from wsncalc.scenarios.builtin import builtin_names
from wsncalc.scenarios.loader import dump_scenario, resolve_scenario, to_path_scenario
from wsncalc.scenarios.replicate import render_replication_table, replicate, write_replication
from wsncalc.scenarios.report import ReportFormat, ReportScope, align, format_value, render
from wsncalc.scenarios.report import run_report as run_bounds_report
from wsncalc.scenarios.sweep import SweepParam, render_sweep_csv
from wsncalc.scenarios.sweep import sweep as run_sweep
from wsncalc.scheduling.models import Convention

EXIT_VALIDATION_FAILED = 2
EXIT_UNSTABLE = 3
EXIT_INPUT_ERROR = 4

app = typer.Typer(
    name="wsncalc",
    help="WSN QoS Calculus — worst-case backlog, delay and bandwidth bounds for sensor networks",
    no_args_is_help=True,
)

SCENARIO_HELP = "Scenario file (YAML or JSON) or builtin:<name>"
CONVENTION_HELP = "Residual-latency convention: strict or paper (default from settings)"
EE_MODE_HELP = "Effective-bandwidth mode: literal or aggregate (default from settings)"


def _fail(message: str, code: int) -> typer.Exit:
    typer.echo(f"Error: {message}", err=True)
    return typer.Exit(code=code)


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Translate library errors into messages on stderr and the documented exit codes."""
    try:
        yield
    except ScenarioError as exc:
        raise _fail(str(exc), EXIT_INPUT_ERROR) from exc
    except UnstableNode as exc:
        raise _fail(str(exc), EXIT_UNSTABLE) from exc
    except HorizonTooShort as exc:
        raise _fail(str(exc), EXIT_VALIDATION_FAILED) from exc
    except (ValidationError, ValueError) as exc:
        raise _fail(str(exc), EXIT_INPUT_ERROR) from exc


def _start(command: str, scenario: str) -> Settings:
    try:
        settings = get_settings()
    except ValidationError as exc:
        raise _fail(f"Invalid WSNCALC_* setting: {exc}", EXIT_INPUT_ERROR) from exc
    configure_logging(settings.log_level, settings.log_format)
    bind_run_context(command, scenario)
    return settings


def _load_path(
    ref: str,
    settings: Settings,
    convention: str | None,
    ee_mode: str | None,
) -> tuple[str, PathScenario]:
    """Resolve a scenario reference; CLI options take precedence over the document."""
    doc = resolve_scenario(ref)
    updates: dict[str, object] = {}
    if convention is not None:
        updates["convention"] = Convention.parse(convention)
    if ee_mode is not None:
        updates["ee_mode"] = EffectiveBandwidthMode(ee_mode.strip().lower())
    if updates:
        doc = doc.model_copy(update=updates)
    path = to_path_scenario(
        doc,
        default_convention=settings.default_convention,
        default_ee_mode=settings.default_ee_mode,
        default_gamma=settings.fractal_gamma,
    )
    return doc.name, path


@app.command()
def report(
    scenario: str = typer.Argument(help=SCENARIO_HELP),
    scope: ReportScope = typer.Option(ReportScope.ALL, help="Bounds to report"),
    convention: str | None = typer.Option(None, help=CONVENTION_HELP),
    ee_mode: str | None = typer.Option(None, "--ee-mode", help=EE_MODE_HELP),
    fmt: ReportFormat = typer.Option(ReportFormat.TABLE, "--format", help="Output format"),
) -> None:
    """Compute node and path bounds for every flow of a scenario."""
    settings = _start("report", scenario)
    with _exit_codes():
        name, path = _load_path(scenario, settings, convention, ee_mode)
        result = run_bounds_report(path, scope, name=name)
    typer.echo(render(result, fmt), nl=False)


@app.command()
def sweep(
    scenario: str = typer.Argument(help=SCENARIO_HELP),
    param: SweepParam = typer.Option(..., help="Parameter to vary (canonical units)"),
    start: float = typer.Option(..., "--from", help="First value"),
    stop: float = typer.Option(..., "--to", help="Last value (inclusive)"),
    step: float = typer.Option(..., help="Increment"),
    out: Path | None = typer.Option(None, help="CSV output file (stdout if omitted)"),
    at_time: float | None = typer.Option(
        None, "--at-time", help="Report the backlog at this evolution time (ms)"
    ),
    convention: str | None = typer.Option(None, help=CONVENTION_HELP),
    ee_mode: str | None = typer.Option(None, "--ee-mode", help=EE_MODE_HELP),
) -> None:
    """Evaluate the bounds over a range of one parameter and write them as CSV."""
    settings = _start("sweep", scenario)
    with _exit_codes():
        _, path = _load_path(scenario, settings, convention, ee_mode)
        rows = run_sweep(
            path, param, start, stop, step, max_workers=settings.max_workers, at_time=at_time
        )
    text = render_sweep_csv(param, rows)
    if out is None:
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8", newline="\n")
    typer.echo(f"Wrote {len(rows)} rows to {out}", err=True)


VALIDATION_HEADER = (
    "scenario", "subject", "flow", "kind", "bound", "simulated", "margin", "status"
)


def _render_validation(reports: list[ValidationReport]) -> str:
    rows = [
        [
            check.scenario,
            check.subject,
            check.flow_id,
            check.kind.value,
            format_value(check.closed_form),
            format_value(check.simulated),
            format_value(check.margin),
            check.status.value,
        ]
        for report_ in reports
        for check in report_.checks
    ]
    lines = align(VALIDATION_HEADER, rows)
    checks = sum(len(r.checks) for r in reports)
    failures = sum(len(r.failures) for r in reports)
    lines += ["", f"{len(reports)} scenarios, {checks} checks, {failures} failures"]
    return "\n".join(lines) + "\n"


@app.command()
def validate(
    scenario: str | None = typer.Argument(None, help=SCENARIO_HELP),
    grid_step: float | None = typer.Option(None, help="Oracle grid step in ms"),
    horizon_factor: float | None = typer.Option(None, help="Horizon as a multiple of the bound"),
    random_count: int | None = typer.Option(
        None,
        "--random",
        help="Also validate this many random scenarios (default: WSNCALC_RANDOM_SCENARIOS "
        "without a scenario, none with one)",
    ),
    seed: int | None = typer.Option(None, help="Seed of the random scenarios"),
    bound_scale: float = typer.Option(
        1.0, help="Multiply every closed-form bound before comparing (harness self-test)"
    ),
    convergence: bool = typer.Option(
        False, help="Also report the largest margin at successively halved grid steps"
    ),
    convention: str | None = typer.Option(None, help=CONVENTION_HELP),
) -> None:
    """Check every closed-form bound against the discretized oracle."""
    settings = _start("validate", scenario or "random")
    if random_count is None:
        random_count = settings.random_scenarios if scenario is None else 0
    if scenario is None and random_count <= 0:
        raise _fail("Give a scenario, --random N, or both", EXIT_INPUT_ERROR)
    step = grid_step if grid_step is not None else settings.grid_step_ms
    factor = horizon_factor if horizon_factor is not None else settings.horizon_factor

    with _exit_codes():
        if step <= 0.0 or factor < 1.0:
            raise ScenarioError("--grid-step must be > 0 and --horizon-factor >= 1")
        corpus: list[tuple[str, PathScenario]] = []
        if scenario is not None:
            corpus.append(_load_path(scenario, settings, convention, None))
        if random_count > 0:
            corpus += random_corpus(
                random_count, seed if seed is not None else settings.random_seed
            )
        reports = validate_corpus(
            corpus,
            grid_step=step,
            horizon_factor=factor,
            bound_scale=bound_scale,
            max_workers=settings.max_workers,
        )
        levels: list[tuple[float, float]] = []
        if convergence and scenario is not None:
            name, path = corpus[0]
            levels = margin_convergence(path, name=name, grid_step=step, horizon_factor=factor)

    typer.echo(_render_validation(reports), nl=False)
    if levels:
        rows = [[format_value(s), format_value(m)] for s, m in levels]
        typer.echo("")
        typer.echo("\n".join(align(("grid_step_ms", "max_margin"), rows)))
    if not all(r.passed for r in reports):
        raise typer.Exit(code=EXIT_VALIDATION_FAILED)


@app.command("replicate-paper")
def replicate_paper(
    out: Path | None = typer.Option(None, help="Directory for per-scenario and summary CSVs"),
) -> None:
    """Run every built-in replication scenario and diff against the published values."""
    settings = _start("replicate-paper", "builtin")
    with _exit_codes():
        result = replicate(builtin_names(), max_workers=settings.max_workers)
    typer.echo(render_replication_table(result), nl=False)
    if out is not None:
        written = write_replication(result, out)
        typer.echo(f"Wrote {len(written)} files to {out}", err=True)
    if not result.ok:
        raise typer.Exit(code=EXIT_VALIDATION_FAILED)


@app.command()
def show(scenario: str = typer.Argument(help=SCENARIO_HELP)) -> None:
    """Print a scenario as canonical YAML (Mbps, Kb, ms)."""
    _start("show", scenario)
    with _exit_codes():
        doc = resolve_scenario(scenario)
    typer.echo(dump_scenario(doc), nl=False)


if __name__ == "__main__":
    app()
