"""Replication harness: run every built-in scenario and diff against published values."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import structlog

from wsncalc.scenarios.builtin import BUILTIN_SCENARIOS, VERSION_PIN, BuiltinScenario
from wsncalc.scenarios.loader import to_path_scenario
from wsncalc.scenarios.report import (
    BoundsReport,
    ReportScope,
    align,
    format_value,
    render_csv,
    run_report,
    write_csv,
)

logger = structlog.get_logger()

# absorbs float noise when a value sits exactly on the tolerance edge
EDGE_SLACK = 1e-9


@dataclass(frozen=True)
class ReplicationCheck:
    scenario: str
    metric: str
    flow_id: str
    expected: float
    actual: float
    tolerance: float

    @property
    def deviation(self) -> float:
        return self.actual - self.expected

    @property
    def ok(self) -> bool:
        return abs(self.deviation) <= self.tolerance + EDGE_SLACK


@dataclass(frozen=True)
class ReplicationResult:
    checks: tuple[ReplicationCheck, ...]
    reports: dict[str, BoundsReport] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def mismatches(self) -> list[ReplicationCheck]:
        return [c for c in self.checks if not c.ok]


def metric_values(report: BoundsReport) -> dict[tuple[str, str], float]:
    """(metric, flow id) -> value; node metrics come from the first node of the path."""
    values: dict[tuple[str, str], float] = {}
    first_node = report.node_bounds[0].node_id if report.node_bounds else None
    for nb in report.node_bounds:
        if nb.node_id != first_node:
            continue
        values[("Q", nb.flow_id)] = nb.backlog
        values[("D", nb.flow_id)] = nb.delay
        values[("e", nb.flow_id)] = nb.effective_bandwidth
    for pb in report.path_bounds:
        values[("DD", pb.flow_id)] = pb.delay
        values[("jitter", pb.flow_id)] = pb.jitter
        values[("ee", pb.flow_id)] = pb.effective_bandwidth
    return values


def _run_one(scenario: BuiltinScenario) -> tuple[BoundsReport, list[ReplicationCheck]]:
    path = to_path_scenario(scenario.document)
    report = run_report(path, ReportScope.ALL, name=scenario.name)
    values = metric_values(report)
    checks = []
    for exp in scenario.expectations:
        check = ReplicationCheck(
            scenario=scenario.name,
            metric=exp.metric,
            flow_id=exp.flow_id,
            expected=exp.value,
            actual=values[(exp.metric, exp.flow_id)],
            tolerance=exp.tolerance,
        )
        if not check.ok:
            logger.warning(
                "replication_mismatch",
                scenario=check.scenario,
                metric=check.metric,
                flow_id=check.flow_id,
                expected=check.expected,
                actual=check.actual,
                tolerance=check.tolerance,
            )
        checks.append(check)
    return report, checks


def replicate(names: list[str] | None = None, *, max_workers: int = 4) -> ReplicationResult:
    """Run the named built-in scenarios (all by default), in registry order.

    Raises:
        KeyError: if a name is not a built-in scenario.
    """
    selected = [BUILTIN_SCENARIOS[n] for n in (names or list(BUILTIN_SCENARIOS))]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        outcomes = list(pool.map(_run_one, selected))
    reports = {s.name: report for s, (report, _) in zip(selected, outcomes, strict=True)}
    checks = tuple(check for _, batch in outcomes for check in batch)
    result = ReplicationResult(checks=checks, reports=reports)
    logger.info(
        "replication_finished",
        version_pin=VERSION_PIN,
        scenarios=len(selected),
        checks=len(checks),
        mismatches=len(result.mismatches),
    )
    return result


SUMMARY_HEADER = ("scenario", "metric", "flow", "expected", "actual", "tolerance", "status")


def _summary_rows(result: ReplicationResult) -> list[list[str]]:
    return [
        [
            c.scenario,
            c.metric,
            c.flow_id,
            format_value(c.expected),
            format_value(c.actual),
            format_value(c.tolerance),
            "ok" if c.ok else "MISMATCH",
        ]
        for c in result.checks
    ]


def render_replication_table(result: ReplicationResult) -> str:
    lines = align(SUMMARY_HEADER, _summary_rows(result))
    status = "all values reproduced" if result.ok else f"{len(result.mismatches)} mismatches"
    lines += ["", f"replication set {VERSION_PIN}: {len(result.checks)} checks, {status}"]
    return "\n".join(lines) + "\n"


def write_replication(result: ReplicationResult, out_dir: Path) -> list[Path]:
    """One report CSV per scenario plus replication.csv; returns the written paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, report in result.reports.items():
        target = out_dir / f"{name}.csv"
        target.write_text(render_csv(report), encoding="utf-8", newline="\n")
        written.append(target)
    summary = out_dir / "replication.csv"
    summary.write_text(write_csv(SUMMARY_HEADER, _summary_rows(result)), encoding="utf-8",
                       newline="\n")
    written.append(summary)
    return written
