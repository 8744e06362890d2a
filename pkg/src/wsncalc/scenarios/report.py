"""Bounds reports and their table, CSV and JSON renderings.

Values are formatted with 4 significant digits (Python's ".4g", round-half-even on
the binary value) in positional notation; infinite values print as "inf". CSV uses a
comma delimiter, a header row and LF line endings.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from collections.abc import Sequence
from decimal import Decimal
from typing import Any

import structlog
from pydantic import BaseModel, ConfigDict

from wsncalc import __version__
from wsncalc.bounds.models import EffectiveBandwidthMode, NodeBounds, PathBounds, PathScenario
from wsncalc.bounds.path_qos import path_bounds_all, path_node_bounds
from wsncalc.scheduling.models import Convention

logger = structlog.get_logger()


class ReportScope(str, enum.Enum):
    NODE = "node"
    PATH = "path"
    ALL = "all"


class ReportFormat(str, enum.Enum):
    TABLE = "table"
    CSV = "csv"
    JSON = "json"


class BoundsReport(BaseModel):
    """Node and path bounds of every flow, with the parameters that produced them."""

    model_config = ConfigDict(frozen=True)

    tool_version: str
    scenario: str
    scope: ReportScope
    convention: Convention
    ee_mode: EffectiveBandwidthMode
    fractal_gamma: float
    units: dict[str, str]
    node_bounds: tuple[NodeBounds, ...] = ()
    path_bounds: tuple[PathBounds, ...] = ()


CANONICAL_UNITS = {"rate": "Mbps", "data": "Kb", "time": "ms"}


def run_report(
    path: PathScenario, scope: ReportScope = ReportScope.ALL, *, name: str = "scenario"
) -> BoundsReport:
    """Compute the bounds requested by scope.

    Raises:
        UnstableNode: if a node on the path fails its stability check.
    """
    node_bounds = path_node_bounds(path) if scope is not ReportScope.PATH else []
    path_bounds = path_bounds_all(path) if scope is not ReportScope.NODE else []
    report = BoundsReport(
        tool_version=__version__,
        scenario=name,
        scope=scope,
        convention=path.convention,
        ee_mode=path.ee_mode,
        fractal_gamma=path.fractal.gamma,
        units=dict(CANONICAL_UNITS),
        node_bounds=tuple(node_bounds),
        path_bounds=tuple(path_bounds),
    )
    logger.info(
        "report_computed",
        scenario=name,
        scope=scope.value,
        node_rows=len(node_bounds),
        path_rows=len(path_bounds),
    )
    return report


def format_value(value: float) -> str:
    """4 significant digits in positional notation; 'inf' for infinite values.

    Rounding is Python's ".4g" (round-half-even on the binary value); the rounded
    digits are then written without an exponent, so 13800.0 prints as "13800".
    """
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(Decimal(format(value, ".4g")), "f")


NODE_HEADER = ("node", "flow", "Q_kb", "D_ms", "e_mbps")
PATH_HEADER = ("flow", "DD_ms", "jitter_ms", "ee_mbps", "fixed_delay_ms")


def _node_row(b: NodeBounds) -> list[str]:
    values = (b.backlog, b.delay, b.effective_bandwidth)
    return [b.node_id, b.flow_id, *(format_value(v) for v in values)]


def _path_row(b: PathBounds) -> list[str]:
    values = (b.delay, b.jitter, b.effective_bandwidth, b.fixed_delay_sum)
    return [b.flow_id, *(format_value(v) for v in values)]


def align(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    """Left-aligned id columns, right-aligned numbers, two spaces between columns."""
    widths = [max(len(cell) for cell in column) for column in zip(header, *rows, strict=True)]
    lines = []
    for row in (header, *rows):
        cells = []
        for index, (cell, width) in enumerate(zip(row, widths, strict=True)):
            numeric = index > 0 and row is not header and _is_number(cell)
            cells.append(cell.rjust(width) if numeric else cell.ljust(width))
        lines.append("  ".join(cells).rstrip())
    return lines


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def render_table(report: BoundsReport) -> str:
    lines = [
        f"scenario: {report.scenario}  convention: {report.convention.value}  "
        f"ee_mode: {report.ee_mode.value}  units: Mbps, Kb, ms",
    ]
    if report.node_bounds:
        lines += ["", "node bounds"]
        lines += align(NODE_HEADER, [_node_row(b) for b in report.node_bounds])
    if report.path_bounds:
        lines += ["", "path bounds"]
        lines += align(PATH_HEADER, [_path_row(b) for b in report.path_bounds])
    return "\n".join(lines) + "\n"


def write_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """CSV text with a header row and LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


CSV_HEADER = ("scope", "node", "flow", "Q_kb", "D_ms", "e_mbps", "DD_ms", "jitter_ms", "ee_mbps")


def render_csv(report: BoundsReport) -> str:
    rows: list[list[str]] = []
    for b in report.node_bounds:
        node_id, flow_id, *values = _node_row(b)
        rows.append(["node", node_id, flow_id, *values, "", "", ""])
    for b in report.path_bounds:
        flow_id, dd, jitter, ee, _ = _path_row(b)
        rows.append(["path", "", flow_id, "", "", "", dd, jitter, ee])
    return write_csv(CSV_HEADER, rows)


def _rounded(value: float) -> float | str:
    return format_value(value) if math.isinf(value) else float(format_value(value))


def render_json(report: BoundsReport) -> str:
    payload: dict[str, Any] = report.model_dump(mode="json", exclude={"node_bounds", "path_bounds"})
    payload["node_bounds"] = [
        {
            "node": b.node_id,
            "flow": b.flow_id,
            "Q_kb": _rounded(b.backlog),
            "D_ms": _rounded(b.delay),
            "e_mbps": _rounded(b.effective_bandwidth),
        }
        for b in report.node_bounds
    ]
    payload["path_bounds"] = [
        {
            "flow": b.flow_id,
            "DD_ms": _rounded(b.delay),
            "jitter_ms": _rounded(b.jitter),
            "ee_mbps": _rounded(b.effective_bandwidth),
            "fixed_delay_ms": _rounded(b.fixed_delay_sum),
        }
        for b in report.path_bounds
    ]
    return json.dumps(payload, indent=2) + "\n"


def render(report: BoundsReport, fmt: ReportFormat) -> str:
    if fmt is ReportFormat.CSV:
        return render_csv(report)
    if fmt is ReportFormat.JSON:
        return render_json(report)
    return render_table(report)
