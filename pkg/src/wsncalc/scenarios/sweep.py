"""Parameter sweeps over a path scenario, emitted as CSV rows.

Parameters (canonical units):
    R  service rate of every node (Mbps)
    T  latency of every node (ms)
    d  every fixed delay (ms)
    N  hop count: the first node and its outgoing delay replicated N times; a
       trailing delay to the sink is kept
    H  Hurst parameter of every fractal micro-flow
    t  evolution time of the node backlog (ms); Q is then the backlog at t

With at_time set, Q is the backlog at that evolution time for any parameter.

Q, D and e are taken at the first node of the path. Unstable points yield
infinite values rather than aborting the sweep.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import structlog
from pydantic import ValidationError

from wsncalc.bounds.models import PathScenario
from wsncalc.bounds.node_qos import compute_node_bounds, node_backlog_at
from wsncalc.bounds.path_qos import compute_path_bounds
from wsncalc.errors import SweepRangeError, UnstableNode
from wsncalc.scenarios.report import format_value, write_csv
from wsncalc.scheduling.models import NodeSpec
from wsncalc.traffic.models import FlowSpec, FractalRegulator, MicroFlowSpec, check_hurst

logger = structlog.get_logger()

# points closer than this fraction of a step to the end of the range are included
RANGE_SLACK = 1e-9


class SweepParam(str, enum.Enum):
    R = "R"
    T = "T"
    D = "d"
    N = "N"
    H = "H"
    TIME = "t"


@dataclass(frozen=True)
class SweepRow:
    """Bounds of one flow at one parameter value."""

    value: float
    flow_id: str
    backlog: float
    delay: float
    effective_bandwidth: float
    path_delay: float
    jitter: float
    path_effective_bandwidth: float


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    """start, start + step, ... up to stop inclusive.

    Raises:
        SweepRangeError: for a non-positive step, an empty range or non-finite bounds.
    """
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise SweepRangeError(f"Sweep bounds must be finite: {start}, {stop}, {step}")
    if step <= 0.0:
        raise SweepRangeError(f"Sweep step must be > 0, got {step}")
    if stop < start:
        raise SweepRangeError(f"Empty sweep range: from {start} to {stop}")
    count = math.floor((stop - start) / step + RANGE_SLACK) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _rebuild_nodes(path: PathScenario, **updates: float) -> tuple[NodeSpec, ...]:
    return tuple(
        NodeSpec(
            id=node.id,
            service_rate=updates.get("service_rate", node.service_rate),
            latency=updates.get("latency", node.latency),
            flows=node.flows,
        )
        for node in path.nodes
    )


def _replace(
    path: PathScenario,
    *,
    nodes: tuple[NodeSpec, ...] | None = None,
    fixed_delays: tuple[float, ...] | None = None,
) -> PathScenario:
    return PathScenario(
        nodes=path.nodes if nodes is None else nodes,
        fixed_delays=path.fixed_delays if fixed_delays is None else fixed_delays,
        convention=path.convention,
        ee_mode=path.ee_mode,
        fractal=path.fractal,
    )


def _with_hurst(flow: FlowSpec, hurst: float) -> FlowSpec:
    micro_flows = []
    for mf in flow.micro_flows:
        regulator = mf.regulator
        if isinstance(regulator, FractalRegulator):
            mf = MicroFlowSpec(
                id=mf.id,
                regulator=FractalRegulator(
                    mean=regulator.mean, std_dev=regulator.std_dev, hurst=hurst
                ),
            )
        micro_flows.append(mf)
    return FlowSpec(id=flow.id, micro_flows=tuple(micro_flows))


def _has_fractal(path: PathScenario) -> bool:
    return any(
        isinstance(mf.regulator, FractalRegulator)
        for flow in path.flows
        for mf in flow.micro_flows
    )


def apply_param(path: PathScenario, param: SweepParam, value: float) -> PathScenario:
    """The scenario with one parameter set to value (t leaves the scenario unchanged).

    Raises:
        SweepRangeError: if the value is not valid for the parameter.
        HurstOutOfRange: for a Hurst value outside (0.5, 1).
    """
    try:
        if param is SweepParam.R:
            return _replace(path, nodes=_rebuild_nodes(path, service_rate=value))
        if param is SweepParam.T:
            return _replace(path, nodes=_rebuild_nodes(path, latency=value))
        if param is SweepParam.D:
            if not path.fixed_delays:
                raise SweepRangeError("d applies only to paths with fixed delays")
            return _replace(path, fixed_delays=tuple(value for _ in path.fixed_delays))
        if param is SweepParam.N:
            if value != int(value) or value < 1:
                raise SweepRangeError(f"N must be a positive integer, got {value}")
            hops = int(value)
            first = path.nodes[0]
            delay = path.fixed_delays[0] if path.fixed_delays else 0.0
            nodes = tuple(
                NodeSpec(id=f"{first.id}_{i + 1}", service_rate=first.service_rate,
                         latency=first.latency, flows=first.flows)
                for i in range(hops)
            )
            delays = (delay,) * (hops - 1)
            if len(path.fixed_delays) == len(path.nodes):
                # keep the hop to the sink
                delays += (path.fixed_delays[-1],)
            return _replace(path, nodes=nodes, fixed_delays=delays)
        if param is SweepParam.H:
            check_hurst(value)
            flows = {f.id: _with_hurst(f, value) for f in path.nodes[0].flows}
            nodes = tuple(
                NodeSpec(id=node.id, service_rate=node.service_rate, latency=node.latency,
                         flows=tuple(flows.get(f.id, f) for f in node.flows))
                for node in path.nodes
            )
            return _replace(path, nodes=nodes)
        if value < 0.0:
            raise SweepRangeError(f"Evolution time must be >= 0, got {value}")
        return path
    except ValidationError as exc:
        raise SweepRangeError(f"{param.value}={value}: {exc.errors()[0]['msg']}") from exc


def _evaluate(
    path: PathScenario, param: SweepParam, value: float, at_time: float | None
) -> list[SweepRow]:
    scenario = apply_param(path, param, value)
    node = scenario.nodes[0]
    rows: list[SweepRow] = []
    for flow_id in scenario.flow_ids:
        try:
            node_bounds = compute_node_bounds(node, flow_id, scenario.convention, scenario.fractal)
            path_bounds = compute_path_bounds(scenario, flow_id)
        except UnstableNode as exc:
            logger.warning(
                "sweep_point_unstable", param=param.value, value=value, node_id=exc.node_id
            )
            rows.append(SweepRow(value, flow_id, *([math.inf] * 6)))
            continue
        backlog = node_bounds.backlog
        evolution = value if param is SweepParam.TIME else at_time
        if evolution is not None:
            backlog = node_backlog_at(
                node, flow_id, evolution, scenario.convention, scenario.fractal
            )
        rows.append(
            SweepRow(
                value=value,
                flow_id=flow_id,
                backlog=backlog,
                delay=node_bounds.delay,
                effective_bandwidth=node_bounds.effective_bandwidth,
                path_delay=path_bounds.delay,
                jitter=path_bounds.jitter,
                path_effective_bandwidth=path_bounds.effective_bandwidth,
            )
        )
    logger.debug("sweep_point", param=param.value, value=value, flows=len(rows))
    return rows


def sweep(
    path: PathScenario,
    param: SweepParam,
    start: float,
    stop: float,
    step: float,
    *,
    max_workers: int = 4,
    at_time: float | None = None,
) -> list[SweepRow]:
    """Evaluate every parameter value; rows sorted by value, then flow id.

    Raises:
        SweepRangeError: for an invalid range, H on a scenario without fractal flows,
            or d on a path without fixed delays.
        HurstOutOfRange: for Hurst values outside (0.5, 1).
    """
    values = sweep_values(start, stop, step)
    if param is SweepParam.H:
        if not _has_fractal(path):
            raise SweepRangeError("H applies only to scenarios with fractal micro-flows")
        for value in values:
            check_hurst(value)
    if param is SweepParam.D and not path.fixed_delays:
        raise SweepRangeError("d applies only to paths with fixed delays")
    if at_time is not None and at_time < 0.0:
        raise SweepRangeError(f"Evolution time must be >= 0, got {at_time}")

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda v: _evaluate(path, param, v, at_time), values))
    rows = [row for batch in results for row in batch]
    return sorted(rows, key=lambda r: (r.value, r.flow_id))


def render_sweep_csv(param: SweepParam, rows: list[SweepRow]) -> str:
    header = (param.value, "flow", "Q_kb", "D_ms", "e_mbps", "DD_ms", "jitter_ms", "ee_mbps")
    body = [
        [
            format(row.value, "g"),
            row.flow_id,
            *(
                format_value(v)
                for v in (
                    row.backlog,
                    row.delay,
                    row.effective_bandwidth,
                    row.path_delay,
                    row.jitter,
                    row.path_effective_bandwidth,
                )
            ),
        ]
        for row in rows
    ]
    return write_csv(header, body)
