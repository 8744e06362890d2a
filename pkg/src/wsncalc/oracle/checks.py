"""Validation of closed-form bounds against greedy-source simulations.

Every node of a scenario is simulated per flow with its residual service curve, and
every flow is simulated end to end with its path service curve. A check fails when
the simulated worst case exceeds the closed-form bound by more than one grid cell.
bound_scale multiplies every closed-form value before comparison; values below 1
turn the suite into a self-test that must fail.
"""

from __future__ import annotations

import enum
import math
import random
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import structlog

from wsncalc.bounds.models import PathScenario
from wsncalc.bounds.node_qos import effective_bandwidth
from wsncalc.bounds.path_qos import path_delay_bound, path_service_curve
from wsncalc.calculus.curve import Curve
from wsncalc.calculus.minplus import h_dev, v_dev
from wsncalc.errors import HorizonTooShort
from wsncalc.oracle.grid import discretize
from wsncalc.oracle.simulation import greedy_trace, simulate_server
from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.scheduling.residual import all_residuals
from wsncalc.traffic.models import FlowSpec, MicroFlowSpec, TokenBucketPiece, TokenBucketRegulator
from wsncalc.traffic.regulators import flow_envelope, flow_rate

logger = structlog.get_logger()


class ValidationStatus(str, enum.Enum):
    """Outcome of one bound check."""

    PASS = "PASS"
    FAIL = "FAIL"


class BoundKind(str, enum.Enum):
    BACKLOG = "backlog"
    DELAY = "delay"
    EFFECTIVE_BANDWIDTH = "effective_bandwidth"
    PATH_DELAY = "path_delay"


@dataclass(frozen=True)
class BoundCheck:
    """One closed-form bound compared with its simulated worst case.

    For effective bandwidth the compared quantities are delays: the flow's delay bound
    and the delay observed at a constant-rate server of that bandwidth.
    """

    scenario: str
    subject: str
    flow_id: str
    kind: BoundKind
    closed_form: float
    simulated: float
    tolerance: float
    status: ValidationStatus

    @property
    def margin(self) -> float:
        return self.closed_form - self.simulated

    @property
    def passed(self) -> bool:
        return self.status is ValidationStatus.PASS

    @property
    def tight(self) -> bool:
        """Simulation reaches the bound within the tolerance."""
        return abs(self.margin) <= self.tolerance


@dataclass(frozen=True)
class ValidationReport:
    """All checks of one scenario at one grid resolution."""

    scenario: str
    grid_step: float
    horizon_factor: float
    checks: tuple[BoundCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def max_margin(self) -> float:
        """Largest absolute gap between bound and simulation over all tight-able checks."""
        margins = [
            abs(c.margin) for c in self.checks if c.kind is not BoundKind.EFFECTIVE_BANDWIDTH
        ]
        return max(margins, default=0.0)


def _judge(
    scenario: str,
    subject: str,
    flow_id: str,
    kind: BoundKind,
    closed_form: float,
    simulated: float,
    tolerance: float,
) -> BoundCheck:
    exceeded = simulated > closed_form + tolerance
    status = ValidationStatus.FAIL if exceeded else ValidationStatus.PASS
    check = BoundCheck(scenario, subject, flow_id, kind, closed_form, simulated, tolerance, status)
    if not check.passed:
        logger.warning(
            "validation_check_failed",
            scenario=scenario,
            subject=subject,
            flow_id=flow_id,
            bound=kind.value,
            closed_form=closed_form,
            simulated=simulated,
            tolerance=tolerance,
        )
    return check


def _horizon(factor: float, step: float, *extents: float) -> float:
    return factor * max(step, *extents)


def _max_slope(curve: Curve) -> float:
    return max(seg.slope for seg in curve.segments)


def _check_node(
    scenario: str,
    node: NodeSpec,
    flow: FlowSpec,
    service: Curve,
    service_rate: float,
    path: PathScenario,
    grid_step: float,
    horizon_factor: float,
    bound_scale: float,
) -> list[BoundCheck]:
    envelope = flow_envelope(flow, path.fractal)
    backlog = v_dev(envelope, service).value
    delay = h_dev(envelope, service).value
    extent = _horizon(
        horizon_factor, grid_step, delay, service.breakpoints[-1], envelope.breakpoints[-1]
    )
    trace = greedy_trace(envelope, grid_step, extent)
    outcome = simulate_server(trace, discretize(service, grid_step, extent))

    slope = _max_slope(envelope)
    backlog_tol = grid_step * max(slope, service_rate) + 1e-9 * max(1.0, backlog)
    delay_tol = grid_step * max(1.0, slope / service_rate) + 1e-9 * max(1.0, delay)
    subject = f"node {node.id}"
    checks = [
        _judge(scenario, subject, flow.id, BoundKind.BACKLOG,
               backlog * bound_scale, outcome.backlog_max, backlog_tol),
        _judge(scenario, subject, flow.id, BoundKind.DELAY,
               delay * bound_scale, outcome.vdelay_max, delay_tol),
    ]

    bandwidth = effective_bandwidth(envelope, delay) * bound_scale
    if math.isfinite(bandwidth) and bandwidth > 0.0:
        constant_rate = Curve.rate_latency(bandwidth, 0.0)
        rate_outcome = simulate_server(trace, discretize(constant_rate, grid_step, extent))
        rate_tol = grid_step * max(1.0, slope / bandwidth) + 1e-9 * max(1.0, delay)
        checks.append(
            _judge(scenario, subject, flow.id, BoundKind.EFFECTIVE_BANDWIDTH,
                   delay, rate_outcome.vdelay_max, rate_tol)
        )
    return checks


def _check_path(
    scenario: str,
    path: PathScenario,
    flow: FlowSpec,
    grid_step: float,
    horizon_factor: float,
    bound_scale: float,
) -> BoundCheck:
    envelope = flow_envelope(flow, path.fractal)
    service = path_service_curve(path, flow.id)
    entry_latency = path.nodes[0].latency
    bound = path_delay_bound(path, flow.id)
    extent = _horizon(horizon_factor, grid_step, bound - entry_latency, envelope.breakpoints[-1])
    trace = greedy_trace(envelope, grid_step, extent)
    outcome = simulate_server(trace, discretize(service.to_curve(), grid_step, extent))
    slope = _max_slope(envelope)
    tolerance = grid_step * max(1.0, slope / service.rate) + 1e-9 * max(1.0, bound)
    return _judge(scenario, "path", flow.id, BoundKind.PATH_DELAY,
                  bound * bound_scale, entry_latency + outcome.vdelay_max, tolerance)


def validate_scenario(
    path: PathScenario,
    *,
    name: str = "scenario",
    grid_step: float = 0.05,
    horizon_factor: float = 4.0,
    bound_scale: float = 1.0,
) -> ValidationReport:
    """Run every node and path check of a scenario.

    Raises:
        UnstableNode: if any node fails its stability check.
        HorizonTooShort: if a worst case is not resolved; carries a larger factor to try.
    """
    checks: list[BoundCheck] = []
    try:
        for node in path.nodes:
            residuals = all_residuals(node, path.convention, path.fractal)
            for flow in node.flows:
                residual = residuals[flow.id]
                checks.extend(
                    _check_node(name, node, flow, residual.curve(), residual.effective_rate,
                                path, grid_step, horizon_factor, bound_scale)
                )
        for flow in path.flows:
            checks.append(_check_path(name, path, flow, grid_step, horizon_factor, bound_scale))
    except HorizonTooShort as exc:
        raise HorizonTooShort(f"{name}: {exc}", suggested_factor=horizon_factor * 2.0) from exc

    report = ValidationReport(name, grid_step, horizon_factor, tuple(checks))
    logger.info(
        "scenario_validated",
        scenario=name,
        checks=len(checks),
        failures=len(report.failures),
        grid_step=grid_step,
    )
    return report


def validate_corpus(
    scenarios: Sequence[tuple[str, PathScenario]],
    *,
    grid_step: float = 0.05,
    horizon_factor: float = 4.0,
    bound_scale: float = 1.0,
    max_workers: int = 4,
) -> list[ValidationReport]:
    """Validate several scenarios in parallel; reports keep the input order."""

    def run(item: tuple[str, PathScenario]) -> ValidationReport:
        name, path = item
        return validate_scenario(
            path, name=name, grid_step=grid_step,
            horizon_factor=horizon_factor, bound_scale=bound_scale,
        )

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(run, scenarios))


def margin_convergence(
    path: PathScenario,
    *,
    name: str = "scenario",
    grid_step: float = 0.05,
    horizon_factor: float = 4.0,
    levels: int = 3,
) -> list[tuple[float, float]]:
    """(step, largest |bound - simulated|) for grid_step, grid_step / 2, ... over levels."""
    rows: list[tuple[float, float]] = []
    step = grid_step
    for _ in range(levels):
        report = validate_scenario(path, name=name, grid_step=step, horizon_factor=horizon_factor)
        rows.append((step, report.max_margin))
        step /= 2.0
    return rows


def random_scenario(rng: random.Random) -> PathScenario:
    """A stable random path: 1-3 nodes, 1-3 flows of 1-2 micro-flows, some two-piece envelopes."""
    flows: list[FlowSpec] = []
    for f in range(rng.randint(1, 3)):
        micro_flows = []
        for m in range(rng.randint(1, 2)):
            rate = rng.uniform(0.1, 2.0)
            burst = rng.uniform(0.0, 200.0)
            pieces = [TokenBucketPiece(rate=rate, burst=burst)]
            if rng.random() < 0.3:
                pieces.insert(0, TokenBucketPiece(rate=rate * rng.uniform(2.0, 5.0),
                                                  burst=burst * rng.uniform(0.0, 0.5)))
            micro_flows.append(
                MicroFlowSpec(id=f"m{m + 1}", regulator=TokenBucketRegulator(pieces=tuple(pieces)))
            )
        flows.append(FlowSpec(id=f"F{f + 1}", micro_flows=tuple(micro_flows)))

    total_rate = math.fsum(flow_rate(fl) for fl in flows)
    count = rng.randint(1, 3)
    nodes = tuple(
        NodeSpec(
            id=f"n{i + 1}",
            service_rate=max(rng.uniform(50.0, 200.0), 2.0 * total_rate),
            latency=rng.uniform(0.0, 5.0),
            flows=tuple(flows),
        )
        for i in range(count)
    )
    return PathScenario(
        nodes=nodes,
        fixed_delays=tuple(rng.uniform(0.0, 3.0) for _ in range(count - 1)),
        convention=rng.choice(list(Convention)),
    )


def random_corpus(count: int, seed: int) -> list[tuple[str, PathScenario]]:
    """Named random scenarios, identical for identical (count, seed)."""
    rng = random.Random(seed)
    return [(f"random_{i:03d}", random_scenario(rng)) for i in range(count)]
