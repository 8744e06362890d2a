"""Per-node QoS bounds of a flow served by its residual rate-latency curve.

Functions:
    node_backlog_bound: Q = v_dev(flow envelope, residual curve)
    node_delay_bound: D = h_dev(flow envelope, residual curve)
    node_effective_bandwidth_bound: e = sup alpha(t) / (t + D)
    node_backlog_at: alpha(t) - beta'(t) at a finite evolution time
    compute_node_bounds / node_bounds_all: the (Q, D, e) triple(s) as NodeBounds

For a single token bucket (r, b) and residual (R', T') these reduce to
Q = b + r T', D = T' + b / R' and e = max(r, b / D).
"""

from __future__ import annotations

import math

import structlog

from wsncalc.bounds.models import NodeBounds
from wsncalc.calculus.curve import TOLERANCE, Curve, Deviation
from wsncalc.calculus.minplus import h_dev, v_dev
from wsncalc.errors import UnknownFlow, UnstableNode
from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.scheduling.residual import all_residuals, residual_service, stability_check
from wsncalc.traffic.models import DEFAULT_FRACTAL, FlowSpec, FractalConstants
from wsncalc.traffic.regulators import flow_envelope

logger = structlog.get_logger()


def effective_bandwidth(envelope: Curve, delay: float) -> float:
    """sup over t >= 0 of envelope(t) / (t + delay).

    The ratio is monotone on every affine segment, so the supremum is reached at a
    breakpoint (value or left limit) or as t grows without bound (the final slope).
    A positive burst with zero delay needs unbounded bandwidth.
    """
    if delay <= 0.0 and envelope.eval(0.0) > TOLERANCE:
        return math.inf
    best = envelope.final_slope
    if delay <= 0.0:
        best = max(best, envelope.segments[0].slope)
    for t in envelope.breakpoints:
        horizon = t + delay
        if horizon <= 0.0:
            continue
        best = max(best, envelope.eval(t) / horizon)
        if t > 0.0:
            best = max(best, envelope.left_limit(t) / horizon)
    return best


def _flow(node: NodeSpec, flow_id: str) -> FlowSpec:
    flow = node.flow(flow_id)
    if flow is None:
        raise UnknownFlow(flow_id, f"node '{node.id}'")
    return flow


def node_backlog_bound(
    node: NodeSpec,
    flow_id: str,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> Deviation:
    """Upper bound on the flow's buffer queue length (Kb); infinite if the node is unstable."""
    flow = _flow(node, flow_id)
    if not stability_check(node, consts).ok:
        return Deviation.infinite()
    residual = residual_service(node, flow_id, conv, consts)
    return v_dev(flow_envelope(flow, consts), residual.curve())


def node_delay_bound(
    node: NodeSpec,
    flow_id: str,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> Deviation:
    """Upper bound on the flow's buffer queue delay (ms); infinite if the node is unstable."""
    flow = _flow(node, flow_id)
    if not stability_check(node, consts).ok:
        return Deviation.infinite()
    residual = residual_service(node, flow_id, conv, consts)
    return h_dev(flow_envelope(flow, consts), residual.curve())


def node_effective_bandwidth_bound(
    node: NodeSpec,
    flow_id: str,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> float:
    """Smallest constant rate (Mbps) that serves the flow within its delay bound.

    Raises:
        UnstableNode: if the node fails its stability check.
        UnknownFlow: if the flow does not traverse the node.
    """
    flow = _flow(node, flow_id)
    delay = node_delay_bound(node, flow_id, conv, consts)
    if not delay.finite:
        report = stability_check(node, consts)
        raise UnstableNode(node.id, report.arrival_rate, report.service_rate)
    return effective_bandwidth(flow_envelope(flow, consts), delay.value)


def node_backlog_at(
    node: NodeSpec,
    flow_id: str,
    t: float,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> float:
    """Backlog bound at evolution time t: envelope(t) - residual(t), at least 0.

    Raises:
        UnstableNode: if the node fails its stability check.
        ValueError: if t is negative.
    """
    if t < 0.0:
        raise ValueError(f"Evolution time must be >= 0, got {t}")
    flow = _flow(node, flow_id)
    residual = residual_service(node, flow_id, conv, consts)
    return max(flow_envelope(flow, consts).eval(t) - residual.curve().eval(t), 0.0)


def compute_node_bounds(
    node: NodeSpec,
    flow_id: str,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> NodeBounds:
    """(Q, D, e) of one flow at one node.

    Raises:
        UnstableNode: if the node fails its stability check.
    """
    flow = _flow(node, flow_id)
    residuals = all_residuals(node, conv, consts)
    return _bounds_of(node.id, flow, residuals[flow_id].curve(), consts)


def _bounds_of(
    node_id: str, flow: FlowSpec, service: Curve, consts: FractalConstants
) -> NodeBounds:
    envelope = flow_envelope(flow, consts)
    backlog = v_dev(envelope, service)
    delay = h_dev(envelope, service)
    bandwidth = effective_bandwidth(envelope, delay.value) if delay.finite else math.inf
    return NodeBounds(
        node_id=node_id,
        flow_id=flow.id,
        backlog=backlog.value,
        delay=delay.value,
        effective_bandwidth=bandwidth,
    )


def node_bounds_all(
    node: NodeSpec,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> list[NodeBounds]:
    """NodeBounds of every flow at the node, in the node's flow order.

    Raises:
        UnstableNode: if the node fails its stability check.
    """
    residuals = all_residuals(node, conv, consts)
    bounds = [_bounds_of(node.id, f, residuals[f.id].curve(), consts) for f in node.flows]
    logger.debug("node_bounds_computed", node_id=node.id, flows=len(bounds))
    return bounds
