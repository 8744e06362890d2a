"""End-to-end QoS bounds of a flow along a path of nodes.

The path service curve of a flow is the convolution of its residual curves and the
fixed delays between hops; for rate-latency residuals this is the rate-latency curve
with rate min R'_i and latency sum T'_i + sum d_i.

The multi-hop delay bound carries the entry node's latency T_1 in addition to the
path latency, which already contains T'_1:

    DD = T_1 + h_dev(entry envelope, path service curve)
"""

from __future__ import annotations

import math

import structlog

from wsncalc.bounds.models import EffectiveBandwidthMode, NodeBounds, PathBounds, PathScenario
from wsncalc.bounds.node_qos import effective_bandwidth, node_bounds_all
from wsncalc.calculus.curve import BurstDelayCurve, Curve, RateLatencyCurve
from wsncalc.calculus.minplus import convolve_all, h_dev
from wsncalc.errors import UnknownFlow
from wsncalc.scheduling.models import ResidualService
from wsncalc.scheduling.residual import residual_service
from wsncalc.traffic.models import FlowSpec
from wsncalc.traffic.regulators import dominant_bucket, flow_envelope

logger = structlog.get_logger()


def _entry_flow(path: PathScenario, flow_id: str) -> FlowSpec:
    flow = path.nodes[0].flow(flow_id)
    if flow is None:
        raise UnknownFlow(flow_id, "the path")
    return flow


def path_residuals(path: PathScenario, flow_id: str) -> list[ResidualService]:
    """Residual service of the flow at every hop, in path order.

    Raises:
        UnstableNode: if any hop fails its stability check.
    """
    _entry_flow(path, flow_id)
    return [residual_service(node, flow_id, path.convention, path.fractal) for node in path.nodes]


def path_service_curve(path: PathScenario, flow_id: str) -> RateLatencyCurve:
    """Closed-form path service curve: rate min R'_i, latency sum T'_i + sum d_i.

    Raises:
        UnstableNode: if any hop fails its stability check.
    """
    residuals = path_residuals(path, flow_id)
    return RateLatencyCurve(
        rate=min(r.effective_rate for r in residuals),
        latency=math.fsum(r.effective_latency for r in residuals) + path.fixed_delay_sum,
    )


def path_service_curve_convolved(path: PathScenario, flow_id: str) -> Curve:
    """Path service curve built by min-plus convolution of every hop and fixed delay."""
    curves: list[Curve] = []
    residuals = path_residuals(path, flow_id)
    for index, residual in enumerate(residuals):
        curves.append(residual.curve())
        if index < len(path.fixed_delays):
            curves.append(BurstDelayCurve(path.fixed_delays[index]).to_curve())
    return convolve_all(curves)


def path_delay_bound(path: PathScenario, flow_id: str, *, convolved: bool = False) -> float:
    """Multi-hop delay bound DD (ms).

    convolved=True derives the path service curve through the curve algebra instead of
    the closed form; both give the same value.

    Raises:
        UnstableNode: if any hop fails its stability check.
    """
    envelope = flow_envelope(_entry_flow(path, flow_id), path.fractal)
    if convolved:
        service = path_service_curve_convolved(path, flow_id)
    else:
        service = path_service_curve(path, flow_id).to_curve()
    return path.nodes[0].latency + h_dev(envelope, service).value


def path_jitter_bound(path: PathScenario, flow_id: str) -> float:
    """Multi-hop delay jitter bound: DD minus the sum of fixed delays (ms)."""
    return path_delay_bound(path, flow_id) - path.fixed_delay_sum


def path_effective_bandwidth_bound(
    path: PathScenario,
    flow_id: str,
    mode: EffectiveBandwidthMode | None = None,
    *,
    delay: float | None = None,
) -> float:
    """Multi-hop effective bandwidth (Mbps) of the flow under its delay bound DD.

    mode defaults to the scenario's ee_mode. A precomputed DD may be passed as delay.
    """
    flow = _entry_flow(path, flow_id)
    mode = mode or path.ee_mode
    dd = path_delay_bound(path, flow_id) if delay is None else delay
    if mode is EffectiveBandwidthMode.LITERAL:
        best = 0.0
        for mf in flow.micro_flows:
            rate, burst = dominant_bucket(mf, path.fractal)
            if dd > 0.0:
                ratio = burst / dd
            else:
                ratio = math.inf if burst > 0.0 else 0.0
            best = max(best, rate, ratio)
        return best
    return effective_bandwidth(flow_envelope(flow, path.fractal), dd)


def compute_path_bounds(path: PathScenario, flow_id: str) -> PathBounds:
    """DD, jitter and ee of one flow along the path.

    Raises:
        UnstableNode: if any hop fails its stability check.
    """
    dd = path_delay_bound(path, flow_id)
    fixed = path.fixed_delay_sum
    bounds = PathBounds(
        flow_id=flow_id,
        delay=dd,
        jitter=dd - fixed,
        effective_bandwidth=path_effective_bandwidth_bound(path, flow_id, delay=dd),
        fixed_delay_sum=fixed,
    )
    logger.debug("path_bounds_computed", flow_id=flow_id, hops=path.hop_count, delay=dd)
    return bounds


def path_bounds_all(path: PathScenario) -> list[PathBounds]:
    """PathBounds of every flow on the path, in entry order."""
    return [compute_path_bounds(path, fid) for fid in path.flow_ids]


def path_node_bounds(path: PathScenario) -> list[NodeBounds]:
    """Per-node (Q, D, e) of every flow at every hop, in path order."""
    bounds: list[NodeBounds] = []
    for node in path.nodes:
        bounds.extend(node_bounds_all(node, path.convention, path.fractal))
    return bounds
