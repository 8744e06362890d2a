"""Node stability and residual (leftover) service curves.

Every flow at a node owns a virtual buffer; the node's rate-latency service is
shared, and the service left for flow i is the rate-latency curve

    R' = R - (sum of cross-traffic rates)
    T' = T + B / R

where B is the cross-traffic burst sum (STRICT_EQ17) or the burst sum of all flows
at the node (PAPER_NUMERIC). Rates and bursts of a micro-flow come from its dominant
token bucket.
"""

from __future__ import annotations

import math

import structlog

from wsncalc.errors import UnknownFlow, UnstableNode
from wsncalc.scheduling.models import Convention, NodeSpec, ResidualService, StabilityReport
from wsncalc.traffic.models import DEFAULT_FRACTAL, FractalConstants
from wsncalc.traffic.regulators import flow_burst, flow_rate

logger = structlog.get_logger()


def stability_check(
    node: NodeSpec, consts: FractalConstants = DEFAULT_FRACTAL
) -> StabilityReport:
    """Compare the sum of all micro-flow rates at the node with its service rate.

    Returns a report rather than raising; callers decide how to surface a violation.
    """
    total = math.fsum(flow_rate(f, consts) for f in node.flows)
    report = StabilityReport(node_id=node.id, arrival_rate=total, service_rate=node.service_rate)
    if not report.ok:
        logger.warning(
            "node_unstable",
            node_id=node.id,
            arrival_rate=total,
            service_rate=node.service_rate,
        )
    return report


def residual_service(
    node: NodeSpec,
    flow_id: str,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> ResidualService:
    """Residual rate-latency service offered to one flow at a node.

    Raises:
        UnknownFlow: if the flow does not traverse the node.
        UnstableNode: if the node fails its stability check.
    """
    if node.flow(flow_id) is None:
        raise UnknownFlow(flow_id, f"node '{node.id}'")
    return all_residuals(node, conv, consts)[flow_id]


def all_residuals(
    node: NodeSpec,
    conv: Convention = Convention.PAPER_NUMERIC,
    consts: FractalConstants = DEFAULT_FRACTAL,
) -> dict[str, ResidualService]:
    """Residual services of every flow at the node.

    Each micro-flow is visited once to form per-flow sums; every residual then
    subtracts its own sums from the node totals.

    Raises:
        UnstableNode: if the node fails its stability check.
    """
    rates = {f.id: flow_rate(f, consts) for f in node.flows}
    bursts = {f.id: flow_burst(f, consts) for f in node.flows}
    total_rate = math.fsum(rates.values())
    total_burst = math.fsum(bursts.values())
    if not total_rate < node.service_rate:
        stability_check(node, consts)
        raise UnstableNode(node.id, total_rate, node.service_rate)

    residuals: dict[str, ResidualService] = {}
    for fid in rates:
        cross_rate = total_rate - rates[fid]
        cross_burst = total_burst - bursts[fid]
        charged = cross_burst if conv is Convention.STRICT_EQ17 else total_burst
        residual = ResidualService(
            flow_id=fid,
            effective_rate=node.service_rate - cross_rate,
            effective_latency=node.latency + charged / node.service_rate,
            theta=node.latency + cross_burst / node.service_rate,
        )
        residuals[fid] = residual
        logger.debug(
            "residual_computed",
            node_id=node.id,
            flow_id=fid,
            convention=conv.value,
            effective_rate=residual.effective_rate,
            effective_latency=residual.effective_latency,
        )
    return residuals
