"""Tests for wsncalc.bounds.node_qos — backlog, delay and effective bandwidth at one node."""

from __future__ import annotations

import math

import pytest

from tests.conftest import identical_nodes, make_flows
from wsncalc.bounds.node_qos import (
    compute_node_bounds,
    effective_bandwidth,
    node_backlog_at,
    node_backlog_bound,
    node_bounds_all,
    node_delay_bound,
    node_effective_bandwidth_bound,
)
from wsncalc.calculus.curve import Curve
from wsncalc.errors import UnknownFlow, UnstableNode
from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.traffic.models import (
    FlowSpec,
    MicroFlowSpec,
    TokenBucketPiece,
    TokenBucketRegulator,
)


def _node(rate: float) -> NodeSpec:
    return identical_nodes(1, rate, 1.0, make_flows())[0]


class TestReferenceNode:
    """Identical-node case (T=1 ms): published (Q, D, e) at R = 200 and R = 50."""

    @pytest.mark.parametrize(
        ("flow_id", "delay", "bandwidth"),
        [("A1", 10.314, 46.54), ("A2", 11.427, 61.26), ("A3", 8.910, 22.45)],
    )
    def test_r200(self, flow_id: str, delay: float, bandwidth: float) -> None:
        bounds = compute_node_bounds(_node(200.0), flow_id)
        assert bounds.delay == pytest.approx(delay, abs=1e-3)
        assert bounds.effective_bandwidth == pytest.approx(bandwidth, abs=1e-2)

    @pytest.mark.parametrize(
        ("flow_id", "delay", "bandwidth"),
        [("A1", 38.424, 12.49), ("A2", 43.039, 16.26), ("A3", 32.772, 6.10)],
    )
    def test_r50(self, flow_id: str, delay: float, bandwidth: float) -> None:
        bounds = compute_node_bounds(_node(50.0), flow_id)
        assert bounds.delay == pytest.approx(delay, abs=1e-3)
        assert bounds.effective_bandwidth == pytest.approx(bandwidth, abs=1e-2)

    def test_backlog_closed_form(self) -> None:
        # b + r T' with T' = 1 + 1380 / 200
        assert node_backlog_bound(_node(200.0), "A1").value == pytest.approx(489.638)
        assert node_backlog_bound(_node(200.0), "A2").value == pytest.approx(700.0 + 0.84 * 7.9)

    def test_delay_closed_form(self) -> None:
        assert node_delay_bound(_node(200.0), "A1").value == pytest.approx(7.9 + 480.0 / 198.86)

    def test_strict_is_tighter(self) -> None:
        node = _node(200.0)
        strict = compute_node_bounds(node, "A1", Convention.STRICT_EQ17)
        paper = compute_node_bounds(node, "A1", Convention.PAPER_NUMERIC)
        assert strict.delay < paper.delay
        assert strict.backlog < paper.backlog
        assert strict.delay == pytest.approx(5.5 + 480.0 / 198.86)

    def test_node_bounds_all_in_flow_order(self) -> None:
        bounds = node_bounds_all(_node(200.0))
        assert [b.flow_id for b in bounds] == ["A1", "A2", "A3"]
        assert bounds[0] == compute_node_bounds(_node(200.0), "A1")

    def test_effective_bandwidth_bound(self) -> None:
        assert node_effective_bandwidth_bound(_node(200.0), "A3") == pytest.approx(
            200.0 / (7.9 + 200.0 / 197.94)
        )


class TestMultiSegmentEnvelope:
    """A two-piece envelope is bounded exactly, tighter than its dominant bucket."""

    @pytest.fixture
    def node(self) -> NodeSpec:
        mf = MicroFlowSpec(
            id="m",
            regulator=TokenBucketRegulator(
                pieces=(
                    TokenBucketPiece(rate=2.0, burst=1.0),
                    TokenBucketPiece(rate=1.0, burst=3.0),
                )
            ),
        )
        flow = FlowSpec(id="F", micro_flows=(mf,))
        return NodeSpec(id="n", service_rate=10.0, latency=1.0, flows=(flow,))

    def test_bounds(self, node: NodeSpec) -> None:
        bounds = compute_node_bounds(node, "F", Convention.STRICT_EQ17)
        assert bounds.backlog == pytest.approx(3.0)
        assert bounds.delay == pytest.approx(1.1)
        assert bounds.delay < 1.0 + 3.0 / 10.0

    def test_paper_convention_charges_dominant_burst(self, node: NodeSpec) -> None:
        bounds = compute_node_bounds(node, "F", Convention.PAPER_NUMERIC)
        # residual latency 1 + 3 / 10; envelope reaches 1 + 2 * 1.3 = 3.6 < 3 + 1.3
        assert bounds.backlog == pytest.approx(3.6)


class TestBacklogAtTime:
    """Backlog bound at a finite evolution time."""

    def test_before_residual_latency(self) -> None:
        assert node_backlog_at(_node(200.0), "A1", 5.0) == pytest.approx(480.0 + 1.22 * 5.0)

    def test_after_residual_latency(self) -> None:
        expected = 480.0 + 1.22 * 10.0 - 198.86 * (10.0 - 7.9)
        assert node_backlog_at(_node(200.0), "A1", 10.0) == pytest.approx(expected)

    def test_clamped_at_zero(self) -> None:
        assert node_backlog_at(_node(200.0), "A1", 100.0) == 0.0

    def test_never_exceeds_bound(self) -> None:
        node = _node(200.0)
        bound = node_backlog_bound(node, "A2").value
        for i in range(60):
            assert node_backlog_at(node, "A2", 0.25 * i) <= bound + 1e-9

    def test_negative_time(self) -> None:
        with pytest.raises(ValueError, match="Evolution time"):
            node_backlog_at(_node(200.0), "A1", -1.0)


class TestEffectiveBandwidth:
    def test_affine(self) -> None:
        assert effective_bandwidth(Curve.affine(480.0, 1.22), 10.0) == pytest.approx(48.0)

    def test_rate_dominates_for_long_delay(self) -> None:
        assert effective_bandwidth(Curve.affine(1.0, 2.0), 100.0) == pytest.approx(2.0)

    def test_zero_delay_with_burst_is_infinite(self) -> None:
        assert effective_bandwidth(Curve.affine(1.0, 2.0), 0.0) == math.inf

    def test_zero_delay_without_burst(self) -> None:
        assert effective_bandwidth(Curve.affine(0.0, 2.0), 0.0) == pytest.approx(2.0)

    def test_serves_within_delay(self) -> None:
        envelope = Curve.affine(30.0, 0.5)
        rate = effective_bandwidth(envelope, 4.0)
        for i in range(100):
            t = 0.5 * i
            assert envelope(t) <= rate * (t + 4.0) + 1e-9


class TestUnstableAndUnknown:
    def test_backlog_and_delay_infinite(self, unstable_node: NodeSpec) -> None:
        assert not node_backlog_bound(unstable_node, "A1").finite
        assert not node_delay_bound(unstable_node, "A1").finite

    def test_effective_bandwidth_raises(self, unstable_node: NodeSpec) -> None:
        with pytest.raises(UnstableNode):
            node_effective_bandwidth_bound(unstable_node, "A1")

    def test_compute_raises(self, unstable_node: NodeSpec) -> None:
        with pytest.raises(UnstableNode):
            compute_node_bounds(unstable_node, "A1")

    def test_unknown_flow(self) -> None:
        with pytest.raises(UnknownFlow):
            node_backlog_bound(_node(200.0), "ZZ")
