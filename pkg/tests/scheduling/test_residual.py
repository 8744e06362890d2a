"""Tests for wsncalc.scheduling — stability and residual service curves."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from wsncalc.bounds.models import PathScenario
from wsncalc.bounds.node_qos import compute_node_bounds
from wsncalc.bounds.path_qos import compute_path_bounds
from wsncalc.errors import UnknownFlow, UnstableNode
from wsncalc.oracle.checks import random_corpus
from wsncalc.scenarios.builtin import builtin_document, builtin_names
from wsncalc.scenarios.loader import to_path_scenario
from wsncalc.scheduling.models import Convention, NodeSpec, ResidualService
from wsncalc.scheduling.residual import all_residuals, residual_service, stability_check
from wsncalc.traffic.models import FlowSpec, MicroFlowSpec


class TestConvention:
    """Parsing of convention names and CLI aliases."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("strict", Convention.STRICT_EQ17),
            ("paper", Convention.PAPER_NUMERIC),
            ("strict_eq17", Convention.STRICT_EQ17),
            (" PAPER_NUMERIC ", Convention.PAPER_NUMERIC),
        ],
    )
    def test_parse(self, text: str, expected: Convention) -> None:
        assert Convention.parse(text) is expected

    def test_parse_unknown(self) -> None:
        with pytest.raises(ValueError):
            Convention.parse("loose")


class TestNodeSpec:
    def test_duplicate_flow_ids(self, reference_flows: tuple[FlowSpec, ...]) -> None:
        with pytest.raises(ValidationError, match="Duplicate flow ids"):
            NodeSpec(id="n", service_rate=1.0, latency=0.0, flows=(reference_flows[0],) * 2)

    def test_rate_must_be_positive(self) -> None:
        with pytest.raises(ValidationError):
            NodeSpec(id="n", service_rate=0.0, latency=0.0)

    def test_service_curve(self) -> None:
        node = NodeSpec(id="n", service_rate=5.0, latency=2.0)
        assert node.service_curve()(4.0) == pytest.approx(10.0)

    def test_flow_lookup(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        assert heterogeneous_nodes[0].flow("A2") is not None
        assert heterogeneous_nodes[0].flow("ZZ") is None


class TestStability:
    def test_stable(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        report = stability_check(heterogeneous_nodes[0])
        assert report.ok
        assert report.arrival_rate == pytest.approx(2.36)
        assert report.headroom == pytest.approx(540.0 - 2.36)

    def test_unstable_reports_without_raising(self, unstable_node: NodeSpec) -> None:
        report = stability_check(unstable_node)
        assert not report.ok
        assert report.headroom < 0.0

    def test_rate_equal_to_service_is_unstable(self) -> None:
        flow = FlowSpec(id="F", micro_flows=(MicroFlowSpec.token_bucket("m", 2.0, 1.0),))
        node = NodeSpec(id="edge", service_rate=2.0, latency=0.0, flows=(flow,))
        assert not stability_check(node).ok


class TestResidualService:
    """Residual rate-latency service of the reference flows at the first reference node."""

    def test_paper_numeric_charges_all_bursts(
        self, heterogeneous_nodes: tuple[NodeSpec, ...]
    ) -> None:
        residual = residual_service(heterogeneous_nodes[0], "A1", Convention.PAPER_NUMERIC)
        assert residual.effective_rate == pytest.approx(540.0 - 1.14)
        assert residual.effective_latency == pytest.approx(5.8 + 1380.0 / 540.0)
        assert residual.theta == pytest.approx(5.8 + 900.0 / 540.0)

    def test_strict_charges_cross_bursts(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        residual = residual_service(heterogeneous_nodes[0], "A1", Convention.STRICT_EQ17)
        assert residual.effective_rate == pytest.approx(538.86)
        assert residual.effective_latency == pytest.approx(5.8 + 900.0 / 540.0)
        assert residual.theta == pytest.approx(residual.effective_latency)

    def test_paper_never_tighter(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        for node in heterogeneous_nodes:
            strict = all_residuals(node, Convention.STRICT_EQ17)
            paper = all_residuals(node, Convention.PAPER_NUMERIC)
            for fid in strict:
                assert paper[fid].effective_latency >= strict[fid].effective_latency
                assert paper[fid].effective_rate == pytest.approx(strict[fid].effective_rate)

    def test_reference_latencies(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        expected = (8.3556, 10.5059, 5.5915, 9.415, 6.4857)
        for node, latency in zip(heterogeneous_nodes, expected, strict=True):
            assert residual_service(node, "A1").effective_latency == pytest.approx(
                latency, abs=1e-4
            )

    def test_all_residuals_matches_single(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        node = heterogeneous_nodes[3]
        every = all_residuals(node, Convention.STRICT_EQ17)
        for fid in ("A1", "A2", "A3"):
            assert every[fid] == residual_service(node, fid, Convention.STRICT_EQ17)

    def test_single_flow_keeps_full_rate(self, single_flow_node: NodeSpec) -> None:
        residual = residual_service(single_flow_node, "F", Convention.STRICT_EQ17)
        assert residual == ResidualService("F", 10.0, 0.0, 0.0)

    def test_curve(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        residual = residual_service(heterogeneous_nodes[0], "A3")
        curve = residual.curve()
        assert curve(residual.effective_latency) == 0.0
        assert residual.as_rate_latency().rate == residual.effective_rate

    def test_unknown_flow(self, heterogeneous_nodes: tuple[NodeSpec, ...]) -> None:
        with pytest.raises(UnknownFlow, match="'ZZ' is not present at node 'n1'"):
            residual_service(heterogeneous_nodes[0], "ZZ")

    def test_unstable_raises(self, unstable_node: NodeSpec) -> None:
        with pytest.raises(UnstableNode) as exc_info:
            all_residuals(unstable_node)
        assert exc_info.value.node_id == "slow"
        assert exc_info.value.arrival_rate == pytest.approx(2.36)


def _reordered(node: NodeSpec) -> NodeSpec:
    flows = tuple(
        FlowSpec(id=flow.id, micro_flows=tuple(reversed(flow.micro_flows)))
        for flow in reversed(node.flows)
    )
    return NodeSpec(id=node.id, service_rate=node.service_rate, latency=node.latency, flows=flows)


CORPUS = [
    (name, to_path_scenario(builtin_document(name))) for name in builtin_names()
] + random_corpus(50, 20110101)


class TestConventionInvariants:
    """Properties that hold for both conventions on every node of the corpus."""

    @pytest.mark.parametrize("conv", list(Convention))
    def test_order_of_flows_and_micro_flows(
        self, heterogeneous_nodes: tuple[NodeSpec, ...], conv: Convention
    ) -> None:
        for node in heterogeneous_nodes:
            original = all_residuals(node, conv)
            reordered = all_residuals(_reordered(node), conv)
            assert set(reordered) == set(original)
            for fid, residual in original.items():
                assert reordered[fid].effective_rate == pytest.approx(residual.effective_rate)
                assert reordered[fid].effective_latency == pytest.approx(
                    residual.effective_latency
                )

    @pytest.mark.parametrize(("name", "path"), CORPUS, ids=[name for name, _ in CORPUS])
    def test_strict_never_exceeds_paper(self, name: str, path: PathScenario) -> None:
        strict = path.model_copy(update={"convention": Convention.STRICT_EQ17})
        paper = path.model_copy(update={"convention": Convention.PAPER_NUMERIC})
        for flow_id in path.flow_ids:
            for node in path.nodes:
                low = compute_node_bounds(node, flow_id, Convention.STRICT_EQ17, path.fractal)
                high = compute_node_bounds(node, flow_id, Convention.PAPER_NUMERIC, path.fractal)
                assert low.backlog <= high.backlog + 1e-9, (name, node.id, flow_id)
                assert low.delay <= high.delay + 1e-9, (name, node.id, flow_id)
            assert (
                compute_path_bounds(strict, flow_id).delay
                <= compute_path_bounds(paper, flow_id).delay + 1e-9
            ), (name, flow_id)
