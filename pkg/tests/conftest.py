"""Shared test fixtures for the wsncalc test suite.

Provides the three reference flows (rates converted to Mbps), the five heterogeneous
reference nodes, and path scenarios built from them.
"""

from pathlib import Path

import pytest

from wsncalc.bounds.models import PathScenario
from wsncalc.scenarios.builtin import REFERENCE_FLOWS, HETEROGENEOUS_DELAYS, HETEROGENEOUS_NODES
from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.traffic.models import FlowSpec, MicroFlowSpec

TESTS_DIR = Path(__file__).parent
PROJECT_ROOT = TESTS_DIR.parent
SCENARIOS_DIR = PROJECT_ROOT / "scenarios"


def make_flows() -> tuple[FlowSpec, ...]:
    """A1, A2, A3 with micro-flow rates in Mbps and bursts in Kb."""
    return tuple(
        FlowSpec(
            id=fid,
            micro_flows=tuple(
                MicroFlowSpec.token_bucket(f"{fid.lower()}_{j + 1}", rate / 1000.0, burst)
                for j, (rate, burst) in enumerate(pieces)
            ),
        )
        for fid, pieces in REFERENCE_FLOWS
    )


def identical_nodes(
    hops: int, service_rate: float, latency: float, flows: tuple[FlowSpec, ...]
) -> tuple[NodeSpec, ...]:
    return tuple(
        NodeSpec(id=f"n{i + 1}", service_rate=service_rate, latency=latency, flows=flows)
        for i in range(hops)
    )


@pytest.fixture
def reference_flows() -> tuple[FlowSpec, ...]:
    return make_flows()


@pytest.fixture
def heterogeneous_nodes(reference_flows: tuple[FlowSpec, ...]) -> tuple[NodeSpec, ...]:
    return tuple(
        NodeSpec(id=f"n{i + 1}", service_rate=rate, latency=latency, flows=reference_flows)
        for i, (rate, latency) in enumerate(HETEROGENEOUS_NODES)
    )


@pytest.fixture
def case2_path(heterogeneous_nodes: tuple[NodeSpec, ...]) -> PathScenario:
    return PathScenario(nodes=heterogeneous_nodes, fixed_delays=HETEROGENEOUS_DELAYS)


@pytest.fixture
def case1_path(reference_flows: tuple[FlowSpec, ...]) -> PathScenario:
    """Ten identical nodes (R=200, T=1) with 2 ms between hops."""
    return PathScenario(
        nodes=identical_nodes(10, 200.0, 1.0, reference_flows), fixed_delays=(2.0,) * 9
    )


@pytest.fixture
def single_flow_node() -> NodeSpec:
    """One (1 Mbps, 20 Kb) flow on a zero-latency 10 Mbps node: every bound is tight."""
    flow = FlowSpec(id="F", micro_flows=(MicroFlowSpec.token_bucket("m", 1.0, 20.0),))
    return NodeSpec(id="solo", service_rate=10.0, latency=0.0, flows=(flow,))


@pytest.fixture
def single_flow_path(single_flow_node: NodeSpec) -> PathScenario:
    return PathScenario(nodes=(single_flow_node,), convention=Convention.STRICT_EQ17)


@pytest.fixture
def unstable_node(reference_flows: tuple[FlowSpec, ...]) -> NodeSpec:
    """Total sustained rate 2.36 Mbps against a 2 Mbps server."""
    return NodeSpec(id="slow", service_rate=2.0, latency=1.0, flows=reference_flows)
