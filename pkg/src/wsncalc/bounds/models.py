"""Pydantic models for QoS bound computation.

- PathScenario: ordered nodes, fixed inter-node delays and the flows crossing them
- NodeBounds: backlog, delay and effective bandwidth of one flow at one node
- PathBounds: multi-hop delay, jitter and effective bandwidth of one flow
"""

from __future__ import annotations

import enum
import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.traffic.models import DEFAULT_FRACTAL, FlowSpec, FractalConstants


class EffectiveBandwidthMode(str, enum.Enum):
    """How the multi-hop effective bandwidth combines a flow's micro-flows.

    LITERAL takes the largest per-micro-flow max(r, b / DD).
    AGGREGATE uses the whole flow envelope, sup alpha(t) / (t + DD).
    """

    LITERAL = "literal"
    AGGREGATE = "aggregate"


class PathScenario(BaseModel):
    """Flows traversing an ordered chain of nodes.

    fixed_delays holds either N - 1 values (between consecutive nodes) or N values
    (the last one being the hop to the sink).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes: tuple[NodeSpec, ...] = Field(min_length=1)
    fixed_delays: tuple[float, ...] = ()
    convention: Convention = Convention.PAPER_NUMERIC
    ee_mode: EffectiveBandwidthMode = EffectiveBandwidthMode.AGGREGATE
    fractal: FractalConstants = DEFAULT_FRACTAL

    @field_validator("fixed_delays")
    @classmethod
    def delays_non_negative(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        for index, delay in enumerate(v):
            if delay < 0.0 or not math.isfinite(delay):
                raise ValueError(f"fixed_delays[{index}] must be a finite value >= 0, got {delay}")
        return v

    @model_validator(mode="after")
    def path_consistent(self) -> PathScenario:
        n = len(self.nodes)
        if len(self.fixed_delays) not in (max(n - 1, 0), n):
            raise ValueError(
                f"A path of {n} nodes needs {n - 1} or {n} fixed delays, "
                f"got {len(self.fixed_delays)}"
            )
        node_ids = [node.id for node in self.nodes]
        if len(set(node_ids)) != len(node_ids):
            raise ValueError(f"Node ids must be unique along the path: {node_ids}")
        entry = {f.id for f in self.nodes[0].flows}
        if not entry:
            raise ValueError(f"Entry node '{self.nodes[0].id}' carries no flows")
        for node in self.nodes[1:]:
            missing = sorted(entry - {f.id for f in node.flows})
            if missing:
                raise ValueError(
                    f"Flows {', '.join(missing)} do not traverse node '{node.id}'"
                )
        return self

    @property
    def flows(self) -> tuple[FlowSpec, ...]:
        """Flows entering at the first node."""
        return self.nodes[0].flows

    @property
    def flow_ids(self) -> list[str]:
        return [f.id for f in self.flows]

    @property
    def fixed_delay_sum(self) -> float:
        return math.fsum(self.fixed_delays)

    @property
    def hop_count(self) -> int:
        return len(self.nodes)


class NodeBounds(BaseModel):
    """Per-node bounds of one flow. Infinite values mark an unstable node."""

    model_config = ConfigDict(frozen=True)

    node_id: str
    flow_id: str
    backlog: float
    delay: float
    effective_bandwidth: float


class PathBounds(BaseModel):
    """End-to-end bounds of one flow; jitter + fixed_delay_sum == delay."""

    model_config = ConfigDict(frozen=True)

    flow_id: str
    delay: float
    jitter: float
    effective_bandwidth: float
    fixed_delay_sum: float
