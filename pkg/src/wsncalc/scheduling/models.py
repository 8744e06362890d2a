"""Types of the two-layer node scheduling model.

- NodeSpec: a sensor node's rate-latency service and the flows sharing it
- Convention: which burst sum enters the residual latency
- ResidualService: leftover rate-latency service seen by one flow
- StabilityReport: outcome of the node stability check
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field, field_validator

from wsncalc.calculus.curve import Curve, RateLatencyCurve
from wsncalc.traffic.models import FlowSpec


class Convention(str, enum.Enum):
    """Residual-latency convention.

    STRICT_EQ17 charges only cross-traffic bursts to the residual latency.
    PAPER_NUMERIC also charges the flow's own bursts; it reproduces the published
    numbers and is never tighter than STRICT_EQ17.
    """

    STRICT_EQ17 = "strict_eq17"
    PAPER_NUMERIC = "paper_numeric"

    @classmethod
    def parse(cls, value: str) -> Convention:
        """Accept the enum value or the short CLI aliases 'strict' and 'paper'."""
        aliases = {"strict": cls.STRICT_EQ17, "paper": cls.PAPER_NUMERIC}
        normalized = value.strip().lower()
        if normalized in aliases:
            return aliases[normalized]
        return cls(normalized)


class NodeSpec(BaseModel):
    """A sensor node: service rate R (Mbps), latency T (ms), and the flows it serves."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    service_rate: float = Field(gt=0.0)
    latency: float = Field(ge=0.0)
    flows: tuple[FlowSpec, ...] = ()

    @field_validator("flows")
    @classmethod
    def flow_ids_unique(cls, v: tuple[FlowSpec, ...]) -> tuple[FlowSpec, ...]:
        ids = [f.id for f in v]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"Duplicate flow ids at node: {', '.join(duplicates)}")
        return v

    def flow(self, flow_id: str) -> FlowSpec | None:
        return next((f for f in self.flows if f.id == flow_id), None)

    def service_curve(self) -> Curve:
        return Curve.rate_latency(self.service_rate, self.latency)


@dataclass(frozen=True)
class ResidualService:
    """Leftover service of one flow: rate R' (Mbps) after latency T' (ms)."""

    flow_id: str
    effective_rate: float
    effective_latency: float
    theta: float

    def as_rate_latency(self) -> RateLatencyCurve:
        return RateLatencyCurve(self.effective_rate, self.effective_latency)

    def curve(self) -> Curve:
        return Curve.rate_latency(self.effective_rate, self.effective_latency)


@dataclass(frozen=True)
class StabilityReport:
    """Stability of a node: ok iff the total sustained arrival rate is below R."""

    node_id: str
    arrival_rate: float
    service_rate: float

    @property
    def ok(self) -> bool:
        return self.arrival_rate < self.service_rate

    @property
    def headroom(self) -> float:
        return self.service_rate - self.arrival_rate
