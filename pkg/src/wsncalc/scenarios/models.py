"""Pydantic schema of scenario documents.

A scenario document is a YAML (or JSON) file with an explicit units block:

    version: 1
    name: case2
    units: {rate: Mbps, data: Kb, time: ms, flow_rate: Kbps}
    convention: paper_numeric
    ee_mode: aggregate
    nodes:
      - {id: n1, service_rate: 540, latency: 5.8}
    flows:
      - id: A1
        micro_flows:
          - {id: a1, kind: token_bucket, rate: 500, burst: 30}
          - {id: a2, kind: fractal, mean: 300, std_dev: 300, hurst: 0.8}
    path: [n1]
    fixed_delays: [1.2]

`flow_rate` overrides `rate` for micro-flow rates and fractal means, since flows
and nodes are often specified in different rate units. Every document can be
normalized to canonical units (Mbps, Kb, ms).
"""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from wsncalc.bounds.models import EffectiveBandwidthMode
from wsncalc.errors import UnknownIdError
from wsncalc.scheduling.models import Convention
from wsncalc.traffic.models import check_hurst

RateUnit = Literal["Kbps", "Mbps"]
DataUnit = Literal["Kb", "Mb"]
TimeUnit = Literal["ms", "s"]

# rates are divided, data and times multiplied, to reach Mbps, Kb and ms
RATE_DIVISORS: dict[str, float] = {"Kbps": 1000.0, "Mbps": 1.0}
DATA_MULTIPLIERS: dict[str, float] = {"Kb": 1.0, "Mb": 1000.0}
TIME_MULTIPLIERS: dict[str, float] = {"ms": 1.0, "s": 1000.0}


class UnitsBlock(BaseModel):
    """Units of every numeric field in the document."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rate: RateUnit = "Mbps"
    data: DataUnit = "Kb"
    time: TimeUnit = "ms"
    flow_rate: RateUnit | None = None

    @property
    def is_canonical(self) -> bool:
        return (
            self.rate == "Mbps"
            and self.data == "Kb"
            and self.time == "ms"
            and self.flow_rate in (None, "Mbps")
        )

    @property
    def micro_flow_rate(self) -> RateUnit:
        return self.flow_rate or self.rate


class PieceRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    rate: float = Field(ge=0.0)
    burst: float = Field(ge=0.0)


class TokenBucketRecord(BaseModel):
    """A token-bucket micro-flow: either rate and burst, or a list of pieces."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    kind: Literal["token_bucket"]
    rate: float | None = Field(default=None, ge=0.0)
    burst: float | None = Field(default=None, ge=0.0)
    pieces: tuple[PieceRecord, ...] | None = None

    @model_validator(mode="after")
    def one_shape(self) -> TokenBucketRecord:
        simple = self.rate is not None or self.burst is not None
        if simple and self.pieces is not None:
            raise ValueError("Give either rate/burst or pieces, not both")
        if self.pieces is None and (self.rate is None or self.burst is None):
            raise ValueError("A token-bucket micro-flow needs both rate and burst")
        if self.pieces is not None and not self.pieces:
            raise ValueError("pieces must not be empty")
        return self

    def piece_list(self) -> list[tuple[float, float]]:
        if self.pieces is not None:
            return [(p.rate, p.burst) for p in self.pieces]
        return [(self.rate or 0.0, self.burst or 0.0)]


class FractalRecord(BaseModel):
    """A fractal micro-flow: mean rate, standard deviation (data) and Hurst parameter."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    kind: Literal["fractal"]
    mean: float = Field(ge=0.0)
    std_dev: float = Field(ge=0.0)
    hurst: float

    @field_validator("hurst")
    @classmethod
    def hurst_in_range(cls, v: float) -> float:
        return check_hurst(v)


MicroFlowRecord = Annotated[TokenBucketRecord | FractalRecord, Field(discriminator="kind")]


class FlowRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    micro_flows: tuple[MicroFlowRecord, ...] = Field(min_length=1)

    @field_validator("micro_flows")
    @classmethod
    def ids_unique(cls, v: tuple[MicroFlowRecord, ...]) -> tuple[MicroFlowRecord, ...]:
        _require_unique([mf.id for mf in v], "micro-flow")
        return v


class NodeRecord(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    service_rate: float = Field(gt=0.0)
    latency: float = Field(ge=0.0)


class ScenarioDocument(BaseModel):
    """A complete scenario: nodes, flows, the path they follow and computation options.

    convention, ee_mode and fractal_gamma fall back to the runtime settings when absent.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    version: Literal[1] = 1
    name: str = Field(default="scenario", min_length=1)
    description: str | None = None
    units: UnitsBlock = UnitsBlock()
    convention: Convention | None = None
    ee_mode: EffectiveBandwidthMode | None = None
    fractal_gamma: float | None = Field(default=None, gt=0.0)
    nodes: tuple[NodeRecord, ...] = Field(min_length=1)
    flows: tuple[FlowRecord, ...] = Field(min_length=1)
    path: tuple[str, ...] = Field(min_length=1)
    fixed_delays: tuple[float, ...] = ()

    @field_validator("fixed_delays")
    @classmethod
    def delays_non_negative(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(d < 0.0 for d in v):
            raise ValueError("fixed delays must be >= 0")
        return v

    @model_validator(mode="after")
    def references_resolve(self) -> ScenarioDocument:
        node_ids = [n.id for n in self.nodes]
        _require_unique(node_ids, "node")
        _require_unique([f.id for f in self.flows], "flow")
        _require_unique(list(self.path), "path node")
        unknown = [ref for ref in self.path if ref not in node_ids]
        if unknown:
            raise UnknownIdError(f"path references unknown node ids: {', '.join(unknown)}")
        n = len(self.path)
        if len(self.fixed_delays) not in (n - 1, n):
            raise ValueError(
                f"a path of {n} nodes needs {n - 1} or {n} fixed delays, "
                f"got {len(self.fixed_delays)}"
            )
        return self

    def node(self, node_id: str) -> NodeRecord:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise UnknownIdError(f"unknown node id '{node_id}'")

    def normalized(self) -> ScenarioDocument:
        """The same document with every value in canonical units (Mbps, Kb, ms)."""
        if self.units.is_canonical and self.units.flow_rate is None:
            return self
        rate = RATE_DIVISORS[self.units.rate]
        flow_rate = RATE_DIVISORS[self.units.micro_flow_rate]
        data = DATA_MULTIPLIERS[self.units.data]
        time = TIME_MULTIPLIERS[self.units.time]

        def convert(mf: TokenBucketRecord | FractalRecord) -> TokenBucketRecord | FractalRecord:
            if isinstance(mf, FractalRecord):
                return mf.model_copy(
                    update={"mean": mf.mean / flow_rate, "std_dev": mf.std_dev * data}
                )
            if mf.pieces is not None:
                pieces = tuple(
                    PieceRecord(rate=p.rate / flow_rate, burst=p.burst * data) for p in mf.pieces
                )
                return mf.model_copy(update={"pieces": pieces})
            return mf.model_copy(
                update={"rate": (mf.rate or 0.0) / flow_rate, "burst": (mf.burst or 0.0) * data}
            )

        return self.model_copy(
            update={
                "units": UnitsBlock(),
                "nodes": tuple(
                    n.model_copy(
                        update={"service_rate": n.service_rate / rate, "latency": n.latency * time}
                    )
                    for n in self.nodes
                ),
                "flows": tuple(
                    f.model_copy(update={"micro_flows": tuple(convert(mf) for mf in f.micro_flows)})
                    for f in self.flows
                ),
                "fixed_delays": tuple(d * time for d in self.fixed_delays),
            }
        )


def _require_unique(ids: list[str], what: str) -> None:
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise ValueError(f"duplicate {what} ids: {', '.join(duplicates)}")
