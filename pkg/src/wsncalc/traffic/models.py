"""Pydantic models for regulated traffic: micro-flows, flows and fractal constants.

All values are in canonical units (rates in Mbps, data in Kb). Unit conversion
happens once, when a scenario document is ingested.
"""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from wsncalc.errors import HurstOutOfRange


def check_hurst(hurst: float) -> float:
    """Reject Hurst parameters outside the open interval (0.5, 1)."""
    if not 0.5 < hurst < 1.0:
        raise HurstOutOfRange(hurst)
    return hurst


class TokenBucketPiece(BaseModel):
    """One (rate, burst) leaky-bucket constraint: burst + rate * t."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    rate: float = Field(ge=0.0)
    burst: float = Field(ge=0.0)


class TokenBucketRegulator(BaseModel):
    """Leaky-bucket regulator; several pieces form a multi-segment envelope."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["token_bucket"] = "token_bucket"
    pieces: tuple[TokenBucketPiece, ...] = Field(min_length=1)


class FractalRegulator(BaseModel):
    """Fractal leaky-bucket regulator for self-similar traffic.

    mean is a rate (Mbps), std_dev a data amount (Kb), hurst dimensionless.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["fractal"] = "fractal"
    mean: float = Field(ge=0.0)
    std_dev: float = Field(ge=0.0)
    hurst: float

    @field_validator("hurst")
    @classmethod
    def hurst_in_open_interval(cls, v: float) -> float:
        return check_hurst(v)


Regulator = Annotated[TokenBucketRegulator | FractalRegulator, Field(discriminator="kind")]


class MicroFlowSpec(BaseModel):
    """An individually regulated traffic stream."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    regulator: Regulator

    @classmethod
    def token_bucket(cls, id: str, rate: float, burst: float) -> MicroFlowSpec:  # noqa: A002
        return cls(
            id=id,
            regulator=TokenBucketRegulator(pieces=(TokenBucketPiece(rate=rate, burst=burst),)),
        )

    @classmethod
    def fractal(
        cls, id: str, mean: float, std_dev: float, hurst: float  # noqa: A002
    ) -> MicroFlowSpec:
        return cls(id=id, regulator=FractalRegulator(mean=mean, std_dev=std_dev, hurst=hurst))


class FlowSpec(BaseModel):
    """A flow: the ordered, non-empty set of micro-flows sharing one buffer."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    id: str = Field(min_length=1)
    micro_flows: tuple[MicroFlowSpec, ...] = Field(min_length=1)

    @field_validator("micro_flows")
    @classmethod
    def micro_flow_ids_unique(cls, v: tuple[MicroFlowSpec, ...]) -> tuple[MicroFlowSpec, ...]:
        ids = [mf.id for mf in v]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"Duplicate micro-flow ids within flow: {', '.join(duplicates)}")
        return v


class FractalConstants(BaseModel):
    """Constants of the fractal leaky-bucket mapping."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    gamma: float = Field(default=6.0, gt=0.0)


DEFAULT_FRACTAL = FractalConstants()
