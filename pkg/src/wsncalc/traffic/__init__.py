"""Regulated traffic: micro-flows, flows and their arrival envelopes."""

from wsncalc.traffic.models import (
    FlowSpec,
    FractalConstants,
    FractalRegulator,
    MicroFlowSpec,
    TokenBucketPiece,
    TokenBucketRegulator,
)
from wsncalc.traffic.regulators import (
    flow_burst,
    flow_envelope,
    flow_rate,
    fractal_coefficients,
    fractal_to_token_bucket,
    micro_flow_envelope,
)

__all__ = [
    "FlowSpec",
    "FractalConstants",
    "FractalRegulator",
    "MicroFlowSpec",
    "TokenBucketPiece",
    "TokenBucketRegulator",
    "flow_burst",
    "flow_envelope",
    "flow_rate",
    "fractal_coefficients",
    "fractal_to_token_bucket",
    "micro_flow_envelope",
]
