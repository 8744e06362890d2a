"""Arrival envelopes of regulated micro-flows and flows.

Functions:
    fractal_coefficients: dimensionless (rate, burst) multipliers of sigma for a Hurst value
    fractal_to_token_bucket: maps (m, sigma, H, gamma) to leaky-bucket (r, b)
    micro_flow_envelope: TokenBucketEnvelope of one micro-flow
    dominant_bucket: the affine (r, b) upper bound used in node-level sums
    flow_envelope: sum of the micro-flow envelopes of a flow
    flow_rate / flow_burst: sums of dominant-bucket rates / bursts
"""

from __future__ import annotations

import math
from functools import reduce

from wsncalc.calculus.curve import Curve, TokenBucketEnvelope
from wsncalc.calculus.minplus import sum_of
from wsncalc.traffic.models import (
    DEFAULT_FRACTAL,
    FlowSpec,
    FractalConstants,
    FractalRegulator,
    MicroFlowSpec,
    TokenBucketPiece,
    check_hurst,
)

# sigma * rate-coefficient is data per second; canonical rates are Kb per ms (Mbps)
SIGMA_RATE_SCALE = 1e-3


def fractal_coefficients(hurst: float, gamma: float = DEFAULT_FRACTAL.gamma) -> tuple[float, float]:
    """Return (rate_coefficient, burst_coefficient) for a Hurst parameter.

    rate_coefficient  = (1 - H) * sqrt(2 * gamma * (H / (1 - H)) ** (H - 1))
    burst_coefficient = (1 - H) * sqrt(2 * gamma * (H / (1 - H)) ** H)

    Raises:
        HurstOutOfRange: if H is not strictly between 0.5 and 1.
    """
    check_hurst(hurst)
    if gamma <= 0.0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    ratio = hurst / (1.0 - hurst)
    rate_coefficient = (1.0 - hurst) * math.sqrt(2.0 * gamma * ratio ** (hurst - 1.0))
    burst_coefficient = (1.0 - hurst) * math.sqrt(2.0 * gamma * ratio**hurst)
    return rate_coefficient, burst_coefficient


def fractal_to_token_bucket(
    regulator: FractalRegulator, consts: FractalConstants = DEFAULT_FRACTAL
) -> TokenBucketPiece:
    """Equivalent leaky-bucket parameters of a fractal regulator.

    r = m + sigma * rate_coefficient (sigma per second, converted to Mbps)
    b = sigma * burst_coefficient (Kb)
    """
    rate_coefficient, burst_coefficient = fractal_coefficients(regulator.hurst, consts.gamma)
    return TokenBucketPiece(
        rate=regulator.mean + regulator.std_dev * rate_coefficient * SIGMA_RATE_SCALE,
        burst=regulator.std_dev * burst_coefficient,
    )


def micro_flow_envelope(
    mf: MicroFlowSpec, consts: FractalConstants = DEFAULT_FRACTAL
) -> TokenBucketEnvelope:
    """Token-bucket envelope of a micro-flow; fractal regulators become one piece."""
    regulator = mf.regulator
    if isinstance(regulator, FractalRegulator):
        piece = fractal_to_token_bucket(regulator, consts)
        return TokenBucketEnvelope(((piece.rate, piece.burst),))
    return TokenBucketEnvelope(tuple((p.rate, p.burst) for p in regulator.pieces))


def dominant_bucket(
    mf: MicroFlowSpec, consts: FractalConstants = DEFAULT_FRACTAL
) -> tuple[float, float]:
    """(rate, burst) of the smallest-rate piece; bounds the whole envelope from above."""
    return micro_flow_envelope(mf, consts).dominant


def flow_envelope(flow: FlowSpec, consts: FractalConstants = DEFAULT_FRACTAL) -> Curve:
    """Arrival curve of a flow: the sum of its micro-flow envelopes."""
    curves = [micro_flow_envelope(mf, consts).to_curve() for mf in flow.micro_flows]
    return reduce(sum_of, curves)


def flow_rate(flow: FlowSpec, consts: FractalConstants = DEFAULT_FRACTAL) -> float:
    """Sum of the micro-flow sustained rates (Mbps)."""
    return math.fsum(dominant_bucket(mf, consts)[0] for mf in flow.micro_flows)


def flow_burst(flow: FlowSpec, consts: FractalConstants = DEFAULT_FRACTAL) -> float:
    """Sum of the micro-flow burst tolerances (Kb)."""
    return math.fsum(dominant_bucket(mf, consts)[1] for mf in flow.micro_flows)
