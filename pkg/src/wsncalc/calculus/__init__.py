"""Exact piecewise-affine curves and min-plus operations."""

from wsncalc.calculus.curve import (
    BurstDelayCurve,
    Curve,
    Deviation,
    RateLatencyCurve,
    Segment,
    TokenBucketEnvelope,
)
from wsncalc.calculus.minplus import convolve, convolve_all, h_dev, min_of, sum_of, v_dev

__all__ = [
    "BurstDelayCurve",
    "Curve",
    "Deviation",
    "RateLatencyCurve",
    "Segment",
    "TokenBucketEnvelope",
    "convolve",
    "convolve_all",
    "h_dev",
    "min_of",
    "sum_of",
    "v_dev",
]
