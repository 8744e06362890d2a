"""Min-plus operations on piecewise-affine curves.

Pure functions — no I/O, no side effects, exact on the piecewise-affine family.

Functions:
    convolve: (f ⊗ g)(t) = inf over s in [0, t] of f(t - s) + g(s)
    convolve_all: left fold of convolve over several curves
    v_dev: sup over t of alpha(t) - beta(t) (backlog bound)
    h_dev: sup over t of the horizontal gap from alpha to beta (delay bound)
    min_of / sum_of: pointwise minimum / sum
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Callable, Iterable

from wsncalc.calculus.curve import (
    TOLERANCE,
    Curve,
    Deviation,
    LinearPiece,
    Segment,
    lower_envelope,
)


def convolve(f: Curve, g: Curve) -> Curve:
    """Min-plus convolution of two curves.

    The convolution of two affine pieces on [a1, e1] and [a2, e2] is convex: it starts
    at f(a1) + g(a2) and follows the smaller slope first, then the larger one. The
    convolution of the curves is the lower envelope of all pairwise piece convolutions.
    """
    pieces: list[LinearPiece] = []
    for p in f.pieces():
        for q in g.pieces():
            base = p.lo + q.lo
            value = p.value + q.value
            (slope_a, length_a), (slope_b, length_b) = sorted(
                ((p.slope, p.hi - p.lo), (q.slope, q.hi - q.lo))
            )
            pieces.append(LinearPiece(base, base + length_a, value, slope_a))
            if math.isfinite(length_a):
                mid = base + length_a
                pieces.append(LinearPiece(mid, mid + length_b, value + slope_a * length_a, slope_b))
    return lower_envelope(pieces)


def convolve_all(curves: Iterable[Curve]) -> Curve:
    """Convolution of a sequence of curves (delta_0 for an empty sequence)."""
    result = Curve.burst_delay(0.0)
    for curve in curves:
        result = convolve(result, curve)
    return result


def min_of(f: Curve, g: Curve) -> Curve:
    """Pointwise minimum of two curves."""
    return lower_envelope([*f.pieces(), *g.pieces()])


def sum_of(f: Curve, g: Curve) -> Curve:
    """Pointwise sum of two curves."""
    horizons = [h for h in (f.infinite_after, g.infinite_after) if h is not None]
    horizon = min(horizons) if horizons else None
    points = sorted(set(f.breakpoints) | set(g.breakpoints))
    if horizon is not None:
        points = [t for t in points if t <= horizon]
    segments = []
    for t in points:
        fi = _segment_at(f, t)
        gi = _segment_at(g, t)
        segments.append(Segment(t, f.eval(t) + g.eval(t), fi.slope + gi.slope))
    return Curve(tuple(segments), infinite_after=horizon)


def _segment_at(curve: Curve, t: float) -> Segment:
    return curve.segments[bisect.bisect_right(curve.breakpoints, t) - 1]


def v_dev(alpha: Curve, beta: Curve) -> Deviation:
    """Vertical deviation sup_{t >= 0} alpha(t) - beta(t).

    The difference is affine between the union of breakpoints, so the supremum is
    attained at a breakpoint, either at its value or at its left limit.
    """
    if _alpha_escapes(alpha, beta, vertical=True):
        return Deviation.infinite()

    end = beta.infinite_after
    points = set(alpha.breakpoints) | set(beta.breakpoints)
    for horizon in (alpha.infinite_after, beta.infinite_after):
        if horizon is not None:
            points.add(horizon)
    best = -math.inf
    for t in sorted(points):
        if end is not None and t > end:
            break
        best = max(best, alpha.eval(t) - beta.eval(t))
        if t > 0.0:
            best = max(best, alpha.left_limit(t) - beta.left_limit(t))
    return Deviation(best)


def h_dev(alpha: Curve, beta: Curve) -> Deviation:
    """Horizontal deviation sup_{t >= 0} inf{d >= 0 : alpha(t) <= beta(t + d)}.

    The gap beta^{-1}(alpha(t)) - t is affine in t between candidate points: the
    breakpoints of alpha and the times where alpha reaches a breakpoint value of beta.
    Each open interval is sampled twice and extrapolated to its ends, which yields the
    one-sided limits exactly.
    """
    if _alpha_escapes(alpha, beta, vertical=False):
        return Deviation.infinite()

    def gap(t: float) -> float:
        return _inverse(beta, alpha.eval(t)) - t

    levels = _key_levels(beta)
    candidates = set(alpha.breakpoints)
    for i, seg in enumerate(alpha.segments):
        end = alpha.segment_end(i)
        if seg.slope <= 0.0:
            continue
        for level in levels:
            t = seg.start + (level - seg.value) / seg.slope
            if seg.start < t < end:
                candidates.add(t)
    if alpha.infinite_after is not None:
        candidates.add(alpha.infinite_after)

    ordered = sorted(candidates)
    best = 0.0
    for i, left in enumerate(ordered):
        value = gap(left)
        if math.isinf(value):
            return Deviation.infinite()
        best = max(best, value)
        right = ordered[i + 1] if i + 1 < len(ordered) else None
        if right is None:
            if alpha.infinite_after is not None and beta.infinite_after is not None:
                # beyond its horizon alpha is infinite and the gap is beta's horizon minus t
                best = max(best, beta.infinite_after - alpha.infinite_after)
                break
            right_limit = None
        else:
            right_limit = right
        ends = _extrapolate(gap, left, right_limit)
        if ends is None:
            return Deviation.infinite()
        best = max(best, *ends)
    return Deviation(best)


def _alpha_escapes(alpha: Curve, beta: Curve, *, vertical: bool) -> bool:
    """True when alpha eventually outgrows beta for good (infinite deviation)."""
    if alpha.infinite_after is not None:
        if beta.infinite_after is None:
            return True
        return vertical and alpha.infinite_after < beta.infinite_after
    if beta.infinite_after is not None:
        return False
    return alpha.final_slope > beta.final_slope + TOLERANCE * max(1.0, beta.final_slope)


def _key_levels(beta: Curve) -> list[float]:
    """Values of beta at the start of each segment and just before its end."""
    levels: list[float] = []
    for i, seg in enumerate(beta.segments):
        levels.append(seg.value)
        end = beta.segment_end(i)
        if math.isfinite(end):
            levels.append(seg.at(end))
    return levels


def _inverse(beta: Curve, level: float) -> float:
    """Lower pseudo-inverse inf{s >= 0 : beta(s) >= level}; inf when never reached."""
    if math.isinf(level):
        return beta.infinite_after if beta.infinite_after is not None else math.inf
    for i, seg in enumerate(beta.segments):
        if seg.value >= level:
            return seg.start
        if seg.slope > 0.0:
            end = beta.segment_end(i)
            if math.isinf(end) or level <= seg.at(end):
                return seg.start + (level - seg.value) / seg.slope
    if beta.infinite_after is not None:
        return beta.infinite_after
    return math.inf


def _extrapolate(
    func: Callable[[float], float], left: float, right: float | None
) -> tuple[float, float] | None:
    """One-sided limits of an affine function on (left, right) from two interior samples.

    For an unbounded interval only the left limit is meaningful; the right value is
    returned as -inf. None signals an infinite sample.
    """
    if right is None:
        t1, t2 = left + 1.0, left + 2.0
    else:
        width = right - left
        if width <= 0.0:
            return (-math.inf, -math.inf)
        t1, t2 = left + width / 3.0, left + 2.0 * width / 3.0
    v1, v2 = func(t1), func(t2)
    if math.isinf(v1) or math.isinf(v2):
        return None
    slope = (v2 - v1) / (t2 - t1)
    at_left = v1 - slope * (t1 - left)
    at_right = -math.inf if right is None else v2 + slope * (right - t2)
    return (at_left, at_right)
