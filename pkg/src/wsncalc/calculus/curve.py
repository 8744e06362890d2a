"""Piecewise-affine curves of time — the common representation of arrival and service curves.

Canonical units: data in Kb, time in ms, rate in Mbps (1 Kb / 1 Mbps = 1 ms).

A Curve is a tuple of segments. Segment k covers [start_k, start_{k+1}) and the last
segment extends to infinity, unless the curve carries an `infinite_after` horizon d,
in which case the curve is +inf for every t > d (burst-delay curves). Values are taken
from the right at breakpoints, so a token bucket evaluates to its burst at t = 0.
Upward jumps are allowed between segments, downward jumps are not.

Every Curve is canonical on construction: collinear continuous neighbours are merged
and values within TOLERANCE of zero are snapped to zero.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from wsncalc.errors import InvalidCurve

TOLERANCE = 1e-9


def _close(a: float, b: float, tol: float = TOLERANCE) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True, slots=True)
class Segment:
    """One affine piece: value (Kb) at `start` (ms), growing at `slope` (Mbps)."""

    start: float
    value: float
    slope: float

    def at(self, t: float) -> float:
        return self.value + self.slope * (t - self.start)


@dataclass(frozen=True)
class Deviation:
    """Result of a vertical or horizontal deviation; infinite results are explicit."""

    value: float
    finite: bool = True

    @classmethod
    def infinite(cls) -> Deviation:
        return cls(math.inf, finite=False)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.value:.6g}" if self.finite else "inf"


@dataclass(frozen=True, slots=True)
class LinearPiece:
    """An affine function restricted to the closed interval [lo, hi]; hi may be inf."""

    lo: float
    hi: float
    value: float
    slope: float

    def at(self, t: float) -> float:
        return self.value + self.slope * (t - self.lo)

    def covers(self, t: float) -> bool:
        return self.lo <= t <= self.hi


@dataclass(frozen=True)
class Curve:
    """Wide-sense increasing, non-negative, piecewise-affine function on [0, inf)."""

    segments: tuple[Segment, ...]
    infinite_after: float | None = None
    _starts: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        segments = tuple(self.segments)
        if not segments:
            raise InvalidCurve("A curve needs at least one segment")
        if not _close(segments[0].start, 0.0):
            raise InvalidCurve(f"First segment must start at 0, got {segments[0].start}")
        horizon = self.infinite_after
        if horizon is not None and horizon < -TOLERANCE:
            raise InvalidCurve(f"Burst-delay horizon must be >= 0, got {horizon}")

        canonical: list[Segment] = []
        for seg in segments:
            if seg.slope < -TOLERANCE:
                raise InvalidCurve(f"Negative slope {seg.slope} at t={seg.start}")
            if seg.value < -TOLERANCE:
                raise InvalidCurve(f"Negative value {seg.value} at t={seg.start}")
            start = 0.0 if not canonical else seg.start
            seg = Segment(start, max(seg.value, 0.0), max(seg.slope, 0.0))
            if horizon is not None and seg.start > horizon + TOLERANCE:
                break
            if canonical:
                prev = canonical[-1]
                if seg.start <= prev.start:
                    raise InvalidCurve(
                        f"Segment starts must be strictly increasing: {prev.start} then {seg.start}"
                    )
                reached = prev.at(seg.start)
                if seg.value < reached - TOLERANCE * max(1.0, abs(reached)):
                    raise InvalidCurve(
                        f"Downward jump at t={seg.start}: {reached} -> {seg.value}"
                    )
                if _close(seg.slope, prev.slope) and _close(seg.value, reached):
                    continue
            canonical.append(seg)

        object.__setattr__(self, "segments", tuple(canonical))
        object.__setattr__(self, "_starts", tuple(s.start for s in canonical))

    # --- constructors ---

    @classmethod
    def zero(cls) -> Curve:
        return cls((Segment(0.0, 0.0, 0.0),))

    @classmethod
    def affine(cls, burst: float, rate: float) -> Curve:
        """burst + rate * t (a single token bucket)."""
        return cls((Segment(0.0, burst, rate),))

    @classmethod
    def rate_latency(cls, rate: float, latency: float) -> Curve:
        """rate * (t - latency) for t > latency, 0 before."""
        if latency <= 0.0:
            return cls((Segment(0.0, 0.0, rate),))
        return cls((Segment(0.0, 0.0, 0.0), Segment(latency, 0.0, rate)))

    @classmethod
    def burst_delay(cls, delay: float) -> Curve:
        """0 on [0, delay], +inf after."""
        return cls((Segment(0.0, 0.0, 0.0),), infinite_after=delay)

    # --- evaluation ---

    def __call__(self, t: float) -> float:
        return self.eval(t)

    def eval(self, t: float) -> float:
        """Exact value at t >= 0; math.inf beyond a burst-delay horizon."""
        if t < 0.0:
            raise ValueError(f"Curves are defined for t >= 0, got {t}")
        if self.infinite_after is not None and t > self.infinite_after:
            return math.inf
        index = bisect.bisect_right(self._starts, t) - 1
        return self.segments[index].at(t)

    def left_limit(self, t: float) -> float:
        """Limit from the left at t > 0 (the value itself at t = 0)."""
        if t <= 0.0:
            return self.eval(0.0)
        if self.infinite_after is not None and t > self.infinite_after:
            return math.inf
        index = max(bisect.bisect_left(self._starts, t) - 1, 0)
        return self.segments[index].at(t)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self._starts

    @property
    def is_finite(self) -> bool:
        return self.infinite_after is None

    @property
    def final_slope(self) -> float:
        """Long-run growth rate; inf for curves with a burst-delay horizon."""
        if self.infinite_after is not None:
            return math.inf
        return self.segments[-1].slope

    def segment_end(self, index: int) -> float:
        """Right end of segment `index` (next start, horizon, or inf)."""
        if index + 1 < len(self.segments):
            end = self.segments[index + 1].start
            if self.infinite_after is not None:
                end = min(end, self.infinite_after)
            return end
        return self.infinite_after if self.infinite_after is not None else math.inf

    def pieces(self) -> list[LinearPiece]:
        """The segments as closed linear pieces (the right end uses the left limit)."""
        return [
            LinearPiece(seg.start, self.segment_end(i), seg.value, seg.slope)
            for i, seg in enumerate(self.segments)
        ]

    def approx_equal(self, other: Curve, tol: float = 1e-7) -> bool:
        """Equality of canonical forms up to `tol` (relative) on every field."""
        if (self.infinite_after is None) != (other.infinite_after is None):
            return False
        if self.infinite_after is not None and other.infinite_after is not None:
            if not _close(self.infinite_after, other.infinite_after, tol):
                return False
        if len(self.segments) != len(other.segments):
            return False
        return all(
            _close(a.start, b.start, tol) and _close(a.value, b.value, tol)
            and _close(a.slope, b.slope, tol)
            for a, b in zip(self.segments, other.segments, strict=True)
        )

    def __str__(self) -> str:
        parts = [f"[{s.start:g}: {s.value:g} + {s.slope:g}(t-{s.start:g})]" for s in self.segments]
        tail = f" inf after {self.infinite_after:g}" if self.infinite_after is not None else ""
        return " ".join(parts) + tail


def lower_envelope(pieces: Iterable[LinearPiece]) -> Curve:
    """Pointwise minimum of linear pieces, as a canonical Curve.

    Every crossing between two pieces and every piece end is a candidate breakpoint;
    between consecutive candidates the minimum is a single piece. Where no piece is
    defined beyond the last covered point the curve becomes infinite.
    """
    items = [p for p in pieces if p.hi >= p.lo]
    if not items:
        raise InvalidCurve("Lower envelope of an empty set of pieces")

    points: set[float] = set()
    for p in items:
        points.add(p.lo)
        if math.isfinite(p.hi):
            points.add(p.hi)
    for i, p in enumerate(items):
        for q in items[i + 1:]:
            if p.slope == q.slope:
                continue
            lo, hi = max(p.lo, q.lo), min(p.hi, q.hi)
            if lo >= hi:
                continue
            t = (q.value - q.slope * q.lo - p.value + p.slope * p.lo) / (p.slope - q.slope)
            if lo < t < hi:
                points.add(t)

    ordered = _dedupe(sorted(points))
    if ordered[0] > TOLERANCE:
        raise InvalidCurve(f"Pieces do not cover t=0 (first point {ordered[0]})")
    ordered[0] = 0.0

    segments: list[Segment] = []
    horizon: float | None = None
    for i, left in enumerate(ordered):
        right = ordered[i + 1] if i + 1 < len(ordered) else math.inf
        midpoint = left + 1.0 if math.isinf(right) else 0.5 * (left + right)
        covering = [p for p in items if p.covers(midpoint)]
        if not covering:
            horizon = left
            break
        best = min(covering, key=lambda p: p.at(midpoint))
        segments.append(Segment(left, best.at(left), best.slope))

    if not segments:
        return Curve((Segment(0.0, min(p.at(0.0) for p in items if p.covers(0.0)), 0.0),),
                     infinite_after=0.0)
    return Curve(tuple(segments), infinite_after=horizon)


def _dedupe(values: Sequence[float]) -> list[float]:
    out: list[float] = []
    for v in values:
        if out and _close(v, out[-1], 1e-12):
            continue
        out.append(v)
    return out


@dataclass(frozen=True)
class TokenBucketEnvelope:
    """min over pieces of (rate * t + burst); one piece is a simple leaky bucket."""

    pieces: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise InvalidCurve("A token-bucket envelope needs at least one (rate, burst) piece")
        for rate, burst in self.pieces:
            if rate < 0.0 or burst < 0.0:
                raise InvalidCurve(f"Token-bucket parameters must be >= 0, got ({rate}, {burst})")

    @property
    def dominant(self) -> tuple[float, float]:
        """The smallest-rate piece (ties: smaller burst); an affine upper bound."""
        return min(self.pieces)

    def to_curve(self) -> Curve:
        if len(self.pieces) == 1:
            rate, burst = self.pieces[0]
            return Curve.affine(burst, rate)
        return lower_envelope(LinearPiece(0.0, math.inf, b, r) for r, b in self.pieces)


@dataclass(frozen=True)
class RateLatencyCurve:
    """beta_{R,T}: rate R (Mbps) after latency T (ms)."""

    rate: float
    latency: float

    def __post_init__(self) -> None:
        if self.rate <= 0.0:
            raise InvalidCurve(f"Rate-latency rate must be > 0, got {self.rate}")
        if self.latency < 0.0:
            raise InvalidCurve(f"Rate-latency latency must be >= 0, got {self.latency}")

    def to_curve(self) -> Curve:
        return Curve.rate_latency(self.rate, self.latency)


@dataclass(frozen=True)
class BurstDelayCurve:
    """delta_d: 0 up to d, infinite after — a fixed propagation delay."""

    delay: float

    def __post_init__(self) -> None:
        if self.delay < 0.0:
            raise InvalidCurve(f"Burst delay must be >= 0, got {self.delay}")

    def to_curve(self) -> Curve:
        return Curve.burst_delay(self.delay)
