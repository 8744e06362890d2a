"""Greedy-source traces and a worst-case FIFO server on a time grid.

The greedy source emits exactly its envelope: A(0, t) = alpha(t) for t > 0 and
A(0, 0) = 0. Fed to a server whose departures are A convolved with the service
curve, it attains the backlog and delay bounds within one grid cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wsncalc.calculus.curve import Curve
from wsncalc.oracle.grid import (
    FloatArray,
    GridCurve,
    discretize,
    grid_convolve,
    grid_hdev,
    grid_vdev,
)


@dataclass(frozen=True)
class ArrivalTrace:
    """Cumulative arrivals A(0, k * step) in Kb."""

    step: float
    cumulative: FloatArray

    def __post_init__(self) -> None:
        grid = GridCurve(self.step, self.cumulative)
        if grid.samples[0] != 0.0:
            raise ValueError(f"A trace starts empty, got A(0, 0) = {grid.samples[0]}")
        object.__setattr__(self, "cumulative", grid.samples)

    def __len__(self) -> int:
        return int(self.cumulative.size)

    def amount(self, start: int, end: int) -> float:
        """A(t_start, t_end) between two grid indices."""
        return float(self.cumulative[end] - self.cumulative[start])

    def as_grid(self) -> GridCurve:
        return GridCurve(self.step, self.cumulative)

    def max_window_amounts(self) -> FloatArray:
        """Largest A(t, t + m * step) over t, for every window length m."""
        n = len(self)
        out = np.zeros(n, dtype=np.float64)
        for m in range(1, n):
            out[m] = np.max(self.cumulative[m:] - self.cumulative[:-m])
        return out

    def conforms_to(self, envelope: Curve, tol: float = 1e-9) -> bool:
        """Sub-additive bound A(t, t + tau) <= envelope(tau) at every sampled offset."""
        bound = discretize(envelope, self.step, self.step * (len(self) - 1)).samples
        windows = self.max_window_amounts()
        return bool(np.all(windows[1:] <= bound[1:] + tol * np.maximum(1.0, bound[1:])))


@dataclass(frozen=True)
class ServerOutcome:
    """Worst-case backlog (Kb) and virtual delay (ms) observed at a simulated server."""

    backlog_max: float
    vdelay_max: float
    departures: GridCurve


def greedy_trace(envelope: Curve, step: float, horizon: float) -> ArrivalTrace:
    """Trace of the greedy source conforming to the envelope."""
    samples = np.array(discretize(envelope, step, horizon).samples, dtype=np.float64)
    samples[0] = 0.0
    return ArrivalTrace(step, samples)


def simulate_server(trace: ArrivalTrace, service: GridCurve) -> ServerOutcome:
    """Serve a trace with exactly the given service curve.

    Raises:
        StepMismatch: if trace and service use different steps.
        HorizonTooShort: if the worst case is not resolved within the grid.
    """
    arrivals = trace.as_grid()
    departures = grid_convolve(arrivals, service)
    return ServerOutcome(
        backlog_max=grid_vdev(arrivals, departures),
        vdelay_max=grid_hdev(arrivals, departures),
        departures=departures,
    )
