"""Grid-discretized curves and brute-force min-plus operations.

A GridCurve holds samples at t = 0, step, 2 step, ... and is independent of the exact
piecewise-affine algebra in wsncalc.calculus; the two are compared by the validation
suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from wsncalc.calculus.curve import Curve
from wsncalc.errors import HorizonTooShort, StepMismatch

FloatArray = npt.NDArray[np.float64]

# relative tolerance for comparing steps and checking monotonicity
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GridCurve:
    """Samples (Kb) of a wide-sense increasing curve on a uniform time grid (ms)."""

    step: float
    samples: FloatArray

    def __post_init__(self) -> None:
        if not self.step > 0.0:
            raise ValueError(f"Grid step must be > 0, got {self.step}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("Grid samples must be a non-empty 1-D array")
        finite = samples[np.isfinite(samples)]
        scale = max(1.0, float(np.max(np.abs(finite)))) if finite.size else 1.0
        if np.any(samples[1:] < samples[:-1] - GRID_TOLERANCE * scale):
            raise ValueError("Grid samples must be non-decreasing")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def horizon(self) -> float:
        return self.step * (self.samples.size - 1)

    @property
    def times(self) -> FloatArray:
        return np.arange(self.samples.size, dtype=np.float64) * self.step


def discretize(curve: Curve, step: float, horizon: float) -> GridCurve:
    """Sample a curve at k * step for k = 0 .. ceil(horizon / step)."""
    if not step > 0.0:
        raise ValueError(f"Grid step must be > 0, got {step}")
    if horizon < 0.0:
        raise ValueError(f"Grid horizon must be >= 0, got {horizon}")
    count = math.ceil(horizon / step - GRID_TOLERANCE) + 1
    values = np.fromiter(
        (curve.eval(k * step) for k in range(count)), dtype=np.float64, count=count
    )
    return GridCurve(step, values)


def _check_steps(f: GridCurve, g: GridCurve) -> int:
    if not math.isclose(f.step, g.step, rel_tol=GRID_TOLERANCE):
        raise StepMismatch(f"Grid steps differ: {f.step} vs {g.step}")
    return min(len(f), len(g))


def grid_convolve(f: GridCurve, g: GridCurve) -> GridCurve:
    """out[k] = min over j <= k of f[k - j] + g[j], on the common prefix of both grids.

    Raises:
        StepMismatch: if the grids use different steps.
    """
    n = _check_steps(f, g)
    a = f.samples[:n]
    b = g.samples[:n]
    out = np.empty(n, dtype=np.float64)
    for k in range(n):
        out[k] = np.min(a[k::-1] + b[: k + 1])
    return GridCurve(f.step, out)


def grid_vdev(a: GridCurve, b: GridCurve) -> float:
    """Largest vertical gap a[k] - b[k] (Kb).

    Raises:
        StepMismatch: if the grids use different steps.
        HorizonTooShort: if the gap is still growing at the last sample.
    """
    n = _check_steps(a, b)
    gaps = a.samples[:n] - b.samples[:n]
    index = int(np.argmax(gaps))
    if n > 1 and index == n - 1 and gaps[-1] > gaps[-2]:
        raise HorizonTooShort(
            f"Vertical gap still growing at the grid horizon ({a.step * (n - 1):g} ms)"
        )
    return float(gaps[index])


def grid_hdev(a: GridCurve, b: GridCurve) -> float:
    """Largest horizontal gap from a to b (ms).

    For every sample a[k] the first index j with b[j] >= a[k] is found by binary search;
    the gap is (j - k) * step, never negative.

    Raises:
        StepMismatch: if the grids use different steps.
        HorizonTooShort: if b never reaches a[0], or the samples b cannot resolve
            may hide a larger gap.
    """
    n = _check_steps(a, b)
    levels = a.samples[:n]
    firsts = np.searchsorted(b.samples[:n], levels, side="left")
    resolved = int(np.count_nonzero(firsts < n))
    if resolved == 0:
        raise HorizonTooShort(f"Curve never reaches {levels[0]:g} within the grid horizon")
    gaps = np.maximum(firsts[:resolved] - np.arange(resolved), 0) * a.step
    index = int(np.argmax(gaps))
    best = float(gaps[index])
    # an unresolved sample k has a gap of at least (n - k) * step
    if resolved < n:
        growing = (n - resolved) * a.step > best
    else:
        growing = index == n - 1 and n > 1 and gaps[-1] > gaps[-2]
    if growing:
        raise HorizonTooShort(
            f"Horizontal gap still growing at the grid horizon ({a.step * (n - 1):g} ms)"
        )
    return best
