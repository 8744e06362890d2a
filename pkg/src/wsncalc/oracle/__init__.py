"""Grid-based numerical oracle for the closed-form bounds."""

from wsncalc.oracle.checks import (
    BoundCheck,
    BoundKind,
    ValidationReport,
    ValidationStatus,
    margin_convergence,
    random_corpus,
    validate_corpus,
    validate_scenario,
)
from wsncalc.oracle.grid import GridCurve, discretize, grid_convolve, grid_hdev, grid_vdev
from wsncalc.oracle.simulation import ArrivalTrace, ServerOutcome, greedy_trace, simulate_server

__all__ = [
    "ArrivalTrace",
    "BoundCheck",
    "BoundKind",
    "GridCurve",
    "ServerOutcome",
    "ValidationReport",
    "ValidationStatus",
    "discretize",
    "greedy_trace",
    "grid_convolve",
    "grid_hdev",
    "grid_vdev",
    "margin_convergence",
    "random_corpus",
    "simulate_server",
    "validate_corpus",
    "validate_scenario",
]
