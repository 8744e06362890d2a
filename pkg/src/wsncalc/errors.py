"""Exception hierarchy for wsncalc.

Input problems (bad documents, bad parameters) are ScenarioError subclasses and
carry a location. Stability violations are raised as UnstableNode by the bound
computations; the node model itself reports them as a StabilityReport value.
"""

from __future__ import annotations


class WsnCalcError(Exception):
    """Base class for all wsncalc errors."""


class InvalidCurve(WsnCalcError, ValueError):
    """Raised when curve segments violate the piecewise-affine invariants."""


class ScenarioError(WsnCalcError, ValueError):
    """Raised for invalid scenario input. `location` names the field path and line."""

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnitError(ScenarioError):
    """Raised for an unsupported unit declaration."""


class UnknownIdError(ScenarioError):
    """Raised when a node or flow id reference does not resolve."""


class HurstOutOfRange(ScenarioError):
    """Raised when a Hurst parameter lies outside the open interval (0.5, 1)."""

    def __init__(self, hurst: float, location: str = "") -> None:
        self.hurst = hurst
        super().__init__(f"Hurst parameter must satisfy 0.5 < H < 1, got {hurst}", location)


class SweepRangeError(ScenarioError):
    """Raised for an empty or malformed sweep range."""


class UnstableNode(WsnCalcError):
    """Raised when the total sustained arrival rate at a node reaches its service rate."""

    def __init__(self, node_id: str, arrival_rate: float, service_rate: float) -> None:
        self.node_id = node_id
        self.arrival_rate = arrival_rate
        self.service_rate = service_rate
        super().__init__(
            f"Node '{node_id}' is unstable: total arrival rate {arrival_rate:.6g} Mbps "
            f">= service rate {service_rate:.6g} Mbps"
        )


class UnknownFlow(WsnCalcError, KeyError):
    """Raised when a flow id is not present at a node or on a path."""

    def __init__(self, flow_id: str, where: str) -> None:
        self.flow_id = flow_id
        self.where = where
        super().__init__(f"Flow '{flow_id}' is not present at {where}")

    def __str__(self) -> str:
        return str(self.args[0])


class StepMismatch(WsnCalcError, ValueError):
    """Raised when two grid curves are sampled with different steps."""


class HorizonTooShort(WsnCalcError):
    """Raised when a grid scan is still growing at the end of the horizon."""

    def __init__(self, message: str, suggested_factor: float | None = None) -> None:
        self.suggested_factor = suggested_factor
        if suggested_factor is not None:
            message = f"{message} (try --horizon-factor {suggested_factor:g})"
        super().__init__(message)
