"""Two-layer node scheduling: stability and residual service per flow."""

from wsncalc.scheduling.models import Convention, NodeSpec, ResidualService, StabilityReport
from wsncalc.scheduling.residual import all_residuals, residual_service, stability_check

__all__ = [
    "Convention",
    "NodeSpec",
    "ResidualService",
    "StabilityReport",
    "all_residuals",
    "residual_service",
    "stability_check",
]
