"""Closed-form node and multi-hop QoS bounds."""

from wsncalc.bounds.models import EffectiveBandwidthMode, NodeBounds, PathBounds, PathScenario
from wsncalc.bounds.node_qos import (
    compute_node_bounds,
    effective_bandwidth,
    node_backlog_at,
    node_backlog_bound,
    node_bounds_all,
    node_delay_bound,
    node_effective_bandwidth_bound,
)
from wsncalc.bounds.path_qos import (
    compute_path_bounds,
    path_bounds_all,
    path_delay_bound,
    path_effective_bandwidth_bound,
    path_jitter_bound,
    path_node_bounds,
    path_service_curve,
    path_service_curve_convolved,
)

__all__ = [
    "EffectiveBandwidthMode",
    "NodeBounds",
    "PathBounds",
    "PathScenario",
    "compute_node_bounds",
    "compute_path_bounds",
    "effective_bandwidth",
    "node_backlog_at",
    "node_backlog_bound",
    "node_bounds_all",
    "node_delay_bound",
    "node_effective_bandwidth_bound",
    "path_bounds_all",
    "path_delay_bound",
    "path_effective_bandwidth_bound",
    "path_jitter_bound",
    "path_node_bounds",
    "path_service_curve",
    "path_service_curve_convolved",
]
