"""Embedded replication scenarios with their published expected values.

Flows (rates in Kbps, bursts in Kb):
    A1: (500, 30), (300, 300), (420, 150)
    A2: (600, 200), (240, 500)
    A3: (300, 200)

The case-2 path uses five heterogeneous nodes; case 1 and the fractal scenarios
use identical nodes with a 2 ms delay between consecutive hops. The fractal
scenarios replace every micro-flow (r, b) by a fractal regulator with mean r and
standard deviation b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from wsncalc.errors import ScenarioError
from wsncalc.scenarios.models import ScenarioDocument

BUILTIN_PREFIX = "builtin:"
VERSION_PIN = "2011.1"

REFERENCE_FLOWS: tuple[tuple[str, tuple[tuple[float, float], ...]], ...] = (
    ("A1", ((500.0, 30.0), (300.0, 300.0), (420.0, 150.0))),
    ("A2", ((600.0, 200.0), (240.0, 500.0))),
    ("A3", ((300.0, 200.0),)),
)

# (service rate Mbps, latency ms) of the five heterogeneous nodes, and the hop delays
HETEROGENEOUS_NODES: tuple[tuple[float, float], ...] = (
    (540.0, 5.8),
    (510.0, 7.8),
    (624.0, 3.38),
    (480.0, 6.54),
    (420.0, 3.2),
)
HETEROGENEOUS_DELAYS: tuple[float, ...] = (1.2, 2.3, 2.0, 3.5, 2.6)

MIXED_HURST: tuple[tuple[float, ...], ...] = ((0.90, 0.80, 0.75), (0.85, 0.60), (0.70,))

FLOW_IDS = ("A1", "A2", "A3")


@dataclass(frozen=True)
class Expectation:
    """A published value of one metric for one flow, with its acceptance tolerance.

    Metrics: DD, jitter, ee (path) and Q, D, e (first node of the path).
    """

    metric: str
    flow_id: str
    value: float
    tolerance: float


@dataclass(frozen=True)
class BuiltinScenario:
    name: str
    document: ScenarioDocument
    expectations: tuple[Expectation, ...]


def _token_bucket_flows() -> list[dict[str, Any]]:
    return [
        {
            "id": fid,
            "micro_flows": [
                {"id": f"{fid.lower()}_{j + 1}", "kind": "token_bucket", "rate": r, "burst": b}
                for j, (r, b) in enumerate(pieces)
            ],
        }
        for fid, pieces in REFERENCE_FLOWS
    ]


def _fractal_flows(hurst: tuple[tuple[float, ...], ...]) -> list[dict[str, Any]]:
    return [
        {
            "id": fid,
            "micro_flows": [
                {
                    "id": f"{fid.lower()}_{j + 1}",
                    "kind": "fractal",
                    "mean": r,
                    "std_dev": b,
                    "hurst": hurst[i][j],
                }
                for j, (r, b) in enumerate(pieces)
            ],
        }
        for i, (fid, pieces) in enumerate(REFERENCE_FLOWS)
    ]


def _uniform_hurst(value: float) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(value for _ in pieces) for _, pieces in REFERENCE_FLOWS)


def identical_path(
    name: str,
    *,
    hops: int,
    service_rate: float,
    latency: float,
    delay: float,
    flows: list[dict[str, Any]],
    description: str,
) -> ScenarioDocument:
    """hops identical nodes with hops - 1 equal delays between them."""
    nodes = [
        {"id": f"n{i + 1}", "service_rate": service_rate, "latency": latency} for i in range(hops)
    ]
    return ScenarioDocument.model_validate(
        {
            "name": name,
            "description": description,
            "units": {"rate": "Mbps", "data": "Kb", "time": "ms", "flow_rate": "Kbps"},
            "convention": "paper_numeric",
            "ee_mode": "aggregate",
            "fractal_gamma": 6.0,
            "nodes": nodes,
            "flows": flows,
            "path": [n["id"] for n in nodes],
            "fixed_delays": [delay] * (hops - 1),
        }
    ).normalized()


def _case2() -> ScenarioDocument:
    nodes = [
        {"id": f"n{i + 1}", "service_rate": rate, "latency": latency}
        for i, (rate, latency) in enumerate(HETEROGENEOUS_NODES)
    ]
    return ScenarioDocument.model_validate(
        {
            "name": "case2",
            "description": "Five heterogeneous nodes, three flows, fixed delays summing to 11.6 ms",
            "units": {"rate": "Mbps", "data": "Kb", "time": "ms", "flow_rate": "Kbps"},
            "convention": "paper_numeric",
            "ee_mode": "aggregate",
            "fractal_gamma": 6.0,
            "nodes": nodes,
            "flows": _token_bucket_flows(),
            "path": [n["id"] for n in nodes],
            "fixed_delays": list(HETEROGENEOUS_DELAYS),
        }
    ).normalized()


def _expect(metric: str, values: tuple[float, float, float], tolerance: float) -> list[Expectation]:
    return [Expectation(metric, fid, v, tolerance) for fid, v in zip(FLOW_IDS, values, strict=True)]


def _build() -> dict[str, BuiltinScenario]:
    scenarios = [
        BuiltinScenario(
            "case1_N10_R200",
            identical_path(
                "case1_N10_R200", hops=10, service_rate=200.0, latency=1.0, delay=2.0,
                flows=_token_bucket_flows(),
                description="Ten identical nodes (R=200 Mbps, T=1 ms), 2 ms between hops",
            ),
            tuple(
                _expect("DD", (100.0, 102.0, 99.0), 1.0)
                + _expect("D", (10.3, 11.4, 8.9), 0.1)
                + _expect("e", (46.47, 61.18, 22.44), 0.2)
            ),
        ),
        BuiltinScenario(
            "case1_N10_R50",
            identical_path(
                "case1_N10_R50", hops=10, service_rate=50.0, latency=1.0, delay=2.0,
                flows=_token_bucket_flows(),
                description="Ten identical nodes (R=50 Mbps, T=1 ms), 2 ms between hops",
            ),
            tuple(
                _expect("DD", (315.0, 320.0, 309.0), 1.0)
                + _expect("D", (38.7, 43.3, 32.8), 0.5)
                + _expect("e", (12.41, 16.17, 6.10), 0.1)
            ),
        ),
        BuiltinScenario(
            "case2",
            _case2(),
            tuple(
                _expect("DD", (58.9, 59.4, 58.2), 0.1)
                + _expect("jitter", (47.3, 47.8, 46.6), 0.1)
                + _expect("ee", (8.15, 11.78, 3.43), 0.02)
            ),
        ),
        BuiltinScenario(
            "singlehop",
            identical_path(
                "singlehop", hops=1, service_rate=100.0, latency=1.0, delay=0.0,
                flows=_token_bucket_flows(),
                description="One node (R=100 Mbps, T=1 ms)",
            ),
            tuple(
                _expect("DD", (21.0, 23.0, 18.0), 1.0)
                + _expect("ee", (23.2, 30.5, 11.2), 0.2)
            ),
        ),
        BuiltinScenario(
            "singlehop_n2",
            identical_path(
                "singlehop_n2", hops=2, service_rate=100.0, latency=1.0, delay=2.0,
                flows=_token_bucket_flows(),
                description="Single hop counted as source and sink node (R=100 Mbps, T=1 ms)",
            ),
            (),
        ),
        BuiltinScenario(
            "fractal_H075",
            identical_path(
                "fractal_H075", hops=10, service_rate=100.0, latency=1.0, delay=2.0,
                flows=_fractal_flows(_uniform_hurst(0.75)),
                description="Fractal regulators with H=0.75 on ten identical nodes",
            ),
            tuple(_expect("DD", (215.9, 218.9, 212.1), 0.5)),
        ),
        BuiltinScenario(
            "fractal_H095",
            identical_path(
                "fractal_H095", hops=10, service_rate=100.0, latency=1.0, delay=2.0,
                flows=_fractal_flows(_uniform_hurst(0.95)),
                description="Fractal regulators with H=0.95 on ten identical nodes",
            ),
            tuple(_expect("DD", (129.0, 131.0, 127.0), 1.0)),
        ),
        BuiltinScenario(
            "fractal_mixed",
            identical_path(
                "fractal_mixed", hops=10, service_rate=100.0, latency=1.0, delay=2.0,
                flows=_fractal_flows(MIXED_HURST),
                description="Fractal regulators with per-micro-flow Hurst parameters",
            ),
            tuple(_expect("DD", (222.0, 226.0, 218.0), 1.0)),
        ),
    ]
    return {s.name: s for s in scenarios}


BUILTIN_SCENARIOS: dict[str, BuiltinScenario] = _build()


def builtin_names() -> list[str]:
    return list(BUILTIN_SCENARIOS)


def builtin_document(name: str) -> ScenarioDocument:
    """The embedded document of a replication scenario.

    Raises:
        ScenarioError: if no scenario has that name.
    """
    try:
        return BUILTIN_SCENARIOS[name].document
    except KeyError:
        known = ", ".join(BUILTIN_SCENARIOS)
        raise ScenarioError(f"Unknown built-in scenario '{name}' (known: {known})") from None
