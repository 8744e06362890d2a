"""Scenario documents, built-in replication scenarios, reports and sweeps."""

from wsncalc.scenarios.builtin import (
    BUILTIN_PREFIX,
    BUILTIN_SCENARIOS,
    VERSION_PIN,
    BuiltinScenario,
    Expectation,
    builtin_document,
    builtin_names,
)
from wsncalc.scenarios.loader import (
    dump_scenario,
    load_scenario,
    parse_scenario,
    resolve_scenario,
    to_path_scenario,
)
from wsncalc.scenarios.models import ScenarioDocument, UnitsBlock
from wsncalc.scenarios.replicate import (
    ReplicationCheck,
    ReplicationResult,
    render_replication_table,
    replicate,
    write_replication,
)
from wsncalc.scenarios.report import BoundsReport, ReportFormat, ReportScope, render, run_report
from wsncalc.scenarios.sweep import SweepParam, SweepRow, render_sweep_csv, sweep, sweep_values

__all__ = [
    "BUILTIN_PREFIX",
    "BUILTIN_SCENARIOS",
    "VERSION_PIN",
    "BoundsReport",
    "BuiltinScenario",
    "Expectation",
    "ReplicationCheck",
    "ReplicationResult",
    "ReportFormat",
    "ReportScope",
    "ScenarioDocument",
    "SweepParam",
    "SweepRow",
    "UnitsBlock",
    "builtin_document",
    "builtin_names",
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "render",
    "render_replication_table",
    "render_sweep_csv",
    "replicate",
    "resolve_scenario",
    "run_report",
    "sweep",
    "sweep_values",
    "to_path_scenario",
]
