"""Discrete-event simulation of a PBSS: scenarios, kernel, metrics."""

from wigig.sim.kernel import KIND_RANK, EventQueue, RunResult, Simulator, run
from wigig.sim.metrics import (METRICS_COLUMNS, TRACE_COLUMNS, Metrics, metrics_csv,
                               parse_metrics_csv, parse_trace_csv, report, trace_csv)
from wigig.sim.scenario import (Scenario, as_scenario, load_scenario, parse_scenario,
                                shipped_scenarios, validate)

__all__ = [
    "KIND_RANK", "METRICS_COLUMNS", "TRACE_COLUMNS",
    "EventQueue", "Metrics", "RunResult", "Scenario", "Simulator",
    "as_scenario", "load_scenario", "metrics_csv", "parse_metrics_csv", "parse_scenario",
    "parse_trace_csv", "report", "run", "shipped_scenarios", "trace_csv", "validate",
]
