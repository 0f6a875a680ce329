"""Scenario configuration, sweep runner, and figure emission."""

from .scenario import (DEFAULTS, Scenario, ScenarioError, load_scenario,
                       save_scenario, scenario_from_mapping, scenario_to_mapping)
from .sweep import ResultRow, apply_sweep_value, rows_to_csv, run_sweep
from .psdfig import PsdFigure, emit_psd_figure, figure_to_csv, figure_to_svg

__all__ = [
    "DEFAULTS", "Scenario", "ScenarioError", "load_scenario", "save_scenario",
    "scenario_from_mapping", "scenario_to_mapping",
    "ResultRow", "apply_sweep_value", "rows_to_csv", "run_sweep",
    "PsdFigure", "emit_psd_figure", "figure_to_csv", "figure_to_svg",
]
