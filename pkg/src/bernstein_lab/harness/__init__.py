from .experiments import (
    Assertion,
    ExperimentError,
    ExperimentReport,
    ExperimentSpec,
    config_hash,
    run_example34,
    run_experiment,
    run_pp_sweep,
    run_prop33_sweep,
    run_prop35,
    run_thm46,
)
from .reports import emit_report, report_from_dict, report_to_dict, to_json

__all__ = [
    "Assertion", "ExperimentError", "ExperimentReport", "ExperimentSpec", "config_hash", "run_example34",
    "run_experiment", "run_pp_sweep", "run_prop33_sweep", "run_prop35", "run_thm46", "emit_report",
    "report_from_dict", "report_to_dict", "to_json",
]
