"""Two-stage maximum score estimation."""

import json as _json

from ._tsms import (
    ComputationError,
    ValidationError,
    estimate,
    exact_argmax_2d,
    first_stage,
    fit_loglog_slope,
    ms_criterion,
    optimal_bandwidth,
    population_identity_check,
    simulate_binary,
    simulate_multi_index,
    sms_criterion,
    theoretical_rate,
    tsms_criterion,
)
from ._tsms import run_experiment as _run_experiment


def run_experiment(**config):
    """Run a rate experiment; keyword arguments are config keys (n_grid may be a list)."""
    flat = {}
    for key, value in config.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        flat[key] = str(value)
    return _json.loads(_run_experiment(flat))


__all__ = [
    "ComputationError",
    "ValidationError",
    "estimate",
    "exact_argmax_2d",
    "first_stage",
    "fit_loglog_slope",
    "ms_criterion",
    "optimal_bandwidth",
    "population_identity_check",
    "run_experiment",
    "simulate_binary",
    "simulate_multi_index",
    "sms_criterion",
    "theoretical_rate",
    "tsms_criterion",
]
