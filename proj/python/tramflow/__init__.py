"""Passenger-flow simulation on tram networks."""

import json

from ._tramflow import (
    AdmissibilityViolation,
    ConfigError,
    Model,
    capacity_utilization,
    dwell_delay,
    load_model,
    load_network,
    run_cli,
    sample_arrivals,
    validate,
)
from ._tramflow import simulate as _simulate

__all__ = [
    "AdmissibilityViolation",
    "ConfigError",
    "Model",
    "capacity_utilization",
    "dwell_delay",
    "load_model",
    "load_network",
    "run_cli",
    "sample_arrivals",
    "simulate",
    "validate",
]


def simulate(model, runs=100, seed=0, **scenario):
    """Run a Monte Carlo simulation and return the report as a dict.

    Keyword arguments: scenario (path), headway, cancellation_rate, dwell_mode, threads.
    """
    return json.loads(_simulate(model, runs=runs, seed=seed, **scenario))
