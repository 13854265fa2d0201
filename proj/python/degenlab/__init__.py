"""Python access to the degenlab C++ core."""

import json

from ._degenlab import (
    ConvergenceError,
    DegenError,
    DivergenceError,
    Grid,
    InstabilityError,
    ValidationError,
    frequency_sweep,
    garding_defect,
    l2_norm,
    picard_solve,
    reparametrization_identity,
    set_workers,
    theta,
    w_alpha,
)
from . import _degenlab

__all__ = [
    "ConvergenceError",
    "DegenError",
    "DivergenceError",
    "Grid",
    "InstabilityError",
    "ValidationError",
    "config_hash",
    "frequency_sweep",
    "garding_defect",
    "l2_norm",
    "normalize_config",
    "picard_solve",
    "reparametrization_identity",
    "run",
    "set_workers",
    "theta",
    "w_alpha",
]


def normalize_config(config):
    """Validated config dict with every default filled in."""
    return json.loads(_degenlab._normalize_config(json.dumps(config)))


def config_hash(config):
    return _degenlab._config_hash(json.dumps(config))


def run(config):
    """Runs an experiment; returns (exit_code, summary dict)."""
    code, summary = _degenlab._run(json.dumps(config))
    return code, json.loads(summary)
