"""In-degree distribution estimation from sampled directed networks."""

import json as _json

from . import _indeg
from ._indeg import (
    ConfigError,
    DataError,
    IndegError,
    NumericalError,
    __version__,
    build_ps,
    cs_factor,
    explicit_inverse_nr,
    fit_power_law,
    generate,
    in_degree_counts,
    log10_condition_number,
    sample_counts,
    solve_qp,
    tv_distance,
)


def estimate(counts, scheme, population, budget, **kwargs):
    """Run every estimator on sample counts; diagnostics come back as dicts."""
    out = _indeg.estimate(list(counts), scheme, population, budget, **kwargs)
    out["diagnostics"] = _json.loads(out["diagnostics"])
    out["skipped"] = _json.loads(out["skipped"])
    return out


def run_experiment(config):
    """Run an experiment from a config dict; returns the report dict."""
    return _json.loads(_indeg.run_experiment(_json.dumps(config)))


__all__ = [
    "ConfigError",
    "DataError",
    "IndegError",
    "NumericalError",
    "__version__",
    "build_ps",
    "cs_factor",
    "estimate",
    "explicit_inverse_nr",
    "fit_power_law",
    "generate",
    "in_degree_counts",
    "log10_condition_number",
    "run_experiment",
    "sample_counts",
    "solve_qp",
    "tv_distance",
]
