"""Lamplighter word metric, lattice TSP and drift experiments."""

import json

from ._ldl import (
    ConfigError,
    DomainError,
    ResourceError,
    alpha_trial,
    box_tsp,
    connected_set_tour,
    drift_sample,
    exact_tsp,
    sample_walk,
    strip_heuristic,
    word_length,
    word_length_bounds,
)
from . import _ldl

__all__ = [
    "ConfigError",
    "DomainError",
    "ResourceError",
    "alpha_trial",
    "box_tsp",
    "connected_set_tour",
    "drift_sample",
    "exact_tsp",
    "normalized",
    "run",
    "sample_walk",
    "spec_hash",
    "strip_heuristic",
    "validate",
    "word_length",
    "word_length_bounds",
]


def validate(spec):
    """List of problems with an experiment spec (a dict); empty when it can run."""
    return _ldl.validate(json.dumps(spec))


def normalized(spec):
    return json.loads(_ldl.normalized(json.dumps(spec)))


def spec_hash(spec):
    return _ldl.spec_hash(json.dumps(spec))


def run(spec, threads=1):
    """Run an experiment; returns (record dict, csv text)."""
    record, csv = _ldl.run_experiment(json.dumps(spec), threads)
    return json.loads(record), csv
