"""Rich-club analytics for weighted temporal networks."""

import json

from ._richclub import (
    ConfigError,
    GeometryError,
    InputError,
    RichClubError,
    TemporalNetwork,
    flow_sum_timeseries,
    minmax_regression,
    network_from_records,
    read_flow_csv,
)
from . import _richclub

__all__ = [
    "ConfigError",
    "GeometryError",
    "InputError",
    "RichClubError",
    "TemporalNetwork",
    "flow_sum_timeseries",
    "generate_planted",
    "minmax_regression",
    "network_from_records",
    "read_flow_csv",
    "scan",
]


def scan(network, **settings):
    """Run a (threshold, duration) scan; settings use the config-file keys
    with underscores or dashes (metric, k_values, nulls, seed, ...).
    Returns the result document as a dict."""
    return json.loads(_richclub.scan_json(network, settings))


def generate_planted(**settings):
    """Returns (network, truth) for a planted-club instance."""
    network, truth = _richclub.generate_planted(settings)
    return network, json.loads(truth)
