"""Python front end for the confsel C++ core."""

import json

from ._confsel import (
    ConfigError,
    InfeasibleBenchmark,
    InvalidInput,
    aci_path,
    coverage_bound,
    greedy_or_chain,
    interval_benchmark,
    lp_benchmark,
    newsvendor_benchmark,
    point_cdf,
    poisson_newsvendor_benchmark,
    preset_names,
    sublinearity_fit,
)
from . import _confsel


def preset(name):
    """Variant configs of a built-in preset, as dicts."""
    return [json.loads(t) for t in _confsel.preset_configs(name)]


def oracle(config):
    return json.loads(_confsel.oracle_json(json.dumps(config)))


def run(config, jobs=1):
    """Run all replicas of a config dict and return the metrics dict."""
    return json.loads(_confsel.run_config_json(json.dumps(config), jobs))


def trace_csv(config, replica=0):
    return _confsel.run_trace_csv(json.dumps(config), replica)


__all__ = [
    "ConfigError",
    "InfeasibleBenchmark",
    "InvalidInput",
    "aci_path",
    "coverage_bound",
    "greedy_or_chain",
    "interval_benchmark",
    "lp_benchmark",
    "newsvendor_benchmark",
    "oracle",
    "point_cdf",
    "poisson_newsvendor_benchmark",
    "preset",
    "preset_names",
    "run",
    "sublinearity_fit",
    "trace_csv",
]
