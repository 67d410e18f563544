"""Python access to the hawkes_heston C++ core.

Configs are plain dicts with the same layout as the CLI's JSON config files.
Passing ``None`` uses the default parameter set.
"""

import json

from . import _hhsv
from ._hhsv import ConfigError, ValidationError, classify

__all__ = [
    "ConfigError",
    "ValidationError",
    "c_bounds",
    "classify",
    "default_config",
    "emm",
    "exp_moment",
    "martingale",
    "simulate",
    "solve_odes",
    "verify",
]


def _cfg(config):
    return "" if config is None else json.dumps(config)


def default_config():
    return json.loads(_hhsv.default_config())


def c_bounds(config=None):
    """c_s, c_l and the Riccati cap."""
    return json.loads(_hhsv.c_bounds(_cfg(config)))


def solve_odes(c, config=None, steps=1000):
    return json.loads(_hhsv.solve_odes(_cfg(config), c, steps))


def simulate(n_paths, config=None, steps=100, seed=42):
    return json.loads(_hhsv.simulate(_cfg(config), n_paths, steps, seed))


def exp_moment(c_values, n_paths, config=None, steps=100, seed=42, workers=1):
    return json.loads(_hhsv.exp_moment(_cfg(config), list(c_values), n_paths, steps, seed, workers))


def martingale(a_values, n_paths, config=None, steps=100, seed=42, workers=1):
    return json.loads(_hhsv.martingale(_cfg(config), list(a_values), n_paths, steps, seed, workers))


def emm(a, n_paths, config=None, steps=100, seed=42, workers=1):
    return json.loads(_hhsv.emm(_cfg(config), a, n_paths, steps, seed, workers))


def verify(suite="quick", config=None, seed=42, workers=1):
    """Runs a named suite and returns its JSON report as a dict."""
    return json.loads(_hhsv.verify(suite, _cfg(config), seed, workers))
