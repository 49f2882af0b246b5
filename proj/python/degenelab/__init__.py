"""Radial finite element solver and certificate suite for degenerate elliptic problems.

Reports come back as plain dicts with the same keys as the JSON artifacts
written by the ``degenelab`` command-line tool.
"""

import json

from ._degenelab import (
    Error,
    ManufacturedSolution,
    lower_order_term,
    substitution_v,
    substitution_v_inverse,
    substitution_z,
    truncate,
)
from . import _degenelab

__all__ = [
    "Error",
    "ManufacturedSolution",
    "dirac_experiment",
    "lower_order_term",
    "mms_study",
    "run",
    "solve",
    "substitution_v",
    "substitution_v_inverse",
    "substitution_z",
    "truncate",
]


def solve(gamma=2.0, n=160, datum=None, **config):
    """Solve the truncated problem with datum T_n(f).

    ``datum`` is either a callable ``f(r)`` (sampled piecewise-linearly on the
    mesh) or a config datum name; the remaining keyword arguments are config
    keys such as ``N``, ``elements``, ``coefficient`` or ``datum_params``.
    Returns the solve report with the solution under ``"solution"``.
    """
    cfg = dict(config, command="solve", gamma=gamma, n_list=[n])
    fn = None
    if callable(datum):
        fn = datum
        cfg["datum"] = "zero"
    elif datum is not None:
        cfg["datum"] = datum
    return json.loads(_degenelab._solve(json.dumps(cfg), fn))


def mms_study(sigma=1.5, dimension=5, gamma=2.0, elements=(64, 128, 256, 512), n_list=None):
    """Manufactured-solution convergence study; n_list defaults to 160 (M/64)^3."""
    elements = list(elements)
    if n_list is None:
        n_list = [round(160 * (m / 64) ** 3) for m in elements]
    return json.loads(_degenelab._mms_study(sigma, dimension, gamma, elements, list(n_list)))


def dirac_experiment(gamma=2.0, dimension=3, n_list=(8, 16, 32, 64), r_cut=0.2):
    """Concentrating-data experiment; verdicts under ``"verdicts"``."""
    return json.loads(_degenelab._dirac_experiment(gamma, dimension, list(n_list), r_cut))


def run(config):
    """Run a full CLI pipeline from a config dict; returns (exit_code, summary_text)."""
    return _degenelab._run(json.dumps(config))
