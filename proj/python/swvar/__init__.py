"""Sparse VAR estimation under subweibull noise."""

import io
import json

import numpy as np

from . import _core
from ._core import (
    ConfigError,
    InsufficientDataError,
    IoError,
    NumericalError,
    ParameterError,
    StabilityError,
    StructuralError,
    SwvarError,
    TruncationError,
    dantzig,
    dependence_report,
    eval_errors,
    fit_var_lowrank_sparse,
    gen_sparse_transition,
    ols,
    predict,
    simulate_var,
    solve_lyapunov,
)

__version__ = _core.__version__

L1 = {"type": "l1"}


def _penalty(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def penalty_value(spec, v):
    return _core.penalty_value(_penalty(spec), np.asarray(v, dtype=float))


def penalty_dual(spec, u):
    return _core.penalty_dual(_penalty(spec), np.asarray(u, dtype=float))


def penalty_prox(spec, u, tau):
    return _core.penalty_prox(_penalty(spec), np.asarray(u, dtype=float), tau)


def lasso(X, Y, lam, penalty=L1):
    """FISTA fit of (1/n)||Y - X B||^2 + lam * penalty(B)."""
    return _core.lasso(X, np.asarray(Y, dtype=float).reshape(len(Y), -1), lam, _penalty(penalty))


def fit_var(data, d=1, penalty=L1, lam=None):
    """Regularized VAR(d) fit; lam=None selects lambda on a held-out tail."""
    return _core.fit_var(data, d, _penalty(penalty), lam)


def run_experiment(name, config=None, threads=1, format="csv"):
    """Runs figsw, ls_tables or concentration and returns the emitted text."""
    return _core.run_experiment(name, json.dumps(config or {}), threads, format)


def run_experiment_table(name, config=None, threads=1):
    """Same as run_experiment, parsed into a list of row dicts."""
    import csv

    text = run_experiment(name, config, threads, "csv")
    return list(csv.DictReader(io.StringIO(text)))
