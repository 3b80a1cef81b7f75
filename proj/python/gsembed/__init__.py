"""Compactness, nuclearity and entropy numbers of embeddings between Besov
spaces of generalised smoothness.

Sequences are written in the gsembed DSL, e.g. ``"2^(2*j) * (1+j)^(-1)"``.
Problems and sections are plain dicts with the same keys as the CLI JSON.
"""

import json as _json
import os as _os

from . import _core

__all__ = [
    "render",
    "evaluate",
    "boyd",
    "admissible",
    "equivalent",
    "standardize",
    "tong",
    "dual_star",
    "analyze",
    "section_from_problem",
    "lab_norm",
    "lab_nuclear",
    "lab_entropy",
    "reproduce",
    "run_cli",
]

_CORPUS = _os.path.join(_os.path.dirname(__file__), "data", "corpus.json")


def _enc(x):
    return x if isinstance(x, str) else _json.dumps(x)


def _exp(x):
    return "inf" if x == float("inf") else str(x)


def render(expr):
    return _core.render(expr)


def evaluate(expr, j):
    """(value, log2 value) of gamma_j; value is None on overflow/underflow."""
    return _core.eval(expr, j)


def boyd(expr, K=256):
    return _json.loads(_core.boyd(expr, K))


def admissible(expr, window=64):
    return _json.loads(_core.admissible(expr, window))


def equivalent(a, b, window=64):
    return _json.loads(_core.equivalent(a, b, window))


def standardize(sigma, N, kappa0=None, prefix=64):
    return _json.loads(_core.standardize(sigma, N, kappa0, prefix))


def tong(r1, r2):
    return _core.tong(_exp(r1), _exp(r2))


def dual_star(r1, r2):
    return _core.dual_star(_exp(r1), _exp(r2))


def analyze(problem, kind="classify"):
    return _json.loads(_core.analyze(_enc(problem), kind))


def section_from_problem(problem, L, c=1.0):
    return _json.loads(_core.section_from_problem(_enc(problem), L, c))


def lab_norm(section, iters=200, seed=1):
    return _json.loads(_core.lab_norm(_enc(section), iters, seed))


def lab_nuclear(section):
    return _json.loads(_core.lab_nuclear(_enc(section)))


def lab_entropy(section, ks):
    return _json.loads(_core.lab_entropy(_enc(section), list(ks)))


def run_cli(*args):
    """(exit code, stdout, stderr) of the command-line front end."""
    return _core.run_cli([str(a) for a in args])


def reproduce(case_id="all", corpus=None):
    path = corpus or (_CORPUS if _os.path.exists(_CORPUS) else None)
    args = ["reproduce", case_id] + (["--corpus", path] if path else [])
    code, out, err = run_cli(*args)
    if code == 1:
        raise ValueError(err.strip())
    return _json.loads(out)
