"""Export recovery subproblems as standalone quadratic programs.

Two flavors are produced on the nonnegative split variable v = [x_pos; x_neg]:

* ``exact-indefinite``: the parametric objective (sum v)^2 is kept whole,
  so the quadratic matrix is the structured indefinite H(alpha).
* ``linearized-convex``: the squared-norm term is linearized at a reference
  point c, leaving the rank-one PSD quadratic (sum v)^2 plus a linear term.

The interchange format is JSON with every real number rendered through
``repr`` so round-trips are exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .quadform import split_signs
from .solver import RecoveryProblem

SCHEMA = "tau2-qp/1"
MODES = ("exact-indefinite", "linearized-convex")


@dataclass(eq=False)
class QpExport:
    mode: str
    alpha: float
    A: np.ndarray
    b: np.ndarray
    eps: float
    c: np.ndarray | None = None   # linearization point, linearized mode only

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


def export_qp(problem: RecoveryProblem, alpha: float, mode: str,
              c=None) -> QpExport:
    """Build the split-variable QP for one parametric subproblem."""
    if mode not in MODES:
        raise ValueError(f"unknown export mode {mode!r}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if mode == "linearized-convex":
        if c is None:
            raise ValueError("the linearized export needs a linearization point")
        c = np.asarray(c, dtype=float)
        if c.shape != (problem.A.shape[1],):
            raise ValueError("linearization point has the wrong length")
        if not np.all(np.isfinite(c)):
            raise ValueError("linearization point must be finite")
    else:
        c = None
    return QpExport(mode=mode, alpha=float(alpha), A=problem.A.copy(),
                    b=problem.b.copy(), eps=float(problem.eps),
                    c=None if c is None else c.copy())


def objective_value(exp: QpExport, v) -> float:
    """Evaluate the exported objective at a split point v = [u; w]."""
    v = np.asarray(v, dtype=float)
    if v.shape != (2 * exp.n,):
        raise ValueError("point has the wrong length")
    u, w = v[:exp.n], v[exp.n:]
    total = float(v.sum()) ** 2
    if exp.mode == "exact-indefinite":
        d = u - w
        return total - exp.alpha * float(d @ d)
    return total - 2.0 * exp.alpha * float(exp.c @ (u - w))


def quadratic_matrix(exp: QpExport) -> np.ndarray:
    """Dense quadratic matrix of the exported objective (v' Q v [+ q' v])."""
    n = exp.n
    if exp.mode == "exact-indefinite":
        from .quadform import RatioQuadraticForm
        return RatioQuadraticForm(n, exp.alpha).dense()
    return np.ones((2 * n, 2 * n))


def linear_term(exp: QpExport) -> np.ndarray:
    """Linear coefficient vector of the exported objective."""
    n = exp.n
    if exp.mode == "exact-indefinite":
        return np.zeros(2 * n)
    return -2.0 * exp.alpha * np.concatenate([exp.c, -exp.c])


def constraint_violation(exp: QpExport, v) -> float:
    """Worst violation of the exported constraints at a split point."""
    v = np.asarray(v, dtype=float)
    u, w = v[:exp.n], v[exp.n:]
    res = float(np.linalg.norm(exp.A @ (u - w) - exp.b))
    data = res if exp.eps == 0.0 else max(res - exp.eps, 0.0)
    return max(data, float(np.max(-v, initial=0.0)))


def _real(x: float) -> str:
    return repr(float(x))


def _reals(arr) -> list:
    return [_real(x) for x in np.asarray(arr, dtype=float).ravel()]


def save_qp(exp: QpExport, path) -> None:
    doc = {
        "schema": SCHEMA,
        "mode": exp.mode,
        "m": exp.m,
        "n": exp.n,
        "alpha": _real(exp.alpha),
        "eps": _real(exp.eps),
        "A": [_reals(row) for row in exp.A],
        "b": _reals(exp.b),
    }
    if exp.mode == "linearized-convex":
        doc["c"] = _reals(exp.c)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_qp(path) -> QpExport:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    mode = doc["mode"]
    if mode not in MODES:
        raise ValueError(f"unknown export mode {mode!r}")
    m, n = int(doc["m"]), int(doc["n"])
    A = np.array([[float(x) for x in row] for row in doc["A"]], dtype=float)
    b = np.array([float(x) for x in doc["b"]], dtype=float)
    if A.shape != (m, n) or b.shape != (m,):
        raise ValueError("matrix dimensions do not match the header")
    c = None
    if mode == "linearized-convex":
        c = np.array([float(x) for x in doc["c"]], dtype=float)
        if c.shape != (n,):
            raise ValueError("linearization point has the wrong length")
    return QpExport(mode=mode, alpha=float(doc["alpha"]), A=A, b=b,
                    eps=float(doc["eps"]), c=c)


__all__ = ["SCHEMA", "MODES", "QpExport", "export_qp", "objective_value",
           "quadratic_matrix", "linear_term", "constraint_violation",
           "save_qp", "load_qp", "split_signs"]
