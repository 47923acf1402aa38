"""Norms, sparsity measures, and small linear-algebra utilities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

_POWER_SEED = 0x5EEDED


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted; carries the best estimate found so far."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


def norm_l0(x, tol: float = 0.0) -> int:
    """Number of entries with magnitude strictly above tol."""
    return int(np.count_nonzero(np.abs(np.asarray(x, dtype=float)) > tol))


def norm_l1(x) -> float:
    return float(np.sum(np.abs(np.asarray(x, dtype=float))))


def norm_l2(x) -> float:
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def effective_sparsity(x, q: float = 2.0) -> float:
    """Effective number of nonzero entries of x, measured with exponent q.

    Defined as (||x||_q / ||x||_1) ** (q / (1 - q)) for q in (0, 1) or
    (1, inf). Lies in [1, n] and equals the support size on flat vectors.
    The limit exponents q in {0, 1, inf} are not implemented.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("effective sparsity is undefined at the zero vector")
    if q <= 0.0 or q == 1.0 or np.isinf(q):
        raise ValueError("exponent q must lie in (0, 1) or (1, inf); "
                         "the limit cases are not implemented")
    a = np.abs(x)
    # normalize by the max to keep a**q away from overflow/underflow
    peak = a.max()
    a = a / peak
    lq = np.sum(a ** q) ** (1.0 / q)
    l1 = np.sum(a)
    return float((lq / l1) ** (q / (1.0 - q)))


def ratio_sq(x) -> float:
    """Squared l1/l2 norm ratio, the effective sparsity with exponent 2."""
    x = np.asarray(x, dtype=float)
    if x.size == 0 or not np.any(x):
        raise ValueError("ratio is undefined at the zero vector")
    # scale-invariant, so normalize by the peak to dodge under/overflow
    a = np.abs(x) / np.abs(x).max()
    return float(np.sum(a)) ** 2 / float(np.dot(a, a))


def ratio_map(x) -> np.ndarray:
    """x scaled by its squared norm ratio; extended by 0 at the origin."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return np.zeros_like(x)
    return ratio_sq(x) * x


def dinkelbach_value(x, alpha: float) -> float:
    """Parametric objective ||x||_1^2 - alpha * ||x||_2^2."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(np.abs(x))) ** 2 - alpha * float(np.dot(x, x))


@dataclass
class SparsityReport:
    nnz: int
    l1: float
    l2: float
    ratio: float      # l1 / l2, always >= 1 for nonzero x
    ratio_sq: float   # (l1 / l2)^2, in [1, n]


def sparsity_report(x, tol: float = 1e-12) -> SparsityReport:
    """Summary of the sparsity measures of a nonzero vector."""
    x = np.asarray(x, dtype=float)
    if x.size == 0 or not np.any(x):
        raise ValueError("report is undefined at the zero vector")
    l1 = norm_l1(x)
    l2 = norm_l2(x)
    rsq = ratio_sq(x)
    return SparsityReport(nnz=norm_l0(x, tol=tol * float(np.abs(x).max())),
                          l1=l1, l2=l2, ratio=math.sqrt(rsq), ratio_sq=rsq)


def largest_gram_eigenvalue(A, tol: float = 1e-10, max_iter: int = 10000) -> float:
    """Largest eigenvalue of A'A by power iteration.

    The start vector is drawn from a fixed-seed generator so results are
    reproducible. Raises ConvergenceError (with .estimate set) if the
    Rayleigh quotient has not stabilized to tol within max_iter steps.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("A must be a nonempty 2-d array")
    if not np.any(A):
        raise ValueError("A must be nonzero")
    rng = np.random.default_rng(_POWER_SEED)
    v = rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        Av = A @ v
        w = A.T @ Av
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start vector fell in the kernel; re-draw and continue
            v = rng.standard_normal(A.shape[1])
            v /= np.linalg.norm(v)
            continue
        lam_new = float(Av @ Av)  # Rayleigh quotient at unit v
        v = w / nw
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-30):
            return lam_new
        lam = lam_new
    raise ConvergenceError(
        f"power iteration did not stabilize in {max_iter} steps", estimate=lam)


def least_norm_solution(A, b, rcond: float = 1e-10) -> np.ndarray:
    """Minimum-l2-norm solution of the least-squares problem min ||Ax - b||.

    Uses the column-pivoted complete orthogonal factorization; singular
    values below rcond times the largest are treated as zero.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x, _, _, _ = scipy.linalg.lstsq(A, b, cond=rcond, lapack_driver="gelsy")
    return x
