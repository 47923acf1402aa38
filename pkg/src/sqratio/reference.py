"""Slow but independently derived reference computations used for checking."""
from __future__ import annotations

import numpy as np


def prox_l1_squared_reference(x, beta: float, tol: float = 1e-14) -> np.ndarray:
    """Proximal point of beta * ||.||_1^2 via a scalar fixed-point bisection.

    The minimizer has the form u = soft_threshold(x, 2 beta L) where L must
    equal ||u||_1. The map L -> ||soft_threshold(x, 2 beta L)||_1 is
    continuous and nonincreasing, so g(L) = L - ||u(L)||_1 has a unique root
    that bisection brackets between 0 and ||x||_1.
    """
    x = np.asarray(x, dtype=float)
    if beta <= 0:
        raise ValueError("beta must be positive")

    def l1_after(L):
        return float(np.sum(np.maximum(np.abs(x) - 2.0 * beta * L, 0.0)))

    lo, hi = 0.0, float(np.sum(np.abs(x)))
    if hi == 0.0:
        return np.zeros_like(x)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid - l1_after(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    L = 0.5 * (lo + hi)
    return np.sign(x) * np.maximum(np.abs(x) - 2.0 * beta * L, 0.0)
