"""Proximal operators and projections used by the splitting solver."""
from __future__ import annotations

import numpy as np


def soft_threshold(x, t: float) -> np.ndarray:
    """Proximal operator of t * ||.||_1 (componentwise shrinkage)."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def project_ball(u, center, radius: float) -> np.ndarray:
    """Euclidean projection of u onto the ball ||v - center|| <= radius."""
    u = np.asarray(u, dtype=float)
    center = np.asarray(center, dtype=float)
    if radius < 0.0:
        raise ValueError("radius must be nonnegative")
    d = u - center
    nd = float(np.linalg.norm(d))
    if nd <= radius:
        return u.copy()
    if radius == 0.0:
        return center.copy()
    return center + (radius / nd) * d


def signed_sort(x):
    """Decompose x into (magnitudes, order, signs) with magnitudes nonincreasing.

    `order` is the index permutation (stable under ties, so equal magnitudes
    keep their original relative position) and `signs` the corresponding signs,
    so that x[order] == signs * magnitudes.
    """
    x = np.asarray(x, dtype=float)
    order = np.argsort(-np.abs(x), kind="stable")
    mags = np.abs(x)[order]
    signs = np.sign(x)[order]
    return mags, order, signs


def prox_l1_squared(x, beta: float) -> np.ndarray:
    """Proximal operator of beta * ||.||_1^2.

    Computes argmin_u beta * ||u||_1^2 + 0.5 * ||u - x||_2^2 exactly, in
    O(n log n): sort magnitudes, scan for the support size k at which the
    running threshold becomes self-consistent, shrink the k largest
    magnitudes by it, and zero the rest.

    Parameters
    ----------
    x : array_like
        Input vector.
    beta : float
        Positive weight of the squared l1 term.

    Returns
    -------
    ndarray
        The proximal point, with the same shape as x. The zero vector maps
        to itself.
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    x = np.asarray(x, dtype=float)
    n = x.size
    if n == 0 or not np.any(x):
        return np.zeros_like(x)
    mags, order, signs = signed_sort(x)
    running = np.cumsum(mags) / (2.0 * beta * np.arange(1, n + 1) + 1.0)
    # first k (1-based) with mags[k] <= 2*beta*running[k-1]; else the full support
    below = mags[1:] <= 2.0 * beta * running[:-1]
    k = int(np.argmax(below)) + 1 if below.any() else n
    thr = 2.0 * beta * running[k - 1]
    shrunk = np.zeros(n)
    shrunk[:k] = mags[:k] - thr
    out = np.zeros(n)
    out[order] = signs * shrunk
    return out
