"""Seeded generators for sensing matrices, sparse signals, and measurements."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

FAMILIES = ("dct", "gaussian", "rank-deficient")
AUGMENTATIONS = ("copy", "combine")
MAGNITUDES = ("dynamic-range", "gaussian")

# purpose split order of the counter-based streams; changing it changes every
# seeded artifact, so it is part of the file-format contract
_STREAMS = {"matrix": 0, "signal": 1, "noise": 2}

_SEED_MASK = (1 << 64) - 1


def rng_stream(seed: int, purpose: str) -> np.random.Generator:
    """Counter-based generator for one purpose ("matrix", "signal", "noise")."""
    if purpose not in _STREAMS:
        raise ValueError(f"unknown stream purpose {purpose!r}")
    ss = np.random.SeedSequence(entropy=int(seed) & _SEED_MASK,
                                spawn_key=(_STREAMS[purpose],))
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class MatrixSpec:
    family: str = "dct"
    m: int = 64                    # rows; base rows for rank-deficient
    n: int = 1024
    oversampling: float = 1.0      # redundancy of the sampled-cosine grid
    row_correlation: float = 0.0   # pairwise row correlation, gaussian family
    extra_rows: int = 5            # appended rows, rank-deficient family
    augmentation: str = "copy"     # "copy" or "combine"
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.family in ("dct", "rank-deficient") and self.oversampling <= 0:
            raise ValueError("oversampling must be positive")
        if self.family == "gaussian" and not 0.0 <= self.row_correlation < 1.0:
            raise ValueError("row correlation must lie in [0, 1)")
        if self.family == "rank-deficient":
            if self.augmentation not in AUGMENTATIONS:
                raise ValueError(f"unknown augmentation {self.augmentation!r}")
            if not 1 <= self.extra_rows <= self.m:
                raise ValueError("extra_rows must lie in [1, m]")


@dataclass
class SignalSpec:
    n: int = 1024
    s: int = 5                         # support size
    magnitude: str = "dynamic-range"   # "dynamic-range" or "gaussian"
    dynamic_range: float = 3.0         # log10 of the magnitude spread
    min_separation: int = 1            # minimum index gap between support points
    seed: int = 0

    def __post_init__(self):
        if self.magnitude not in MAGNITUDES:
            raise ValueError(f"unknown magnitude model {self.magnitude!r}")
        if not 1 <= self.s <= self.n:
            raise ValueError("s must lie in [1, n]")
        if self.min_separation < 1:
            raise ValueError("min_separation must be >= 1")
        if self.s * self.min_separation > self.n:
            raise ValueError("support of size s with the requested separation "
                             "does not fit in n entries")


@dataclass
class NoiseSpec:
    sigma: float = 0.0
    eps_factor: float = 1.2
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")
        if self.eps_factor < 1.0:
            raise ValueError("eps_factor must be >= 1")


def _sampled_cosines(m: int, n: int, oversampling: float,
                     rng: np.random.Generator) -> np.ndarray:
    # column j is cos(2*pi*j*w / oversampling) / sqrt(m), j = 1..n, one shared
    # frequency draw w per matrix
    w = rng.uniform(0.0, 1.0, m)
    j = np.arange(1, n + 1, dtype=float)
    return np.cos((2.0 * np.pi / oversampling) * np.outer(w, j)) / math.sqrt(m)


def generate_matrix(spec: MatrixSpec) -> np.ndarray:
    """Draw the sensing matrix described by spec (deterministic in spec.seed)."""
    rng = rng_stream(spec.seed, "matrix")
    if spec.family == "dct":
        return _sampled_cosines(spec.m, spec.n, spec.oversampling, rng)
    if spec.family == "gaussian":
        # rows share a common component so each pair correlates at r while
        # every entry stays standard normal
        r = spec.row_correlation
        shared = rng.standard_normal((1, spec.n))
        private = rng.standard_normal((spec.m, spec.n))
        return math.sqrt(r) * shared + math.sqrt(1.0 - r) * private
    # rank-deficient: base grid first, then the augmentation draws, so the
    # base block matches the plain "dct" matrix for the same seed
    A = _sampled_cosines(spec.m, spec.n, spec.oversampling, rng)
    rows = rng.choice(spec.m, size=spec.extra_rows, replace=False)
    if spec.augmentation == "copy":
        extra = A[rows]
    else:
        coef = rng.standard_normal((spec.extra_rows, spec.extra_rows))
        extra = coef @ A[rows]
    return np.vstack([A, extra])


def generate_signal(spec: SignalSpec) -> np.ndarray:
    """Draw a sparse signal with separated support (deterministic in spec.seed)."""
    rng = rng_stream(spec.seed, "signal")
    idx = _separated_support(spec.n, spec.s, spec.min_separation, rng)
    x = np.zeros(spec.n)
    if spec.magnitude == "dynamic-range":
        signs = np.sign(rng.standard_normal(spec.s))
        signs[signs == 0] = 1.0
        x[idx] = signs * 10.0 ** (spec.dynamic_range * rng.uniform(0.0, 1.0, spec.s))
    else:
        x[idx] = rng.standard_normal(spec.s)
    return x


def _separated_support(n: int, s: int, sep: int,
                       rng: np.random.Generator) -> np.ndarray:
    if s == 1:
        return rng.choice(n, size=1)
    for _ in range(10000):
        idx = np.sort(rng.choice(n, size=s, replace=False))
        if int(np.min(np.diff(idx))) >= sep:
            return idx
    # dense regime: lay the support on a sep-spaced grid and spread the slack
    # with sorted offsets, which keeps every gap >= sep
    slack = n - 1 - (s - 1) * sep
    offsets = np.sort(rng.integers(0, slack + 1, size=s))
    return np.arange(s) * sep + offsets


def synthesize_measurements(A, x, noise: NoiseSpec):
    """Measurements b = A x + sigma * xi and the matched residual bound.

    Returns (b, eps) with eps = eps_factor * ||sigma * xi||_2, or eps = 0
    for the noiseless case sigma = 0.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    b = A @ x
    if noise.sigma == 0.0:
        return b, 0.0
    xi = rng_stream(noise.seed, "noise").standard_normal(A.shape[0])
    b = b + noise.sigma * xi
    return b, noise.eps_factor * noise.sigma * float(np.linalg.norm(xi))


def mutual_coherence(A) -> float:
    """Largest absolute inner product between distinct normalized columns."""
    A = np.asarray(A, dtype=float)
    G = A / np.linalg.norm(A, axis=0, keepdims=True)
    M = np.abs(G.T @ G)
    np.fill_diagonal(M, 0.0)
    return float(M.max())
