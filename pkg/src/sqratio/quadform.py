"""Quadratic-form view of the norm-ratio objective and exact small-kernel analysis.

On the nonnegative split v = [x_pos; x_neg] the parametric objective
||x||_1^2 - alpha ||x||_2^2 becomes the quadratic form of the structured
symmetric matrix

    H(alpha) = [[ee' - alpha I, ee' + alpha I],
                [ee' + alpha I, ee' - alpha I]],

whose spectrum is known in closed form (2n once, 0 with multiplicity n-1,
-2 alpha with multiplicity n). For instances whose kernel has dimension one
or two, the module also computes the exact minimum kernel ratio, the optimal
ratio over the feasible set, and the parametric infimum by parameterized
search, which gives ground truth for the iterative solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .linalg import least_norm_solution, norm_l1

_EQ_TOL = 1e-9       # relative tolerance for "alpha sits at the threshold"
_ATTAIN_TOL = 1e-6   # relative margin for attained-vs-limit classification


# ---------------------------------------------------------------------------
# the structured quadratic form

@dataclass
class RatioQuadraticForm:
    """Implicit 2n x 2n matrix H(alpha) acting on split vectors [u; w]."""
    n: int
    alpha: float

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        u, w = v[:self.n], v[self.n:]
        s = float(u.sum() + w.sum())
        d = self.alpha * (u - w)
        return np.concatenate([s - d, s + d])

    def quad(self, v) -> float:
        """v' H v, evaluated in O(n) from the closed form."""
        v = np.asarray(v, dtype=float)
        u, w = v[:self.n], v[self.n:]
        d = u - w
        return float(v.sum()) ** 2 - self.alpha * float(d @ d)

    def dense(self) -> np.ndarray:
        n = self.n
        ones = np.ones((n, n))
        eye = np.eye(n)
        return np.block([[ones - self.alpha * eye, ones + self.alpha * eye],
                         [ones + self.alpha * eye, ones - self.alpha * eye]])


def split_signs(x) -> np.ndarray:
    """Nonnegative split v = [positive part; negative part] of x."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([np.maximum(x, 0.0), np.maximum(-x, 0.0)])


def expected_spectrum(n: int, alpha: float) -> np.ndarray:
    """Sorted eigenvalues of H(alpha): {2n, 0 (n-1 times), -2 alpha (n times)}."""
    return np.sort(np.concatenate([[2.0 * n],
                                   np.zeros(n - 1),
                                   np.full(n, -2.0 * alpha)]))


def dct2_matrix(n: int) -> np.ndarray:
    """Orthonormal type-II discrete cosine transform matrix."""
    i = np.arange(n, dtype=float)[:, None]
    j = np.arange(n, dtype=float)[None, :]
    D = math.sqrt(2.0 / n) * np.cos(i * (2.0 * j + 1.0) * np.pi / (2.0 * n))
    D[0, :] = math.sqrt(1.0 / n)
    return D


def mixing_matrix(n: int) -> np.ndarray:
    """Orthogonal block mixer pairing the two halves of the split space."""
    S = np.diag(np.concatenate([[1.0], -np.ones(n - 1)]))
    eye = np.eye(n)
    return (math.sqrt(2.0) / 2.0) * np.block([[eye, eye], [S, -S]])


@dataclass
class SpectrumCheck:
    n: int
    alpha: float
    eigenvalue_error: float
    reconstruction_error: float
    orientations: list
    ok: bool


def verify_spectrum(n: int, alpha: float, tol: float = 1e-8) -> SpectrumCheck:
    """Check the closed-form spectrum and factorization of H(alpha) densely.

    The factorization H = (D', D')-conjugated E' diag E holds in two
    transpose conventions; both are tested and the ones that reconstruct H
    within tol are reported.
    """
    if n > 64:
        raise ValueError("dense verification is limited to n <= 64")
    if n < 2:
        raise ValueError("need n >= 2")
    form = RatioQuadraticForm(n, alpha)
    H = form.dense()
    eig_err = float(np.max(np.abs(np.sort(np.linalg.eigvalsh(H))
                                  - expected_spectrum(n, alpha))))
    D = dct2_matrix(n)
    bd = scipy.linalg.block_diag(D, D)
    E = mixing_matrix(n)
    lam_structural = np.concatenate([[2.0 * n], np.zeros(n - 1),
                                     np.full(n, -2.0 * alpha)])
    lam_stated = np.concatenate([[2.0 * n], np.full(n, -2.0 * alpha),
                                 np.zeros(n - 1)])
    combos = (("structural-order, direct", lam_structural, E),
              ("stated-order, transposed", lam_stated, E.T),
              ("structural-order, transposed", lam_structural, E.T),
              ("stated-order, direct", lam_stated, E))
    errors = {}
    for name, lam, Em in combos:
        recon = bd.T @ Em.T @ (lam[:, None] * (Em @ bd))
        errors[name] = float(np.max(np.abs(recon - H)))
    recon_err = min(errors.values())
    orientations = [name for name, err in errors.items() if err <= tol]
    return SpectrumCheck(n=n, alpha=alpha, eigenvalue_error=eig_err,
                         reconstruction_error=recon_err,
                         orientations=orientations,
                         ok=eig_err <= tol and recon_err <= tol)


# ---------------------------------------------------------------------------
# exact analysis on small-kernel instances

@dataclass(eq=False)
class KernelModel:
    """Affine solution set {x : Ax = b} as x0 + span(basis columns)."""
    A: np.ndarray
    b: np.ndarray
    x0: np.ndarray        # least-norm particular solution, orthogonal to the kernel
    basis: np.ndarray     # n x d orthonormal kernel basis
    rank: int

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def kernel_model(A, b, rcond: float = 1e-10) -> KernelModel:
    """Build the kernel description of the equality-constrained solution set."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or not np.any(A):
        raise ValueError("A must be a nonzero 2-d array")
    _, sv, Vt = np.linalg.svd(A)
    rank = int(np.count_nonzero(sv > rcond * sv[0]))
    basis = Vt[rank:].T
    x0 = least_norm_solution(A, b, rcond=rcond)
    resid = float(np.linalg.norm(A @ x0 - b))
    if resid > 1e-8 * max(1.0, float(np.linalg.norm(b))):
        raise ValueError("b is not in the range of A")
    return KernelModel(A=A, b=b, x0=x0, basis=basis, rank=rank)


def _golden(f, lo: float, hi: float, tol: float = 1e-10,
            max_iter: int = 200):
    """Golden-section minimization of a unimodal scalar function."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if (b - a) <= tol * max(1.0, abs(a), abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def _refine_line(f, ts: np.ndarray, i_best: int):
    """Two-stage refinement around a best grid cell: densify, then golden."""
    lo = ts[max(i_best - 1, 0)]
    hi = ts[min(i_best + 1, len(ts) - 1)]
    if hi <= lo:
        return float(ts[i_best]), float(f(ts[i_best]))
    dense = np.linspace(lo, hi, 2001)
    vals = f(dense)
    j = int(np.argmin(vals))
    glo = dense[max(j - 1, 0)]
    ghi = dense[min(j + 1, 2000)]
    t, v = _golden(lambda t_: float(f(np.asarray([t_]))[0]), glo, ghi)
    if vals[j] < v:
        return float(dense[j]), float(vals[j])
    return float(t), float(v)


def _min_kernel_ratio_dirs(model: KernelModel, grid_points: int = 100000):
    """Minimum of ||v||_1^2 over unit kernel vectors, with minimizing directions."""
    d = model.dim
    if d == 0:
        raise ValueError("the kernel is trivial")
    if d == 1:
        v = model.basis[:, 0]
        return norm_l1(v) ** 2, [v.copy()]
    if d != 2:
        raise ValueError("exact kernel-ratio search supports dimensions 1 and 2")
    W = model.basis

    def val(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        dirs = W @ np.vstack([np.cos(theta), np.sin(theta)])
        return np.sum(np.abs(dirs), axis=0) ** 2

    thetas = np.linspace(0.0, np.pi, grid_points, endpoint=False)
    vals = val(thetas)
    vmin = float(vals.min())
    # refine every strict grid-local minimum near the global one; symmetric
    # instances can have several minimizing directions
    local = (vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
    cand = np.nonzero(local & (vals <= vmin + 1e-6 * max(1.0, vmin)))[0]
    order = cand[np.argsort(vals[cand])][:16]
    best_val = math.inf
    minima = []
    for i in order:
        t, v = _refine_line(val, thetas, int(i))
        minima.append((v, t))
        best_val = min(best_val, v)
    dirs = []
    for v, t in minima:
        if v <= best_val + 1e-9 * max(1.0, best_val):
            u = W @ np.array([math.cos(t), math.sin(t)])
            if not any(np.linalg.norm(u - u2) < 1e-6 or
                       np.linalg.norm(u + u2) < 1e-6 for u2 in dirs):
                dirs.append(u)
    return best_val, dirs


def min_kernel_ratio(model: KernelModel, grid_points: int = 100000) -> float:
    """Exact minimum squared norm ratio over nonzero kernel vectors (dim <= 2).

    Since kernel directions are normalized, this is also the minimum of
    ||v||_1^2 over unit kernel vectors, the threshold above which the
    parametric objective becomes unbounded.
    """
    value, _ = _min_kernel_ratio_dirs(model, grid_points=grid_points)
    return value


def min_kernel_ratio_sampled(model: KernelModel, samples: int = 10000,
                             seed: int = 0, steps: int = 100) -> float:
    """Sampled upper bound on the minimum kernel ratio, any kernel dimension.

    Draws random unit kernel coefficients and runs a spherical subgradient
    descent on all samples at once, keeping the best value seen. Exact for
    one-dimensional kernels regardless of the sample count.
    """
    B = model.basis
    d = model.dim
    if d == 0:
        raise ValueError("the kernel is trivial")
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((d, samples))
    U /= np.linalg.norm(U, axis=0, keepdims=True)
    best = math.inf
    for j in range(steps):
        V = B @ U
        l1 = np.sum(np.abs(V), axis=0)
        best = min(best, float(np.min(l1)) ** 2)
        G = 2.0 * l1 * (B.T @ np.sign(V))
        G -= U * np.sum(U * G, axis=0)
        gn = np.linalg.norm(G, axis=0)
        gn[gn == 0.0] = 1.0
        U = U - (0.5 / (j + 1.0)) * (G / gn)
        U /= np.linalg.norm(U, axis=0, keepdims=True)
    V = B @ U
    best = min(best, float(np.min(np.sum(np.abs(V), axis=0))) ** 2)
    return best


def _default_radius(model: KernelModel) -> float:
    return 1e4 * (1.0 + float(np.linalg.norm(model.x0)))


def _tail_offsets(x0: np.ndarray, u: np.ndarray):
    """Constant terms of ||x0 + t u||_1 as t -> +inf and t -> -inf."""
    scale = float(np.abs(u).max())
    supp = np.abs(u) > 1e-12 * scale
    off = float(np.sum(np.abs(x0[~supp])))
    inner = float(np.sum(x0[supp] * np.sign(u[supp])))
    return off + inner, off - inner


def parametric_infimum(model: KernelModel, alpha: float,
                       grid_radius: float = None, grid_points: int = 100000):
    """Infimum of ||x||_1^2 - alpha ||x||_2^2 over the solution set (dim <= 2).

    Returns (value, unbounded). Unboundedness follows the sign analysis of
    the objective along kernel directions: the quadratic coefficient
    ||v||_1^2 - alpha decides except exactly at the threshold, where the
    sign of the linear tail term does. When unbounded, value is -inf.
    """
    d = model.dim
    astar, dirs = _min_kernel_ratio_dirs(model)
    eq_tol = _EQ_TOL * max(1.0, astar)
    if alpha > astar + eq_tol:
        return -math.inf, True
    if alpha >= astar - eq_tol:
        q_tol = 1e-9 * max(1.0, norm_l1(model.x0))
        for u in dirs:
            q_plus, q_minus = _tail_offsets(model.x0, u)
            if q_plus < -q_tol or q_minus < -q_tol:
                return -math.inf, True
    radius = _default_radius(model) if grid_radius is None else float(grid_radius)
    x0 = model.x0

    if d == 1:
        v = model.basis[:, 0]

        def K(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            X = x0[None, :] + t[:, None] * v[None, :]
            return (np.sum(np.abs(X), axis=1) ** 2
                    - alpha * np.sum(X * X, axis=1))

        ts = np.linspace(-radius, radius, grid_points)
        vals = K(ts)
        _, value = _refine_line(K, ts, int(np.argmin(vals)))
        return min(value, float(vals.min())), False

    value = _plane_minimize(
        x0, model.basis,
        lambda X: np.sum(np.abs(X), axis=-1) ** 2 - alpha * np.sum(X * X, axis=-1),
        radius, grid_points)
    return value, False


def _plane_minimize(x0, W, objective, radius, grid_points):
    """Grid plus simplex refinement of an objective over a 2-d affine plane."""
    g = max(int(math.isqrt(grid_points)), 2)
    axis = np.linspace(-radius, radius, g)
    ss, tt = np.meshgrid(axis, axis, indexing="ij")
    coef = np.stack([ss.ravel(), tt.ravel()], axis=1)
    X = x0[None, :] + coef @ W.T
    vals = objective(X)
    i = int(np.argmin(vals))
    start = coef[i]

    def f(st):
        return float(objective(x0 + W @ st))

    res = scipy.optimize.minimize(
        f, start, method="Nelder-Mead",
        options=dict(xatol=1e-9 * (1.0 + float(np.abs(start).max())),
                     fatol=1e-12, maxfev=4000))
    return min(float(vals[i]), float(res.fun))


def ratio_infimum(model: KernelModel, grid_radius: float = None,
                  grid_points: int = 100000):
    """Infimum of the squared norm ratio over the solution set (dim <= 2).

    Returns (value, attained). The infimum is the smaller of the best value
    on the search grid (refined locally) and the minimum kernel ratio, which
    is the limit along unbounded feasible rays; `attained` reports whether a
    finite minimizer beats that limit.
    """
    d = model.dim
    astar, _ = _min_kernel_ratio_dirs(model)
    radius = _default_radius(model) if grid_radius is None else float(grid_radius)
    x0 = model.x0

    if d == 1:
        v = model.basis[:, 0]

        def ratio(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            X = x0[None, :] + t[:, None] * v[None, :]
            return np.sum(np.abs(X), axis=1) ** 2 / np.sum(X * X, axis=1)

        ts = np.linspace(-radius, radius, grid_points)
        vals = ratio(ts)
        _, finite_min = _refine_line(ratio, ts, int(np.argmin(vals)))
        finite_min = min(finite_min, float(vals.min()))
    elif d == 2:
        finite_min = _plane_minimize(
            x0, model.basis,
            lambda X: np.sum(np.abs(X), axis=-1) ** 2 / np.sum(X * X, axis=-1),
            radius, grid_points)
    else:
        raise ValueError("exact ratio search supports kernel dimensions 1 and 2")

    attained = finite_min < astar - _ATTAIN_TOL * max(1.0, astar)
    return min(finite_min, astar), attained


@dataclass
class SphericalCheck:
    satisfied: bool
    exact: bool               # False when the sampled upper bound was used
    kernel_ratio_min: float
    bound: float


def spherical_section_check(model: KernelModel, sparsity: int,
                            m: int = None,
                            samples: int = 10000) -> SphericalCheck:
    """Check the kernel-ratio lower bound m / sparsity.

    Uses the exact minimum kernel ratio when the kernel dimension is at most
    two; otherwise falls back to the sampled upper bound, in which case a
    positive answer is only heuristic and `exact` is False.
    """
    if sparsity < 1:
        raise ValueError("sparsity must be a positive integer")
    if m is None:
        m = model.A.shape[0]
    if model.dim <= 2:
        value = min_kernel_ratio(model)
        exact = True
    else:
        value = min_kernel_ratio_sampled(model, samples=samples)
        exact = False
    bound = m / float(sparsity)
    return SphericalCheck(satisfied=bool(value >= bound), exact=exact,
                          kernel_ratio_min=value, bound=bound)


# ---------------------------------------------------------------------------
# built-in demonstration instances (kernel dimensions one and two)

def line_kernel_instance():
    """Small consistent system whose solution set is a line."""
    A = np.array([[1.0, -1.0, 0.0, 0.0, 0.0, 0.0],
                  [1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
                  [0.0, 1.0, 1.0, 1.0, 0.0, 0.0],
                  [2.0, 2.0, 0.0, 0.0, 1.0, 0.0],
                  [1.0, 1.0, 0.0, 0.0, 0.0, -1.0]])
    b = np.array([0.0, 0.0, 20.0, 40.0, 18.0])
    return A, b


def plane_kernel_instance():
    """The line-kernel instance with one row removed: a two-dimensional kernel."""
    A, b = line_kernel_instance()
    keep = [0, 2, 3, 4]
    return A[keep], b[keep]
