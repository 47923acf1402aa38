"""Ratio-of-norms sparse recovery solver.

The model is

    minimize  ||x||_1^2 / ||x||_2^2   subject to  ||A x - b||_2 <= eps,

solved with Dinkelbach's procedure for fractional programs: each outer
iteration fixes the current ratio alpha and linearizes the concave part, and
the resulting convex subproblem

    minimize  ||x||_1^2 - 2 alpha <c, x>   subject to  ||A x - b||_2 <= eps

is solved by an alternating-direction linearized proximal method of
multipliers whose x step is a single prox of a weighted squared l1 norm.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .linalg import (ConvergenceError, dinkelbach_value, largest_gram_eigenvalue,
                     least_norm_solution, norm_l1, ratio_sq)
from .prox import project_ball, prox_l1_squared, soft_threshold

STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max_iter"
STATUS_DEGENERATE = "degenerate"

_FEAS_TOL = 1e-8   # relative slack for feasibility validation


@dataclass(eq=False)
class RecoveryProblem:
    """Sensing matrix, measurements, and residual bound.

    Construction validates the data and keeps the least-norm solution around
    (it certifies that the feasible set is nonempty and seeds the noisy
    initializer).
    """
    A: np.ndarray
    b: np.ndarray
    eps: float = 0.0
    x_least_norm: np.ndarray = field(init=False, repr=False)
    least_norm_residual: float = field(init=False, repr=False)

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.eps = float(self.eps)
        if self.A.ndim != 2:
            raise ValueError("A must be 2-d")
        if self.b.shape != (self.A.shape[0],):
            raise ValueError("b length must match the number of rows of A")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise ValueError("A and b must be finite")
        if not np.any(self.b):
            raise ValueError("b must be nonzero (the zero vector is the "
                             "trivial solution otherwise)")
        if not self.eps >= 0.0:
            raise ValueError("eps must be nonnegative")
        self.x_least_norm = least_norm_solution(self.A, self.b)
        self.least_norm_residual = float(
            np.linalg.norm(self.A @ self.x_least_norm - self.b))
        if self.least_norm_residual > self.eps + _FEAS_TOL * max(
                1.0, float(np.linalg.norm(self.b))):
            raise ValueError("infeasible problem: no x satisfies "
                             "||Ax - b|| <= eps")

    @property
    def shape(self):
        return self.A.shape


@dataclass
class SolverConfig:
    rho: float = 100.0                    # multiplier step size
    beta: Optional[float] = None          # z-step penalty; defaults to rho
    eta_factor: float = 1.0               # eta = eta_factor * rho * lambda_max(A'A)
    outer_tol: float = 1e-6               # relative iterate change, outer loop
    outer_max_iter: Optional[int] = None  # defaults to 5 n
    inner_tol: float = 1e-8               # relative change + residual, inner loop
    inner_max_iter: int = 10000

    def __post_init__(self):
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")
        if self.beta is not None and self.beta < self.rho:
            raise ValueError("beta must be >= rho")
        if self.eta_factor < 1.0:
            raise ValueError("eta_factor must be >= 1")
        for name in ("outer_tol", "inner_tol"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    def resolved_beta(self) -> float:
        return self.rho if self.beta is None else self.beta


@dataclass(eq=False)
class SplitState:
    """Primal/split/multiplier triple carried across warm-started solves."""
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray


@dataclass(eq=False)
class SolverResult:
    x: np.ndarray
    alpha_trace: list          # ratio values, one per outer iterate
    dinkelbach_trace: list     # ||x_new||_1^2 - alpha_old * ||x_new||_2^2 per step
    iterate_norms: list        # l2 norms of the outer iterates (boundedness record)
    step_norms: list           # l2 norms of the accepted outer steps
    outer_iters: int
    inner_iters_total: int
    status: str
    feasibility_residual: float

    @property
    def alpha_final(self) -> float:
        return self.alpha_trace[-1]


def gram_step_bound(problem: RecoveryProblem, config: SolverConfig) -> float:
    """Largest Gram eigenvalue used to size the linearized x step."""
    try:
        return largest_gram_eigenvalue(problem.A)
    except ConvergenceError as exc:
        # the estimate approaches from below; pad it so eta stays a valid bound
        return float(exc.estimate) * 1.01


def _fresh_state(problem: RecoveryProblem) -> SplitState:
    m, n = problem.A.shape
    x = np.zeros(n)
    z = project_ball(np.zeros(m), problem.b, problem.eps)
    return SplitState(x=x, z=z, y=np.zeros(m))


def solve_subproblem(problem: RecoveryProblem, alpha: float, c: np.ndarray,
                     config: SolverConfig, warm: Optional[SplitState] = None,
                     gram_bound: Optional[float] = None):
    """Minimize ||x||_1^2 - 2 alpha <c, x> over ||Ax - b|| <= eps.

    Alternating scheme: a linearized prox step in x (one prox of a weighted
    squared l1 norm), projection of the split variable onto the residual
    ball, and a multiplier ascent step. Stops when both the relative x
    change and the relative split residual fall below config.inner_tol.

    Returns (x, iterations, state); pass state back as `warm` to continue.
    """
    A, b, eps = problem.A, problem.b, problem.eps
    rho = config.rho
    beta = config.resolved_beta()
    if gram_bound is None:
        gram_bound = gram_step_bound(problem, config)
    eta = config.eta_factor * rho * gram_bound
    state = _fresh_state(problem) if warm is None else warm
    x, z, y = state.x, state.z, state.y
    shift = (2.0 * alpha / eta) * np.asarray(c, dtype=float)
    nb = max(1.0, float(np.linalg.norm(b)))
    Ax = A @ x
    iters = 0
    for iters in range(1, config.inner_max_iter + 1):
        w = x - (rho / eta) * (A.T @ (Ax - z + y / rho)) + shift
        x_new = prox_l1_squared(w, 1.0 / eta)
        Ax_new = A @ x_new
        if eps > 0.0:
            z = project_ball(z + (rho / beta) * (Ax_new - z + y / rho), b, eps)
        y = y + rho * (Ax_new - z)
        rel_dx = np.linalg.norm(x_new - x) / max(1.0, np.linalg.norm(x))
        rel_res = np.linalg.norm(Ax_new - z) / nb
        x, Ax = x_new, Ax_new
        if max(rel_dx, rel_res) < config.inner_tol:
            break
    return x, iters, SplitState(x=x, z=z, y=y)


def l1_solve(problem: RecoveryProblem, config: SolverConfig,
             tol: Optional[float] = None, max_iter: Optional[int] = None):
    """Minimize ||x||_1 over ||Ax - b|| <= eps with the same splitting.

    The x step is a plain soft threshold. Returns (x, iterations,
    converged); when the iteration cap is hit the last iterate is returned
    with converged = False.
    """
    A, b, eps = problem.A, problem.b, problem.eps
    rho = config.rho
    beta = config.resolved_beta()
    eta = config.eta_factor * rho * gram_step_bound(problem, config)
    tol = config.inner_tol if tol is None else tol
    max_iter = config.inner_max_iter if max_iter is None else max_iter
    state = _fresh_state(problem)
    x, z, y = state.x, state.z, state.y
    nb = max(1.0, float(np.linalg.norm(b)))
    Ax = A @ x
    for iters in range(1, max_iter + 1):
        w = x - (rho / eta) * (A.T @ (Ax - z + y / rho))
        x_new = soft_threshold(w, 1.0 / eta)
        Ax_new = A @ x_new
        if eps > 0.0:
            z = project_ball(z + (rho / beta) * (Ax_new - z + y / rho), b, eps)
        y = y + rho * (Ax_new - z)
        rel_dx = np.linalg.norm(x_new - x) / max(1.0, np.linalg.norm(x))
        rel_res = np.linalg.norm(Ax_new - z) / nb
        x, Ax = x_new, Ax_new
        if max(rel_dx, rel_res) < tol:
            return x, iters, True
    return x, max_iter, False


def feasible_initial_point(problem: RecoveryProblem,
                           config: SolverConfig) -> np.ndarray:
    """Feasible starting point built from the l1 minimizer.

    Noiseless problems return the l1 iterate, polished by a least-norm
    correction if the equality residual is still visible after the iteration
    cap. Noisy problems keep the l1 iterate when it already satisfies the
    residual bound and otherwise pull it onto the boundary along the segment
    toward the least-norm solution.
    """
    A, b, eps = problem.A, problem.b, problem.eps
    x, _, _ = l1_solve(problem, config)
    resid = float(np.linalg.norm(A @ x - b))
    if eps == 0.0:
        if resid > _FEAS_TOL * max(1.0, float(np.linalg.norm(b))):
            x = x + least_norm_solution(A, b - A @ x)
        return x
    if resid <= eps:
        return x
    xln = problem.x_least_norm
    return xln + (eps / resid) * (x - xln)


def dinkelbach_solve(problem: RecoveryProblem, x0: np.ndarray,
                     config: Optional[SolverConfig] = None) -> SolverResult:
    """Run the full outer procedure from a feasible nonzero starting point.

    Each outer iteration solves the linearized subproblem anchored at the
    current iterate (warm-starting the splitting state), refuses steps that
    would increase the linearized objective, and updates alpha to the ratio
    of the new iterate. The ratio trace is nonincreasing and the parametric
    objective trace nonpositive up to float roundoff.
    """
    if config is None:
        config = SolverConfig()
    A, b, eps = problem.A, problem.b, problem.eps
    m, n = A.shape
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (n,):
        raise ValueError("x0 length must match the number of columns of A")
    if not np.any(x0):
        raise ValueError("x0 must be nonzero")
    if np.linalg.norm(A @ x0 - b) > eps + 1e-6 * max(1.0, np.linalg.norm(b)):
        raise ValueError("x0 must be feasible")
    outer_max = 5 * n if config.outer_max_iter is None else config.outer_max_iter
    gram_bound = gram_step_bound(problem, config)

    x = x0.copy()
    alpha = ratio_sq(x)
    alpha_trace = [alpha]
    dk_trace: list = []
    norms = [float(np.linalg.norm(x))]
    steps: list = []
    warm = SplitState(x=x.copy(),
                      z=project_ball(A @ x, b, eps),
                      y=np.zeros(m))
    inner_total = 0
    status = STATUS_MAX_ITER
    outer = 0
    for outer in range(1, outer_max + 1):
        c = x
        x_new, iters, warm = solve_subproblem(problem, alpha, c, config,
                                              warm=warm, gram_bound=gram_bound)
        inner_total += iters
        if not np.any(x_new):
            status = STATUS_DEGENERATE
            break
        # descent guard: the ratio-monotonicity argument needs the linearized
        # objective not to increase, which an inexact inner solve cannot
        # promise on its own; keeping the old point is then a valid (and
        # converged) outcome
        theta_new = norm_l1(x_new) ** 2 - 2.0 * alpha * float(c @ x_new)
        theta_old = norm_l1(x) ** 2 - 2.0 * alpha * float(c @ x)
        if theta_new > theta_old:
            x_new = x
        dk_trace.append(dinkelbach_value(x_new, alpha))
        step = float(np.linalg.norm(x_new - x))
        steps.append(step)
        rel = step / max(1.0, np.linalg.norm(x))
        x = x_new
        alpha = ratio_sq(x)
        alpha_trace.append(alpha)
        norms.append(float(np.linalg.norm(x)))
        if rel < config.outer_tol:
            status = STATUS_CONVERGED
            break
    return SolverResult(x=x,
                        alpha_trace=alpha_trace,
                        dinkelbach_trace=dk_trace,
                        iterate_norms=norms,
                        step_norms=steps,
                        outer_iters=outer,
                        inner_iters_total=inner_total,
                        status=status,
                        feasibility_residual=float(np.linalg.norm(A @ x - b)))
