"""Seeded recovery experiments over synthetic problem grids.

An experiment is a matrix family, a list of signal cells (support size and
magnitude model), a noise model, and a trial count. Every trial is seeded as
``base_seed + trial`` so runs are reproducible record for record, and the
same trial index draws the same signal across cells that share a seed, which
makes per-seed comparisons between matrix variants meaningful.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .sensing import (FAMILIES, MatrixSpec, NoiseSpec, SignalSpec,
                      generate_matrix, generate_signal,
                      synthesize_measurements)
from .solver import (RecoveryProblem, SolverConfig, dinkelbach_solve,
                     feasible_initial_point)

SPEC_SCHEMA = "tau2-exp/1"
SUMMARY_SCHEMA = "tau2-exp-summary/1"

CSV_HEADER = ("cell,trial,seed,s,rel_error,success,outer_iters,"
              "inner_iters,wall_seconds,alpha_final,status")


@dataclass
class SignalCell:
    """One cell of the experiment grid: the signal model to recover."""
    s: int
    magnitude: str = "dynamic-range"
    dynamic_range: float = 3.0
    min_separation: Optional[int] = None   # None: resolved from the matrix family


@dataclass
class ExperimentSpec:
    matrix: MatrixSpec
    cells: list
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    solver: Optional[SolverConfig] = None  # None: per-family defaults
    trials: int = 50
    base_seed: int = 0
    success_threshold: float = 1e-3
    name: str = ""


@dataclass
class TrialDetail:
    """Full solver output attached to a record when keep_results is set."""
    result: object
    eps: float
    b_norm: float


@dataclass
class TrialRecord:
    cell: str
    trial: int
    seed: int
    s: int
    rel_error: float
    success: bool
    outer_iters: int
    inner_iters: int
    wall_seconds: float
    alpha_final: float
    status: str
    detail: Optional[TrialDetail] = None


@dataclass
class CellSummary:
    cell: str
    trials: int
    successes: int
    success_rate: float
    mean_rel_error: float
    median_rel_error: float
    mean_outer_iters: float
    mean_wall_seconds: float


def default_solver_config(family: str, sigma: float) -> SolverConfig:
    """Per-family step sizes that keep the splitting iteration well scaled."""
    if sigma > 0.0:
        return SolverConfig(rho=80.0, beta=80.0)
    if family == "gaussian":
        return SolverConfig(rho=2.0)
    return SolverConfig(rho=100.0)


def default_min_separation(matrix: MatrixSpec) -> int:
    # sampled-cosine columns decorrelate only a couple of oversampling steps
    # apart, so keep support points at least that far from each other
    if matrix.family in ("dct", "rank-deficient"):
        return max(1, int(math.ceil(2.0 * matrix.oversampling)))
    return 1


def cell_name(matrix: MatrixSpec, cell: SignalCell) -> str:
    parts = [matrix.family]
    if matrix.family == "rank-deficient":
        parts.append(matrix.augmentation)
    parts.append(f"s{cell.s}")
    if cell.magnitude == "dynamic-range":
        parts.append(f"D{cell.dynamic_range:g}")
    else:
        parts.append("gauss")
    if cell.min_separation is not None:
        parts.append(f"sep{cell.min_separation}")
    return "-".join(parts)


def relative_error(x_hat, x_true) -> float:
    x_hat = np.asarray(x_hat, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    scale = float(np.linalg.norm(x_true))
    if scale == 0.0:
        return float(np.linalg.norm(x_hat))
    return float(np.linalg.norm(x_hat - x_true)) / scale


def run_trial(matrix: MatrixSpec, signal: SignalSpec, noise: NoiseSpec,
              solver: SolverConfig, success_threshold: float,
              cell: str, trial: int,
              keep_results: bool = False) -> TrialRecord:
    """Generate one seeded instance, solve it, and score the recovery."""
    start = time.perf_counter()
    A = generate_matrix(matrix)
    x_true = generate_signal(signal)
    b, eps = synthesize_measurements(A, x_true, noise)
    problem = RecoveryProblem(A=A, b=b, eps=eps)
    x_init = feasible_initial_point(problem, solver)
    if not np.any(x_init):
        x_init = problem.x_least_norm
    result = dinkelbach_solve(problem, x_init, solver)
    rel = relative_error(result.x, x_true)
    wall = time.perf_counter() - start
    detail = None
    if keep_results:
        detail = TrialDetail(result=result, eps=eps,
                             b_norm=float(np.linalg.norm(b)))
    return TrialRecord(cell=cell, trial=trial, seed=matrix.seed, s=signal.s,
                       rel_error=rel, success=bool(rel < success_threshold),
                       outer_iters=result.outer_iters,
                       inner_iters=result.inner_iters_total,
                       wall_seconds=wall, alpha_final=result.alpha_final,
                       status=result.status, detail=detail)


def _trial_args(spec: ExperimentSpec, keep_results: bool):
    solver = spec.solver
    if solver is None:
        solver = default_solver_config(spec.matrix.family, spec.noise.sigma)
    for cell in spec.cells:
        sep = cell.min_separation
        if sep is None:
            sep = default_min_separation(spec.matrix)
        name = cell_name(spec.matrix, cell)
        for trial in range(spec.trials):
            seed = spec.base_seed + trial
            matrix = replace(spec.matrix, seed=seed)
            signal = SignalSpec(n=spec.matrix.n, s=cell.s,
                                magnitude=cell.magnitude,
                                dynamic_range=cell.dynamic_range,
                                min_separation=sep, seed=seed)
            noise = replace(spec.noise, seed=seed)
            yield (matrix, signal, noise, solver, spec.success_threshold,
                   name, trial, keep_results)


def _run_one(args) -> TrialRecord:
    return run_trial(*args)


def run_experiment(spec: ExperimentSpec, workers: int = 1,
                   keep_results: bool = False) -> list:
    """Run every (cell, trial) pair; records come back in grid order."""
    if spec.trials < 1:
        raise ValueError("need at least one trial")
    tasks = list(_trial_args(spec, keep_results))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, tasks))
    else:
        records = [_run_one(t) for t in tasks]
    return records


def summarize(records) -> list:
    """Aggregate trial records per cell, in first-appearance order."""
    by_cell: dict = {}
    for rec in records:
        by_cell.setdefault(rec.cell, []).append(rec)
    out = []
    for name, recs in by_cell.items():
        rels = np.array([r.rel_error for r in recs])
        successes = sum(1 for r in recs if r.success)
        out.append(CellSummary(
            cell=name, trials=len(recs), successes=successes,
            success_rate=successes / len(recs),
            mean_rel_error=float(rels.mean()),
            median_rel_error=float(np.median(rels)),
            mean_outer_iters=float(np.mean([r.outer_iters for r in recs])),
            mean_wall_seconds=float(np.mean([r.wall_seconds for r in recs]))))
    return out


def records_to_csv(records, path) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(",".join([
                r.cell, str(r.trial), str(r.seed), str(r.s),
                repr(r.rel_error), str(int(r.success)),
                str(r.outer_iters), str(r.inner_iters),
                repr(r.wall_seconds), repr(r.alpha_final), r.status,
            ]) + "\n")


def summaries_to_json(summaries, path, spec: Optional[ExperimentSpec] = None) -> None:
    doc: dict = {"schema": SUMMARY_SCHEMA}
    if spec is not None:
        doc["name"] = spec.name
        doc["trials"] = spec.trials
        doc["base_seed"] = spec.base_seed
        doc["success_threshold"] = repr(spec.success_threshold)
    doc["cells"] = [{
        "cell": s.cell,
        "trials": s.trials,
        "successes": s.successes,
        "success_rate": f"{s.success_rate:.6f}",
        "mean_rel_error": repr(s.mean_rel_error),
        "median_rel_error": repr(s.median_rel_error),
        "mean_outer_iters": repr(s.mean_outer_iters),
        "mean_wall_seconds": repr(s.mean_wall_seconds),
    } for s in summaries]
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _signal_cells(doc) -> list:
    cells = []
    for entry in doc:
        if not isinstance(entry, dict) or "s" not in entry:
            raise ValueError("each signal entry needs a support size 's'")
        sizes = entry["s"] if isinstance(entry["s"], list) else [entry["s"]]
        for s in sizes:
            cells.append(SignalCell(
                s=int(s),
                magnitude=entry.get("magnitude", "dynamic-range"),
                dynamic_range=float(entry.get("dynamic_range", 3.0)),
                min_separation=(None if entry.get("min_separation") is None
                                else int(entry["min_separation"]))))
    if not cells:
        raise ValueError("the experiment needs at least one signal cell")
    return cells


_TOP_KEYS = {"schema", "name", "matrix", "signals", "noise", "solver",
             "trials", "base_seed", "success_threshold",
             "qp_variant_outer_iters"}


def load_spec(path) -> ExperimentSpec:
    """Parse an experiment configuration file (schema tau2-exp/1)."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SPEC_SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    mdoc = doc.get("matrix", {})
    if mdoc.get("family", "dct") not in FAMILIES:
        raise ValueError(f"unknown matrix family {mdoc.get('family')!r}")
    matrix = MatrixSpec(
        family=mdoc.get("family", "dct"),
        m=int(mdoc.get("m", 64)),
        n=int(mdoc.get("n", 1024)),
        oversampling=float(mdoc.get("oversampling", 1.0)),
        row_correlation=float(mdoc.get("row_correlation", 0.0)),
        extra_rows=int(mdoc.get("extra_rows", 5)),
        augmentation=mdoc.get("augmentation", "copy"))
    ndoc = doc.get("noise", {})
    noise = NoiseSpec(sigma=float(ndoc.get("sigma", 0.0)),
                      eps_factor=float(ndoc.get("eps_factor", 1.2)))
    solver = None
    sdoc = doc.get("solver")
    if sdoc:
        base = default_solver_config(matrix.family, noise.sigma)
        fields = {k: sdoc[k] for k in ("rho", "beta", "eta_factor", "outer_tol",
                                       "outer_max_iter", "inner_tol",
                                       "inner_max_iter") if k in sdoc}
        unknown = set(sdoc) - {"rho", "beta", "eta_factor", "outer_tol",
                               "outer_max_iter", "inner_tol", "inner_max_iter"}
        if unknown:
            raise ValueError(f"unknown solver keys: {sorted(unknown)}")
        solver = replace(base, **fields)
    return ExperimentSpec(
        matrix=matrix,
        cells=_signal_cells(doc.get("signals", [])),
        noise=noise,
        solver=solver,
        trials=int(doc.get("trials", 50)),
        base_seed=int(doc.get("base_seed", 0)),
        success_threshold=float(doc.get("success_threshold", 1e-3)),
        name=doc.get("name", ""))
