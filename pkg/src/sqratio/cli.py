"""Command-line interface: gen, solve, experiment, verify, export-qp."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .arrayio import load_matrix, load_vector, save_matrix, save_vector
from .experiments import (default_min_separation, load_spec, records_to_csv,
                          run_experiment, summaries_to_json, summarize)
from .linalg import sparsity_report
from .qpexport import MODES, export_qp, save_qp
from .sensing import (AUGMENTATIONS, FAMILIES, MAGNITUDES, MatrixSpec,
                      NoiseSpec, SignalSpec, generate_matrix, generate_signal,
                      synthesize_measurements)
from .solver import (STATUS_DEGENERATE, STATUS_MAX_ITER, RecoveryProblem,
                     SolverConfig, dinkelbach_solve, feasible_initial_point)
from .verify import run_checks

# exit codes: 0 success, 2 usage or input errors, 3 iteration cap,
# 4 degenerate (zero) iterate, 1 failed verification checks


def _solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    g.add_argument("--rho", type=float, default=100.0,
                   help="multiplier step size (default 100)")
    g.add_argument("--beta", type=float, default=None,
                   help="z-step penalty (default: rho)")
    g.add_argument("--eta-factor", type=float, default=1.0,
                   help="x-step majorization factor (default 1)")
    g.add_argument("--outer-tol", type=float, default=1e-6)
    g.add_argument("--outer-max-iter", type=int, default=None)
    g.add_argument("--inner-tol", type=float, default=1e-8)
    g.add_argument("--inner-max-iter", type=int, default=10000)


def _config_from(args) -> SolverConfig:
    return SolverConfig(rho=args.rho, beta=args.beta,
                        eta_factor=args.eta_factor,
                        outer_tol=args.outer_tol,
                        outer_max_iter=args.outer_max_iter,
                        inner_tol=args.inner_tol,
                        inner_max_iter=args.inner_max_iter)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sqratio",
        description="Sparse recovery by minimizing the squared l1/l2 ratio.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic instance")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--family", choices=FAMILIES, default="dct")
    g.add_argument("--m", type=int, default=64)
    g.add_argument("--n", type=int, default=1024)
    g.add_argument("--s", type=int, default=5, help="support size")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--oversampling", type=float, default=1.0)
    g.add_argument("--row-correlation", type=float, default=0.0)
    g.add_argument("--extra-rows", type=int, default=5)
    g.add_argument("--augmentation", choices=AUGMENTATIONS, default="copy")
    g.add_argument("--magnitude", choices=MAGNITUDES, default="dynamic-range")
    g.add_argument("--dynamic-range", type=float, default=3.0)
    g.add_argument("--min-separation", type=int, default=None,
                   help="support separation (default: family dependent)")
    g.add_argument("--sigma", type=float, default=0.0)
    g.add_argument("--eps-factor", type=float, default=1.2)

    s = sub.add_parser("solve", help="recover a signal from stored data")
    s.add_argument("--A", required=True, dest="A_path", metavar="A.csv")
    s.add_argument("--b", required=True, dest="b_path", metavar="b.csv")
    s.add_argument("--eps", type=float, default=0.0,
                   help="residual bound (default 0: equality)")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--init", default="l1",
                   help="'l1', 'least-norm', or a vector file (default l1)")
    _solver_flags(s)

    e = sub.add_parser("experiment", help="run a seeded experiment grid")
    e.add_argument("--config", required=True, help="experiment JSON file")
    e.add_argument("--out", required=True, help="output directory")
    e.add_argument("--trials", type=int, default=None, help="override trials")
    e.add_argument("--base-seed", type=int, default=None,
                   help="override base seed")
    e.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run built-in self checks")
    v.add_argument("--check", action="append", default=None,
                   choices=["spectrum", "prox", "examples", "lipschitz"],
                   help="run only this check (repeatable; default: all)")

    q = sub.add_parser("export-qp",
                       help="export a parametric subproblem as a QP")
    q.add_argument("--A", required=True, dest="A_path", metavar="A.csv")
    q.add_argument("--b", required=True, dest="b_path", metavar="b.csv")
    q.add_argument("--eps", type=float, default=0.0)
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--mode", choices=MODES, default="exact-indefinite")
    q.add_argument("--linearization-point", default=None, metavar="FILE",
                   help="vector file; required for the linearized mode")
    q.add_argument("--out", required=True, metavar="qp.json")
    return p


def cmd_gen(args) -> int:
    matrix = MatrixSpec(family=args.family, m=args.m, n=args.n,
                        oversampling=args.oversampling,
                        row_correlation=args.row_correlation,
                        extra_rows=args.extra_rows,
                        augmentation=args.augmentation, seed=args.seed)
    sep = args.min_separation
    if sep is None:
        sep = default_min_separation(matrix)
    signal = SignalSpec(n=args.n, s=args.s, magnitude=args.magnitude,
                        dynamic_range=args.dynamic_range,
                        min_separation=sep, seed=args.seed)
    noise = NoiseSpec(sigma=args.sigma, eps_factor=args.eps_factor,
                      seed=args.seed)
    A = generate_matrix(matrix)
    x = generate_signal(signal)
    b, eps = synthesize_measurements(A, x, noise)
    os.makedirs(args.out, exist_ok=True)
    save_matrix(os.path.join(args.out, "A.csv"), A)
    save_vector(os.path.join(args.out, "x_true.csv"), x)
    save_vector(os.path.join(args.out, "b.csv"), b)
    meta = {
        "schema": "tau2-instance/1",
        "family": args.family, "m": A.shape[0], "n": A.shape[1],
        "s": args.s, "seed": args.seed,
        "oversampling": args.oversampling,
        "row_correlation": args.row_correlation,
        "extra_rows": args.extra_rows, "augmentation": args.augmentation,
        "magnitude": args.magnitude, "dynamic_range": args.dynamic_range,
        "min_separation": sep,
        "sigma": args.sigma, "eps_factor": args.eps_factor,
        "eps": repr(float(eps)),
    }
    with open(os.path.join(args.out, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(f"wrote {A.shape[0]}x{A.shape[1]} instance to {args.out} "
          f"(eps = {eps!r})")
    return 0


def _initial_point(problem: RecoveryProblem, config: SolverConfig, init: str):
    if init == "l1":
        return feasible_initial_point(problem, config)
    if init == "least-norm":
        return problem.x_least_norm.copy()
    return load_vector(init)


def cmd_solve(args) -> int:
    A = load_matrix(args.A_path)
    b = load_vector(args.b_path)
    problem = RecoveryProblem(A=A, b=b, eps=args.eps)
    config = _config_from(args)
    start = time.perf_counter()
    x0 = _initial_point(problem, config, args.init)
    result = dinkelbach_solve(problem, x0, config)
    wall = time.perf_counter() - start
    os.makedirs(args.out, exist_ok=True)
    save_vector(os.path.join(args.out, "x_hat.csv"), result.x)
    rep = sparsity_report(result.x)
    report = {
        "schema": "tau2-solve/1",
        "status": result.status,
        "alpha_final": repr(result.alpha_final),
        "outer_iters": result.outer_iters,
        "inner_iters_total": result.inner_iters_total,
        "feasibility_residual": repr(result.feasibility_residual),
        "eps": repr(float(args.eps)),
        "wall_seconds": repr(wall),
        "alpha_trace": [repr(a) for a in result.alpha_trace],
        "dinkelbach_trace": [repr(v) for v in result.dinkelbach_trace],
        "iterate_norms": [repr(v) for v in result.iterate_norms],
        "step_norms": [repr(v) for v in result.step_norms],
        "sparsity": {"nnz": rep.nnz, "l1": repr(rep.l1), "l2": repr(rep.l2),
                     "ratio": repr(rep.ratio), "ratio_sq": repr(rep.ratio_sq)},
    }
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"status {result.status}: ratio_sq {result.alpha_final!r} "
          f"with {rep.nnz} nonzeros after {result.outer_iters} outer steps")
    if result.status == STATUS_MAX_ITER:
        return 3
    if result.status == STATUS_DEGENERATE:
        return 4
    return 0


def cmd_experiment(args) -> int:
    spec = load_spec(args.config)
    if args.trials is not None:
        spec.trials = args.trials
    if args.base_seed is not None:
        spec.base_seed = args.base_seed
    records = run_experiment(spec, workers=args.workers)
    summaries = summarize(records)
    os.makedirs(args.out, exist_ok=True)
    records_to_csv(records, os.path.join(args.out, "results.csv"))
    summaries_to_json(summaries, os.path.join(args.out, "summary.json"), spec)
    for s in summaries:
        print(f"{s.cell}: {s.successes}/{s.trials} recovered "
              f"(median rel error {s.median_rel_error:.3e})")
    return 0


def cmd_verify(args) -> int:
    results = run_checks(args.check)
    failed = 0
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"check {r.name}: {tag} ({r.detail})")
        failed += 0 if r.passed else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed")
        return 1
    return 0


def cmd_export_qp(args) -> int:
    A = load_matrix(args.A_path)
    b = load_vector(args.b_path)
    problem = RecoveryProblem(A=A, b=b, eps=args.eps)
    c = None
    if args.linearization_point is not None:
        c = load_vector(args.linearization_point)
    exp = export_qp(problem, args.alpha, args.mode, c=c)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    save_qp(exp, args.out)
    print(f"wrote {exp.mode} QP ({2 * exp.n} variables) to {args.out}")
    return 0


_COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "experiment": cmd_experiment,
    "verify": cmd_verify,
    "export-qp": cmd_export_qp,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
