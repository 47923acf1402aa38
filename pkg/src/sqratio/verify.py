"""Built-in self checks: closed forms, reference oracles, demo instances."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ratio_map
from .prox import prox_l1_squared
from .quadform import (kernel_model, line_kernel_instance, min_kernel_ratio,
                       parametric_infimum, plane_kernel_instance,
                       ratio_infimum, verify_spectrum)
from .reference import prox_l1_squared_reference


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_spectrum() -> CheckResult:
    """Closed-form spectrum and factorization of the split quadratic form."""
    worst = 0.0
    for n in (2, 4, 8, 16, 32):
        for alpha in (0.5, 1.0, 2.0, float(n)):
            rep = verify_spectrum(n, alpha)
            worst = max(worst, rep.eigenvalue_error, rep.reconstruction_error)
            if not rep.ok:
                return CheckResult(
                    "spectrum", False,
                    f"n={n} alpha={alpha}: eig err {rep.eigenvalue_error:.2e}, "
                    f"reconstruction err {rep.reconstruction_error:.2e}")
    return CheckResult("spectrum", True, f"max error {worst:.2e}")


def check_prox(trials: int = 200, seed: int = 0) -> CheckResult:
    """Sorting-based prox against the bisection reference."""
    rng = np.random.default_rng(seed)
    sizes = (1, 2, 5, 50, 500)
    worst = 0.0
    for t in range(trials):
        n = sizes[t % len(sizes)]
        scale = 10.0 ** rng.integers(-3, 4)
        x = scale * rng.standard_normal(n)
        beta = 10.0 ** rng.uniform(-3.0, 3.0)
        got = prox_l1_squared(x, beta)
        ref = prox_l1_squared_reference(x, beta)
        err = float(np.max(np.abs(got - ref))) / max(1.0, float(np.max(np.abs(ref))))
        worst = max(worst, err)
        if err > 1e-9:
            return CheckResult("prox", False,
                               f"trial {t}: n={n} beta={beta:.3g} err {err:.2e}")
    return CheckResult("prox", True,
                       f"{trials} trials, max relative error {worst:.2e}")


def check_examples() -> CheckResult:
    """Exact values on the built-in line- and plane-kernel instances."""
    msgs = []

    model = kernel_model(*line_kernel_instance())
    if model.dim != 1:
        return CheckResult("examples", False,
                           f"line instance: kernel dimension {model.dim} != 1")
    astar = min_kernel_ratio(model)
    if abs(astar - 121.0 / 27.0) > 1e-9:
        return CheckResult("examples", False,
                           f"line instance: kernel ratio {astar!r} != 121/27")
    value, attained = ratio_infimum(model)
    if abs(value - 1521.0 / 581.0) > 1e-6 or not attained:
        return CheckResult(
            "examples", False,
            f"line instance: ratio infimum {value!r} (attained={attained}), "
            "expected 1521/581 attained")
    for alpha, want in ((astar + 1e-2, True), (astar, True), (1.0, False)):
        val, unbounded = parametric_infimum(model, alpha)
        if unbounded is not want:
            return CheckResult(
                "examples", False,
                f"line instance: alpha={alpha:.6g} unbounded={unbounded}, "
                f"expected {want}")
        if not want and not np.isfinite(val):
            return CheckResult("examples", False,
                               f"line instance: finite case returned {val!r}")
    msgs.append("line: kernel ratio 121/27, infimum 1521/581 attained")

    model = kernel_model(*plane_kernel_instance())
    if model.dim != 2:
        return CheckResult("examples", False,
                           f"plane instance: kernel dimension {model.dim} != 2")
    astar = min_kernel_ratio(model)
    if abs(astar - 2.0) > 1e-6:
        return CheckResult("examples", False,
                           f"plane instance: kernel ratio {astar!r} != 2")
    value, attained = ratio_infimum(model)
    if abs(value - 2.0) > 1e-4 or attained:
        return CheckResult(
            "examples", False,
            f"plane instance: ratio infimum {value!r} (attained={attained}), "
            "expected limit value 2, not attained")
    val_at, unbounded_at = parametric_infimum(model, 2.0)
    if unbounded_at or not np.isfinite(val_at):
        return CheckResult(
            "examples", False,
            "plane instance: threshold objective should stay bounded, got "
            f"value {val_at!r} unbounded={unbounded_at}")
    _, unbounded_above = parametric_infimum(model, 2.0 + 1e-2)
    if not unbounded_above:
        return CheckResult("examples", False,
                           "plane instance: objective above the threshold "
                           "should be unbounded")
    lo = parametric_infimum(model, 1.0)[0]
    hi = parametric_infimum(model, 1.9)[0]
    if not lo > hi:
        return CheckResult(
            "examples", False,
            f"plane instance: infimum not decreasing in alpha ({lo!r} vs {hi!r})")
    msgs.append("plane: kernel ratio 2, infimum 2 not attained")

    return CheckResult("examples", True, "; ".join(msgs))


def check_lipschitz(pairs: int = 2000, seed: int = 0) -> CheckResult:
    """Scaling-map bound ||Phi(x) - Phi(y)|| <= 5 n ||x - y||."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in (2, 10, 100):
        X = rng.standard_normal((pairs, n))
        Y = rng.standard_normal((pairs, n))
        # include hard pairs: nearby points, sign flips, one point at zero
        Y[::4] = X[::4] + 1e-8 * rng.standard_normal((len(X[::4]), n))
        Y[1::4] = -X[1::4]
        Y[2::4] = 0.0
        X *= 10.0 ** rng.integers(-2, 3, size=(pairs, 1))
        Y *= 10.0 ** rng.integers(-2, 3, size=(pairs, 1))

        def phi(M):
            s1 = np.sum(np.abs(M), axis=1)
            s2 = np.sum(M * M, axis=1)
            r = np.divide(s1 * s1, s2, out=np.zeros_like(s2), where=s2 > 0)
            return r[:, None] * M

        PX = phi(X)
        # the batched map must agree with the scalar one it is checking
        for row in (0, 1, 2, 3):
            if not np.allclose(PX[row], ratio_map(X[row])):
                return CheckResult("lipschitz", False,
                                   "batched scaling map disagrees with ratio_map")
        num = np.linalg.norm(PX - phi(Y), axis=1)
        den = np.linalg.norm(X - Y, axis=1)
        keep = den > 0
        ratio = float(np.max(num[keep] / den[keep])) / (5.0 * n)
        worst = max(worst, ratio)
        if ratio > 1.0:
            return CheckResult("lipschitz", False,
                               f"n={n}: observed constant {ratio * 5 * n:.3f} "
                               f"exceeds 5n = {5 * n}")
    return CheckResult("lipschitz", True,
                       f"max observed fraction of the 5n bound: {worst:.3f}")


_CHECKS = (("spectrum", check_spectrum),
           ("prox", check_prox),
           ("examples", check_examples),
           ("lipschitz", check_lipschitz))


def run_checks(names=None) -> list:
    """Run the named checks (all of them by default), in a fixed order."""
    table = dict(_CHECKS)
    if names is None:
        names = [name for name, _ in _CHECKS]
    unknown = [n for n in names if n not in table]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}; "
                         f"available: {[n for n, _ in _CHECKS]}")
    return [table[n]() for n in names]


__all__ = ["CheckResult", "check_spectrum", "check_prox", "check_examples",
           "check_lipschitz", "run_checks"]
