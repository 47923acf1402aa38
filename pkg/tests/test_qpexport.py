import numpy as np
import pytest

from oracles import jacobi_eigenvalues
from sqratio.qpexport import (MODES, constraint_violation, export_qp,
                              linear_term, load_qp, objective_value,
                              quadratic_matrix, save_qp)
from sqratio.quadform import split_signs
from sqratio.solver import RecoveryProblem


def make_problem(seed=0, m=3, n=5, eps=0.0):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    x = rng.standard_normal(n)
    return RecoveryProblem(A=A, b=A @ x, eps=eps), x


class TestExport:
    def test_exact_mode_fields(self):
        problem, _ = make_problem()
        exp = export_qp(problem, 2.0, "exact-indefinite")
        assert exp.mode == "exact-indefinite"
        assert exp.alpha == 2.0
        assert exp.c is None
        assert exp.m == 3 and exp.n == 5
        assert np.array_equal(exp.A, problem.A)
        # exported arrays are copies, not views of the problem data
        exp.A[0, 0] += 1.0
        assert exp.A[0, 0] != problem.A[0, 0]

    def test_linearized_requires_point(self):
        problem, x = make_problem()
        with pytest.raises(ValueError, match="linearization point"):
            export_qp(problem, 2.0, "linearized-convex")
        with pytest.raises(ValueError, match="length"):
            export_qp(problem, 2.0, "linearized-convex", c=np.ones(4))
        with pytest.raises(ValueError, match="finite"):
            export_qp(problem, 2.0, "linearized-convex",
                      c=np.array([np.inf, 0, 0, 0, 0]))
        exp = export_qp(problem, 2.0, "linearized-convex", c=x)
        assert np.array_equal(exp.c, x)

    def test_mode_and_alpha_validation(self):
        problem, _ = make_problem()
        with pytest.raises(ValueError, match="mode"):
            export_qp(problem, 2.0, "concave")
        with pytest.raises(ValueError, match="alpha"):
            export_qp(problem, 0.0, "exact-indefinite")


class TestObjective:
    def test_matches_matrix_form(self):
        problem, x = make_problem(1)
        rng = np.random.default_rng(5)
        for mode in MODES:
            c = x if mode == "linearized-convex" else None
            exp = export_qp(problem, 1.3, mode, c=c)
            Q = quadratic_matrix(exp)
            q = linear_term(exp)
            for _ in range(8):
                v = np.abs(rng.standard_normal(10))
                direct = float(v @ Q @ v + q @ v)
                assert objective_value(exp, v) == pytest.approx(direct,
                                                                rel=1e-10,
                                                                abs=1e-10)

    def test_split_point_recovers_parametric_objective(self):
        problem, x = make_problem(2)
        v = split_signs(x)
        alpha = 1.7
        exact = export_qp(problem, alpha, "exact-indefinite")
        expected = np.sum(np.abs(x)) ** 2 - alpha * np.sum(x * x)
        assert objective_value(exact, v) == pytest.approx(expected, rel=1e-12)
        # linearizing at the evaluation point gives the same value since
        # <c, u - w> = ||x||_2^2 there
        lin = export_qp(problem, alpha, "linearized-convex", c=x)
        expected_lin = np.sum(np.abs(x)) ** 2 - 2 * alpha * np.sum(x * x)
        assert objective_value(lin, v) == pytest.approx(expected_lin, rel=1e-12)

    def test_wrong_length_rejected(self):
        problem, _ = make_problem()
        exp = export_qp(problem, 1.0, "exact-indefinite")
        with pytest.raises(ValueError):
            objective_value(exp, np.ones(3))


class TestQuadraticStructure:
    def test_exact_spectrum_is_indefinite(self):
        problem, _ = make_problem()
        exp = export_qp(problem, 2.0, "exact-indefinite")
        eigs = jacobi_eigenvalues(quadratic_matrix(exp))
        n = exp.n
        assert eigs[0] == pytest.approx(-2.0 * 2.0, abs=1e-9)
        assert eigs[-1] == pytest.approx(2.0 * n, abs=1e-9)

    def test_linearized_matrix_is_psd(self):
        problem, x = make_problem()
        exp = export_qp(problem, 2.0, "linearized-convex", c=x)
        eigs = jacobi_eigenvalues(quadratic_matrix(exp))
        assert eigs[0] >= -1e-10
        assert eigs[-1] == pytest.approx(2.0 * exp.n, abs=1e-9)
        assert np.allclose(linear_term(exp),
                           -2.0 * 2.0 * np.concatenate([x, -x]))


class TestConstraints:
    def test_violation_at_feasible_split(self):
        problem, x = make_problem()
        exp = export_qp(problem, 1.0, "exact-indefinite")
        assert constraint_violation(exp, split_signs(x)) <= 1e-10

    def test_violation_flags_negative_entries(self):
        problem, x = make_problem()
        exp = export_qp(problem, 1.0, "exact-indefinite")
        v = split_signs(x)
        v[0] -= 5.0
        assert constraint_violation(exp, v) >= 5.0 - 1e-12

    def test_ball_constraint_slack(self):
        problem, x = make_problem(eps=0.5)
        exp = export_qp(problem, 1.0, "exact-indefinite")
        assert exp.eps == 0.5
        v = split_signs(problem.x_least_norm)
        assert constraint_violation(exp, v) <= 1e-10


class TestRoundTrip:
    def test_exact_mode(self, tmp_path):
        problem, _ = make_problem(3, eps=0.25)
        exp = export_qp(problem, np.pi, "exact-indefinite")
        path = tmp_path / "qp.json"
        save_qp(exp, path)
        back = load_qp(path)
        assert back.mode == exp.mode
        assert back.alpha == exp.alpha  # repr round-trip is exact
        assert back.eps == exp.eps
        assert np.array_equal(back.A, exp.A)
        assert np.array_equal(back.b, exp.b)
        assert back.c is None

    def test_linearized_mode(self, tmp_path):
        problem, x = make_problem(4)
        exp = export_qp(problem, 1.0 / 3.0, "linearized-convex", c=x)
        path = tmp_path / "qp.json"
        save_qp(exp, path)
        back = load_qp(path)
        assert np.array_equal(back.c, x)
        assert back.alpha == 1.0 / 3.0

    def test_load_rejects_bad_documents(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "something-else/9"}')
        with pytest.raises(ValueError, match="schema"):
            load_qp(path)
        path.write_text('{"schema": "tau2-qp/1", "mode": "exact-indefinite", '
                        '"m": 2, "n": 2, "alpha": "1.0", "eps": "0.0", '
                        '"A": [["1.0", "0.0"]], "b": ["1.0", "0.0"]}')
        with pytest.raises(ValueError, match="dimensions"):
            load_qp(path)
