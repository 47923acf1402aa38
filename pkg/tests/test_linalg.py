import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import jacobi_eigenvalues
from sqratio.linalg import (ConvergenceError, dinkelbach_value,
                            effective_sparsity, largest_gram_eigenvalue,
                            least_norm_solution, norm_l0, norm_l1, norm_l2,
                            ratio_map, ratio_sq, sparsity_report)


def finite_vectors(min_size=1, max_size=12, max_value=1e6):
    return arrays(np.float64, st.integers(min_size, max_size),
                  elements=st.floats(-max_value, max_value,
                                     allow_nan=False, allow_infinity=False))


class TestNorms:
    def test_values(self):
        x = np.array([3.0, 0.0, -4.0])
        assert norm_l0(x) == 2
        assert norm_l1(x) == 7.0
        assert norm_l2(x) == 5.0

    def test_l0_tolerance(self):
        assert norm_l0([1e-13, 1.0], tol=1e-12) == 1
        assert norm_l0([1e-13, 1.0]) == 2


class TestEffectiveSparsity:
    def test_flat_vector_counts_support(self):
        # s equal entries -> exactly s, any exponent
        for s in (1, 3, 7):
            x = np.zeros(10)
            x[:s] = -2.5
            for q in (0.5, 2.0, 3.0):
                assert effective_sparsity(x, q) == pytest.approx(s, rel=1e-12)

    def test_rejects_limit_exponents(self):
        x = np.array([1.0, 2.0])
        for q in (0.0, 1.0, np.inf, -2.0):
            with pytest.raises(ValueError):
                effective_sparsity(x, q)

    def test_rejects_zero_vector(self):
        with pytest.raises(ValueError):
            effective_sparsity(np.zeros(4))

    @given(finite_vectors(), st.sampled_from([0.5, 1.5, 2.0, 4.0]))
    def test_range_and_scale_invariance(self, x, q):
        if not np.any(x):
            return
        val = effective_sparsity(x, q)
        assert 1.0 - 1e-9 <= val <= x.size + 1e-9
        assert effective_sparsity(3.0 * x, q) == pytest.approx(val, rel=1e-9)

    def test_matches_ratio_sq_at_two(self):
        x = np.array([5.0, -1.0, 0.25, 0.0])
        assert effective_sparsity(x, 2.0) == pytest.approx(ratio_sq(x), rel=1e-12)


class TestRatioSq:
    def test_extremes(self):
        assert ratio_sq([0.0, -7.0, 0.0]) == pytest.approx(1.0)
        assert ratio_sq(np.ones(9)) == pytest.approx(9.0)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            ratio_sq(np.zeros(3))

    @given(finite_vectors())
    @settings(max_examples=50)
    def test_bounds(self, x):
        if not np.any(x):
            return
        v = ratio_sq(x)
        assert 1.0 - 1e-9 <= v <= x.size + 1e-9


class TestRatioMap:
    def test_zero_extension(self):
        assert np.array_equal(ratio_map(np.zeros(5)), np.zeros(5))

    def test_matches_definition(self):
        x = np.array([1.0, -2.0, 0.5])
        assert np.allclose(ratio_map(x), ratio_sq(x) * x)


def test_dinkelbach_value_vanishes_at_own_ratio():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.standard_normal(rng.integers(1, 30))
        v = dinkelbach_value(x, ratio_sq(x))
        assert abs(v) <= 1e-9 * max(1.0, norm_l1(x) ** 2)


def test_sparsity_report_fields():
    rep = sparsity_report(np.array([3.0, 0.0, -4.0]))
    assert rep.nnz == 2
    assert rep.l1 == 7.0
    assert rep.l2 == 5.0
    assert rep.ratio == pytest.approx(1.4)
    assert rep.ratio_sq == pytest.approx(1.96)
    with pytest.raises(ValueError):
        sparsity_report(np.zeros(2))


class TestLargestGramEigenvalue:
    def test_against_jacobi_oracle(self):
        rng = np.random.default_rng(11)
        for m, n in ((4, 7), (7, 4), (6, 6)):
            A = rng.standard_normal((m, n))
            expected = jacobi_eigenvalues(A.T @ A)[-1]
            assert largest_gram_eigenvalue(A) == pytest.approx(expected, rel=1e-8)

    def test_orthonormal_rows(self):
        # any matrix with orthonormal rows has unit Gram spectrum
        q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((8, 3)))
        assert largest_gram_eigenvalue(q.T) == pytest.approx(1.0, rel=1e-8)

    def test_budget_exhaustion_carries_estimate(self):
        A = np.diag([2.0, 1.999, 1.0])
        with pytest.raises(ConvergenceError) as info:
            largest_gram_eigenvalue(A, tol=1e-14, max_iter=2)
        assert info.value.estimate is not None
        assert info.value.estimate <= 4.0 + 1e-9

    def test_rejects_zero_matrix(self):
        with pytest.raises(ValueError):
            largest_gram_eigenvalue(np.zeros((2, 2)))


class TestLeastNorm:
    def test_square_system(self):
        A = np.array([[2.0, 1.0], [1.0, 3.0]])
        b = np.array([3.0, 5.0])
        assert np.allclose(least_norm_solution(A, b), np.linalg.solve(A, b))

    def test_underdetermined_is_orthogonal_to_kernel(self):
        rng = np.random.default_rng(5)
        A = rng.standard_normal((3, 8))
        b = rng.standard_normal(3)
        x = least_norm_solution(A, b)
        assert np.linalg.norm(A @ x - b) <= 1e-10 * np.linalg.norm(b)
        kernel = np.linalg.svd(A)[2][3:]
        assert np.max(np.abs(kernel @ x)) <= 1e-10 * np.linalg.norm(x)
