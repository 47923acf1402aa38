import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import cvxpy_prox, have_cvxpy, prox_l1_squared_bruteforce
from sqratio.prox import (project_ball, prox_l1_squared, signed_sort,
                          soft_threshold)
from sqratio.reference import prox_l1_squared_reference


def vectors(max_size=20, max_value=1e4):
    return arrays(np.float64, st.integers(1, max_size),
                  elements=st.floats(-max_value, max_value,
                                     allow_nan=False, allow_infinity=False))


# --- the reference rootfinder itself is cross-checked first, so the tight
# --- comparisons below rest on two agreeing independent implementations

def test_reference_matches_bruteforce_small():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        x = rng.standard_normal(n) * 10.0 ** rng.integers(-1, 3)
        beta = 10.0 ** rng.uniform(-1.5, 1.5)
        ref = prox_l1_squared_reference(x, beta)
        grid = prox_l1_squared_bruteforce(x, beta)
        assert np.max(np.abs(ref - grid)) <= 1e-4 * max(1.0, np.max(np.abs(x)))


@pytest.mark.skipif(not have_cvxpy(), reason="cvxpy not installed")
def test_reference_matches_conic_solver():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(1, 30))
        x = rng.standard_normal(n) * 5.0
        beta = 10.0 ** rng.uniform(-1.0, 1.0)
        ref = prox_l1_squared_reference(x, beta)
        conic = cvxpy_prox(x, beta)
        assert np.max(np.abs(ref - conic)) <= 1e-6 * max(1.0, np.max(np.abs(x)))


class TestProxL1Squared:
    def test_scalar_closed_form(self):
        # n = 1: minimize beta u^2 + (u - x)^2 / 2 -> u = x / (1 + 2 beta)
        assert prox_l1_squared(np.array([3.0]), 0.5) == pytest.approx([1.5])
        assert prox_l1_squared(np.array([-3.0]), 0.5) == pytest.approx([-1.5])

    def test_hand_worked_support_drop(self):
        # x = (4, 1), beta = 1/2: the small entry leaves the support and the
        # stationarity equation for the survivor gives u = (2, 0)
        out = prox_l1_squared(np.array([4.0, 1.0]), 0.5)
        assert out == pytest.approx([2.0, 0.0], abs=1e-12)

    def test_zero_and_empty(self):
        assert np.array_equal(prox_l1_squared(np.zeros(3), 1.0), np.zeros(3))
        assert prox_l1_squared(np.zeros(0), 1.0).size == 0

    def test_rejects_nonpositive_beta(self):
        for beta in (0.0, -1.0):
            with pytest.raises(ValueError):
                prox_l1_squared(np.ones(2), beta)

    def test_matches_reference_broadly(self):
        rng = np.random.default_rng(4)
        worst = 0.0
        for trial in range(200):
            n = int(rng.integers(1, 200))
            scale = 10.0 ** rng.integers(-6, 7)
            x = scale * rng.standard_normal(n)
            beta = 10.0 ** rng.uniform(-4.0, 4.0)
            got = prox_l1_squared(x, beta)
            ref = prox_l1_squared_reference(x, beta)
            err = np.max(np.abs(got - ref)) / max(1.0, np.max(np.abs(ref)))
            worst = max(worst, err)
        assert worst <= 1e-9

    def test_ties_and_duplicates(self):
        x = np.array([2.0, -2.0, 2.0, -2.0])
        out = prox_l1_squared(x, 0.25)
        # symmetry: all entries shrink by the same amount with matching signs
        assert np.allclose(np.abs(out), np.abs(out)[0])
        assert np.array_equal(np.sign(out), np.sign(x))
        assert np.allclose(out, prox_l1_squared_reference(x, 0.25))

    @given(vectors(), st.floats(1e-3, 1e3))
    @settings(max_examples=150, deadline=None)
    def test_invariants(self, x, beta):
        out = prox_l1_squared(x, beta)
        # never grows the l1 norm, never flips a sign, zero stays zero
        assert np.sum(np.abs(out)) <= np.sum(np.abs(x)) * (1 + 1e-12) + 1e-12
        mask = out != 0.0
        assert np.all(np.sign(out[mask]) == np.sign(x[mask]))
        # optimality beats soft-threshold candidates at a few thresholds
        def objective(u):
            return beta * np.sum(np.abs(u)) ** 2 + 0.5 * np.sum((u - x) ** 2)
        val = objective(out)
        scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
        for t in (0.0, 0.1 * scale, scale):
            assert val <= objective(soft_threshold(x, t)) + 1e-7 * scale ** 2

    @given(vectors(max_value=1e3), st.floats(1e-2, 1e2), st.floats(1e-3, 1e3))
    @settings(max_examples=100, deadline=None)
    def test_positive_homogeneity(self, x, t, beta):
        left = prox_l1_squared(t * x, beta)
        right = t * prox_l1_squared(x, beta)
        assert np.allclose(left, right, rtol=1e-9, atol=1e-9 * t * max(
            1.0, float(np.max(np.abs(x))) if x.size else 1.0))


class TestSignedSort:
    def test_reconstruction_and_stability(self):
        x = np.array([-1.0, 3.0, -3.0, 0.5])
        mags, order, signs = signed_sort(x)
        assert np.all(np.diff(mags) <= 0)
        assert np.allclose(x[order], signs * mags)
        # stable: the two magnitude-3 entries keep original order (index 1 first)
        assert list(order[:2]) == [1, 2]


class TestProjectBall:
    def test_inside_is_identity(self):
        u = np.array([1.0, 1.0])
        out = project_ball(u, np.zeros(2), 2.0)
        assert np.array_equal(out, u)
        assert out is not u  # a copy, not the same array

    def test_outside_lands_on_boundary(self):
        center = np.array([1.0, -1.0])
        out = project_ball(np.array([10.0, -1.0]), center, 3.0)
        assert np.linalg.norm(out - center) == pytest.approx(3.0)
        assert np.allclose(out, [4.0, -1.0])

    def test_zero_radius_returns_center(self):
        center = np.array([2.0, 5.0])
        assert np.array_equal(project_ball(np.ones(2), center, 0.0), center)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            project_ball(np.ones(2), np.zeros(2), -1.0)


def test_soft_threshold_values():
    x = np.array([3.0, -0.5, 0.2])
    assert np.allclose(soft_threshold(x, 1.0), [2.0, 0.0, 0.0])
    assert np.allclose(soft_threshold(x, 0.0), x)
