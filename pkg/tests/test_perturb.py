import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GOLDEN_DET, random_hermitian
from specshift.pairmodel import IntervalSet, make_pair
from specshift.perturb import (
    ApproxScheme,
    convergence_study,
    enlarged_set,
    normalising_shift,
    projector_diff_norm,
    sigma_gap,
    subspace_bound_check,
    truncate_filter,
)
from specshift.runner import jacobi_surrogate, subspace_instance


class TestEnlarge:
    def test_single(self):
        assert enlarged_set(IntervalSet([(0, 1)]), 0.5) == IntervalSet([(0, 1.5)])

    def test_merge(self):
        assert enlarged_set(IntervalSet([(0, 1), (1.2, 2)]), 0.5) == IntervalSet([(0, 2.5)])

    def test_zero(self):
        S = IntervalSet([(0, 1), (3, 4)])
        assert enlarged_set(S, 0.0) == S

    def test_unbounded_rejected(self):
        with pytest.raises(ValueError):
            enlarged_set(IntervalSet([(0, math.inf)]), 1.0)


def test_zero_phi_norm():
    p = make_pair(np.diag([0.0, 2.0]), np.zeros(2))
    assert projector_diff_norm(p, IntervalSet([(0, 0)]), IntervalSet([(-0.5, 0.5)])) == 0.0
    r = subspace_bound_check(p, IntervalSet([(0, 0)]))
    assert r.norm == 0.0 and r.bound == 0.0 and r.strict_lt_ratio


def test_golden_interval_sigma(golden):
    S = IntervalSet([(-0.5, 0.5)])
    assert sigma_gap(golden, S) == pytest.approx(1.5)
    n = projector_diff_norm(golden, S, enlarged_set(S, 1.5))
    assert n < 1 / 1.5


def test_golden_point_sigma(golden):
    r = subspace_bound_check(golden, IntervalSet([(0.0, 0.0)]))
    assert r.delta == 2.0 and r.hypothesis_ok
    # P = e1 e1*, Q = psi1 psi1*: the norm is the sine of their angle
    assert r.norm == pytest.approx(math.sqrt(1 - GOLDEN_DET), abs=1e-12)
    assert r.norm < 0.5 and r.strict_lt_one and r.strict_lt_ratio
    assert r.kernel_norm <= r.kernel_bound + 1e-12


def test_hypothesis_violation_flagged():
    p = make_pair(np.diag([0.0, 0.5]), np.array([1.0, 1.0]))
    r = subspace_bound_check(p, IntervalSet([(0.0, 0.0)]))
    assert not r.hypothesis_ok
    assert not r.strict_lt_one and not r.strict_lt_ratio


@given(st.integers(0, 2**31))
def test_random_subspace_bounds(seed):
    pair, Sigma = subspace_instance(seed)
    r = subspace_bound_check(pair, Sigma)
    assert r.hypothesis_ok
    assert r.norm <= r.bound + 1e-9
    assert r.norm < 1.0
    assert max(r.kernel_norm, r.kernel_norm_dual) <= r.kernel_bound + 1e-9


class TestTruncate:
    def test_identity_truncation(self):
        rng = np.random.default_rng(2)
        A = random_hermitian(rng, 6)
        p = make_pair(A, rng.standard_normal(6))
        q = truncate_filter(p, ApproxScheme(np.eye(6), 6, 0.1))
        np.testing.assert_allclose(q.eigA.values, p.eigA.values, atol=1e-12)
        np.testing.assert_allclose(q.B, p.B, atol=1e-12)

    def test_diagonal_block(self):
        A = np.diag([-1.0, 0.0, 2.0, 5.0])
        p = make_pair(A, np.ones(4))
        q = truncate_filter(p, ApproxScheme(np.eye(4), 2, 0.1))
        np.testing.assert_allclose(q.A, np.diag([-1.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(q.phi, [1.0, 1.0])

    def test_filter_moves_stray_eigenvalues_to_shift(self):
        A = jacobi_surrogate(20)
        p = make_pair(A, np.eye(20)[0])
        s = normalising_shift(p)
        q = truncate_filter(p, ApproxScheme(np.eye(20), 7, 1e-3))
        ref = p.eigA.values
        for v in q.eigA.values:
            assert np.min(np.abs(ref - v)) <= 1e-3 or v == pytest.approx(s, abs=1e-12)

    def test_bad_M(self):
        p = make_pair(np.eye(3), np.ones(3))
        with pytest.raises(ValueError):
            truncate_filter(p, ApproxScheme(np.eye(3), 4, 0.1))

    def test_gap_inclusion_on_surrogate(self):
        A = jacobi_surrogate(200)
        phi = np.zeros(200)
        phi[:2] = 0.6, 0.3
        p = make_pair(A, phi)
        I = IntervalSet([(-math.inf, 0.0)])
        study = convergence_study(p, I, [50])
        row = study.rows[0]
        assert row.min_boundary_dist_A >= study.eta - 1e-9


def test_convergence_identity_and_decay():
    A = jacobi_surrogate(120)
    phi = np.zeros(120)
    phi[:2] = 0.6, 0.3
    p = make_pair(A, phi)
    study = convergence_study(p, IntervalSet([(-math.inf, 0.0)]), [20, 40, 80, 120])
    last = study.rows[-1]
    assert last.det_residual <= 1e-9 and last.integral_residual <= 1e-9
    assert study.M0 is not None
    assert all(r.gap_persist for r in study.rows if r.M >= study.M0)
    assert study.rows[0].det_residual >= study.rows[2].det_residual


def test_convergence_requires_main(golden):
    with pytest.raises(ValueError):
        convergence_study(golden, IntervalSet([(0.2, 2.3)]), [2])
