import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_hermitian
from specshift.hermlin import (
    BoundaryCollision,
    ConvergenceError,
    eig_hermitian,
    hermitian,
    jacobi_eigh,
    op_norm,
    spectral_projector,
    trace,
)
from specshift.pairmodel import IntervalSet


def test_diagonal_input_is_returned_as_is():
    E = eig_hermitian(np.diag([0.0, 3.0]))
    np.testing.assert_array_equal(E.values, [0.0, 3.0])
    np.testing.assert_allclose(E.vectors, np.eye(2), atol=0)


def test_two_by_two_matches_characteristic_polynomial():
    # x^2 - 3x + 1 = 0
    E = eig_hermitian([[0.5, 0.5], [0.5, 2.5]])
    np.testing.assert_allclose(E.values, [(3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2], atol=1e-14)


def test_non_hermitian_rejected():
    with pytest.raises(ValueError):
        hermitian([[0.0, 1.0], [0.0, 0.0]])


def test_outputs_are_read_only():
    E = eig_hermitian(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        E.values[0] = 5.0


@given(st.integers(0, 2**32 - 1), st.integers(1, 24))
def test_residual_and_orthonormality(seed, n):
    H = random_hermitian(np.random.default_rng(seed), n)
    E = eig_hermitian(H, method="jacobi")
    scale = max(1.0, np.linalg.norm(H, 2))
    assert np.all(np.diff(E.values) >= 0)
    res = H @ E.vectors - E.vectors * E.values
    assert np.max(np.linalg.norm(res, axis=0)) <= 1e-10 * scale
    np.testing.assert_allclose(E.vectors.conj().T @ E.vectors, np.eye(n), atol=1e-10)
    assert np.linalg.norm(E.reconstruct() - H, 2) <= 1e-9 * scale


@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_jacobi_agrees_with_lapack(seed, n):
    H = random_hermitian(np.random.default_rng(seed), n)
    np.testing.assert_allclose(eig_hermitian(H, "jacobi").values, np.linalg.eigvalsh(H), atol=1e-11)


def test_phase_convention_and_determinism():
    H = random_hermitian(np.random.default_rng(3), 9)
    E1, E2 = eig_hermitian(H), eig_hermitian(H.copy())
    np.testing.assert_array_equal(E1.values, E2.values)
    np.testing.assert_array_equal(E1.vectors, E2.vectors)
    for k in range(9):
        v = E1.vectors[:, k]
        first = v[np.flatnonzero(np.abs(v) > 1e-8)[0]]
        assert first.imag == 0 and first.real > 0


def test_large_dim_uses_lapack_path():
    H = random_hermitian(np.random.default_rng(5), 80)
    E = eig_hermitian(H)
    np.testing.assert_allclose(E.values, np.linalg.eigvalsh(H), atol=1e-10)


def test_nonconvergence_reports_residual():
    H = random_hermitian(np.random.default_rng(1), 12)
    with pytest.raises(ConvergenceError, match="residual"):
        jacobi_eigh(H, max_sweeps=1)


def test_projector_examples():
    E = eig_hermitian(np.diag([0.0, 3.0]))
    P = spectral_projector(E, IntervalSet([(-1.0, 1.0)]))
    np.testing.assert_allclose(P.matrix, np.diag([1.0, 0.0]))
    assert P.rank == 1
    full = spectral_projector(E, IntervalSet.real_line())
    np.testing.assert_allclose(full.matrix, np.eye(2))
    assert full.rank == 2
    none = spectral_projector(E, IntervalSet.empty())
    assert none.rank == 0 and not np.any(none.matrix)


def test_boundary_collision_names_eigenvalue():
    E = eig_hermitian(np.diag([0.0, 3.0]))
    with pytest.raises(BoundaryCollision) as info:
        spectral_projector(E, IntervalSet([(-1.0, 3.0 + 1e-12)]))
    assert info.value.eigenvalue == 3.0


@given(st.integers(0, 2**32 - 1), st.integers(2, 12))
def test_projector_complement_and_norm(seed, n):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, n)
    E = eig_hermitian(H)
    cut = 0.5 * (E.values[n // 2 - 1] + E.values[n // 2])
    if E.values[n // 2] - E.values[n // 2 - 1] < 1e-6:
        return
    I = IntervalSet([(-math.inf, cut)])
    P = spectral_projector(E, I)
    Q = spectral_projector(E, I.complement())
    np.testing.assert_allclose(P.matrix + Q.matrix, np.eye(n), atol=1e-10)
    np.testing.assert_allclose(P.matrix @ P.matrix, P.matrix, atol=1e-10)
    assert abs(trace(P.matrix).real - P.rank) <= 1e-8
    assert abs(op_norm(P.matrix) - 1.0) <= 1e-10


def test_op_norm_and_trace_examples():
    assert op_norm(np.zeros((3, 3))) == 0.0
    assert op_norm(np.diag([0.3, -0.7])) == pytest.approx(0.7, abs=1e-15)
    assert trace(np.eye(3)) == 3
    phi = np.array([1.0, 1.0]) / math.sqrt(2)
    assert trace(np.outer(phi, phi)) == pytest.approx(1.0, abs=1e-15)
