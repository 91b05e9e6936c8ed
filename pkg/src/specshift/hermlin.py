"""Dense Hermitian linear algebra: Jacobi eigensolver, spectral projectors, norms.

Everything here works on small-to-medium dense matrices.  The eigensolver is a
cyclic complex Jacobi iteration with a deterministic phase convention, so two
calls on the same input give bit-identical eigenvectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .pairmodel import IntervalSet

HERMITIAN_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
JACOBI_REL_TOL = 1e-13
# Above this size the LAPACK driver is used unless method="jacobi" is forced.
JACOBI_AUTO_MAX_DIM = 64
PHASE_THRESHOLD = 1e-8
DEFAULT_GUARD = 1e-9


class ConvergenceError(RuntimeError):
    """Jacobi iteration hit the sweep cap."""


class BoundaryCollision(ValueError):
    """An eigenvalue sits inside the guard band around a boundary point."""

    def __init__(self, eigenvalue: float, boundary: float, guard: float):
        self.eigenvalue = eigenvalue
        self.boundary = boundary
        self.guard = guard
        super().__init__(
            f"eigenvalue {eigenvalue!r} lies within {guard:g} of boundary point {boundary!r}"
        )


def hermitian(entries, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return ``entries`` as a complex Hermitian array.

    The returned array is exactly Hermitian (symmetrised) and read-only.
    """
    H = np.array(entries, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {H.shape}")
    dev = np.max(np.abs(H - H.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |H - H*| = {dev:.3e})")
    H = 0.5 * (H + H.conj().T)
    H.setflags(write=False)
    return H


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.values) @ V.conj().T

    def rephased(self, phases) -> "EigenSystem":
        """Return a copy with column k multiplied by ``phases[k]`` (unit modulus)."""
        phases = np.asarray(phases, dtype=complex)
        return EigenSystem(self.values, self.vectors * phases[None, :])


@dataclass(frozen=True)
class Projector:
    matrix: np.ndarray
    rank: int


def _fix_phases(V: np.ndarray) -> np.ndarray:
    V = V.copy()
    big = np.abs(V) > PHASE_THRESHOLD
    cols = np.flatnonzero(big.any(axis=0))
    rows = big[:, cols].argmax(axis=0)  # first qualifying entry per column
    z = V[rows, cols]
    mag = np.abs(z)
    V[:, cols] *= mag / z
    V[rows, cols] = mag  # exactly real, no rounding residue
    return V


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


@lru_cache(maxsize=64)
def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint (p, q) pair sets covering every p < q once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        P, Q = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                P.append(min(p, q))
                Q.append(max(p, q))
        rounds.append((np.array(P, dtype=int), np.array(Q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_2x2(A: np.ndarray):
    # one rotation is exact for n = 2; scalar arithmetic avoids array overhead
    a, d, b = A[0, 0].real, A[1, 1].real, complex(A[0, 1])
    mag = abs(b)
    if mag <= np.finfo(float).eps * 1e-3 * max(math.hypot(a, d), mag, np.finfo(float).tiny):
        return np.array([a, d]), np.eye(2, dtype=complex)
    ph = b / mag
    tau = (d - a) / (2.0 * mag)
    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    V = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]], dtype=complex)
    return np.array([a - t * mag, d + t * mag]), V


def jacobi_eigh(H, max_sweeps: int = JACOBI_MAX_SWEEPS, rel_tol: float = JACOBI_REL_TOL):
    """Cyclic Jacobi diagonalisation of a complex Hermitian matrix.

    Sweeps use the round-robin (Brent-Luk) ordering, so each step applies
    n/2 disjoint rotations at once.  A rotation first removes the phase of the
    pivot entry with a diagonal unitary, then applies the classical real
    rotation.  Iteration stops one sweep after the off-diagonal Frobenius norm
    drops below ``rel_tol * ||H||_F``.  Returns unsorted ``(values, vectors)``.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    if n == 2:
        return _jacobi_2x2(A)
    V = np.eye(n, dtype=complex)
    if n == 1:
        return A.diagonal().real.copy(), V
    fro = np.linalg.norm(A)
    target = rel_tol * fro
    tiny = np.finfo(float).eps * 1e-3 * max(fro, np.finfo(float).tiny)
    rounds = _round_robin(n)
    converged = False
    for _ in range(max_sweeps):
        if _offdiag_norm(A) <= target:
            if converged:
                break
            converged = True
        for P, Q in rounds:
            apq = A[P, Q]
            mag = np.abs(apq)
            live = mag > tiny
            if not live.any():
                continue
            safe = np.where(live, mag, 1.0)
            ph = np.where(live, apq / safe, 1.0)
            tau = (A[Q, Q].real - A[P, P].real) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # Block on (p, q): [[c, s], [-s conj(ph), c conj(ph)]]
            g_pp, g_pq = c, s
            g_qp, g_qq = -s * ph.conjugate(), c * ph.conjugate()
            colp, colq = A[:, P], A[:, Q]
            A[:, P] = colp * g_pp + colq * g_qp
            A[:, Q] = colp * g_pq + colq * g_qq
            rowp, rowq = A[P, :], A[Q, :]
            A[P, :] = g_pp[:, None] * rowp + g_qp.conjugate()[:, None] * rowq
            A[Q, :] = g_pq[:, None] * rowp + g_qq.conjugate()[:, None] * rowq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = V[:, P], V[:, Q]
            V[:, P] = vp * g_pp + vq * g_qp
            V[:, Q] = vp * g_pq + vq * g_qq
    else:
        off = _offdiag_norm(A)
        if off > target:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal residual {off:.3e}, target {target:.3e})"
            )
    return A.diagonal().real.copy(), V


def eig_hermitian(H, method: str = "auto") -> EigenSystem:
    """Eigendecomposition with ascending values and a fixed phase convention.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_AUTO_MAX_DIM``).  Ties keep the solver's order (stable sort).
    The first entry of each eigenvector with modulus above 1e-8 is made real
    positive.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if method == "auto":
        method = "jacobi" if n <= JACOBI_AUTO_MAX_DIM else "lapack"
    if method == "jacobi":
        w, V = jacobi_eigh(H)
    elif method == "lapack":
        w, V = np.linalg.eigh(H)
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")
    order = np.argsort(w, kind="stable")
    values = w[order]
    vectors = _fix_phases(V[:, order])
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(values, vectors)


def spectral_projector(E: EigenSystem, I: "IntervalSet", guard: float = DEFAULT_GUARD) -> Projector:
    """Orthogonal projector onto eigenvectors whose eigenvalue lies in ``I``.

    Raises BoundaryCollision if an eigenvalue is within ``guard`` of a finite
    boundary point of ``I``.
    """
    for x in I.boundary_points():
        d = np.abs(E.values - x)
        k = int(np.argmin(d))
        if d[k] <= guard:
            raise BoundaryCollision(float(E.values[k]), float(x), guard)
    mask = I.contains(E.values)
    Vs = E.vectors[:, mask]
    return Projector(Vs @ Vs.conj().T, int(mask.sum()))


def op_norm(M) -> float:
    """Largest singular value, as sqrt of the top eigenvalue of M*M."""
    M = np.asarray(M, dtype=complex)
    if not np.any(M):
        return 0.0
    G = M.conj().T @ M
    G = 0.5 * (G + G.conj().T)
    top = eig_hermitian(G).values[-1]
    return math.sqrt(max(top, 0.0))


def trace(M) -> complex:
    return complex(np.trace(np.asarray(M)))
