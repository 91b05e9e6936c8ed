"""Rank-one pairs ``(A, B = A + phi phi*)``, interval sets and boundary diagnostics."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .hermlin import EigenSystem, eig_hermitian, hermitian

INF = math.inf
DEFAULT_ETA_MIN = 1e-8
INTERLACING_RTOL = 1e-12


class IntervalSet:
    """Finite union of disjoint closed intervals; ``±inf`` endpoints allowed.

    Input intervals are sorted and overlapping or touching ones merged, so two
    descriptions of the same set compare equal.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Sequence[float]] = ()):
        items = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi) or lo > hi:
                raise ValueError(f"invalid interval ({lo}, {hi})")
            if lo == INF or hi == -INF:
                raise ValueError(f"empty interval ({lo}, {hi})")
            items.append((lo, hi))
        items.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in items:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        self.intervals: tuple[tuple[float, float], ...] = tuple(merged)

    @classmethod
    def real_line(cls) -> "IntervalSet":
        return cls([(-INF, INF)])

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls([])

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return f"IntervalSet({list(self.intervals)!r})"

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(lo) and math.isfinite(hi) for lo, hi in self.intervals)

    def boundary_points(self) -> list[float]:
        pts = []
        for lo, hi in self.intervals:
            if math.isfinite(lo):
                pts.append(lo)
            if math.isfinite(hi) and hi != lo:
                pts.append(hi)
        return pts

    def contains(self, x):
        """Closed-interval membership, vectorised over ``x``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (x >= lo) & (x <= hi)
        return out

    def complement(self) -> "IntervalSet":
        """Closure of the complement (boundary points are shared)."""
        out = []
        prev = -INF
        for lo, hi in self.intervals:
            if lo > prev:
                out.append((prev, lo))
            prev = hi
        if prev < INF:
            out.append((prev, INF))
        return IntervalSet(out)


class Classification(str, enum.Enum):
    THM_MAIN = "ThmMain"
    THM_XI_ONE = "ThmXiOne"
    TRACE_MISMATCH = "TraceMismatch"
    INVALID = "Invalid"


@dataclass(frozen=True, eq=False)
class MatrixPair:
    """Two Hermitian matrices of equal size with cached eigen-systems.

    The theorems only apply to rank-one pairs; this general form exists so the
    rank-two counterexample can be pushed through the same determinant code.
    """

    A: np.ndarray
    B: np.ndarray

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @cached_property
    def eigA(self) -> EigenSystem:
        return eig_hermitian(self.A)

    @cached_property
    def eigB(self) -> EigenSystem:
        return eig_hermitian(self.B)

    @cached_property
    def interlacing(self) -> "InterlacingReport":
        return _interlacing(self, INTERLACING_RTOL)


@dataclass(frozen=True, eq=False)
class RankOnePair(MatrixPair):
    phi: np.ndarray = field(default=None)

    @property
    def phi_norm_sq(self) -> float:
        return float(np.vdot(self.phi, self.phi).real)


def make_pair(A, phi) -> RankOnePair:
    """Build ``B = A + phi phi*`` and both eigen-systems."""
    A = hermitian(A)
    phi = np.array(phi, dtype=complex).reshape(-1)
    if phi.shape[0] != A.shape[0]:
        raise ValueError(f"phi has length {phi.shape[0]}, A has dimension {A.shape[0]}")
    phi.setflags(write=False)
    B = A + np.outer(phi, phi.conj())
    B = 0.5 * (B + B.conj().T)
    B.setflags(write=False)
    pair = RankOnePair(A=A, B=B, phi=phi)
    pair.eigA, pair.eigB  # noqa: B018 - populate the caches eagerly
    return pair


def make_matrix_pair(A, B) -> MatrixPair:
    return MatrixPair(A=hermitian(A), B=hermitian(B))


def lanczos_deflate(A, phi, tol: float | None = None) -> tuple[np.ndarray, float]:
    """Tridiagonal representation of ``A`` on the Krylov space of ``phi``.

    Runs Lanczos with full reorthogonalisation and stops at breakdown, when
    the next off-diagonal coefficient drops below ``tol`` (default
    ``1e-10 * ||A||``).  In the returned basis ``phi`` becomes
    ``||phi|| e_1``; the second return value is ``||phi||``.
    """
    A = np.asarray(A, dtype=complex)
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    beta0 = float(np.linalg.norm(phi))
    if beta0 == 0.0:
        raise ValueError("phi = 0 has a trivial cyclic subspace")
    n = A.shape[0]
    if tol is None:
        tol = 1e-10 * max(float(np.linalg.norm(A, 2)), np.finfo(float).tiny)
    Q = np.zeros((n, n), dtype=complex)
    alphas: list[float] = []
    betas: list[float] = []
    Q[:, 0] = phi / beta0
    for k in range(n):
        w = A @ Q[:, k]
        alpha = float(np.vdot(Q[:, k], w).real)
        alphas.append(alpha)
        w = w - alpha * Q[:, k]
        if k > 0:
            w = w - betas[-1] * Q[:, k - 1]
        # Two passes of Gram-Schmidt against the whole basis.
        for _ in range(2):
            w = w - Q[:, : k + 1] @ (Q[:, : k + 1].conj().T @ w)
        beta = float(np.linalg.norm(w))
        if k == n - 1 or beta < tol:
            break
        betas.append(beta)
        Q[:, k + 1] = w / beta
    m = len(alphas)
    T = np.diag(np.array(alphas, dtype=complex))
    if m > 1:
        off = np.array(betas[: m - 1], dtype=complex)
        T += np.diag(off, 1) + np.diag(off, -1)
    return T, beta0


def deflate_pair(pair: RankOnePair, tol: float | None = None) -> RankOnePair | None:
    """The pair restricted to the cyclic subspace of ``phi``; None when phi = 0."""
    if not np.any(pair.phi):
        return None
    T, scale = lanczos_deflate(pair.A, pair.phi, tol)
    e1 = np.zeros(T.shape[0], dtype=complex)
    e1[0] = scale
    return make_pair(T, e1)


class InterlacingReport(NamedTuple):
    ok: bool
    margin: float


def interlacing_report(pair: MatrixPair, rtol: float = INTERLACING_RTOL) -> InterlacingReport:
    """Check ``a_1 < b_1 < a_2 < ... < a_M < b_M``.

    ``margin`` is the smallest consecutive gap of the merged sequence.  Gaps
    below ``rtol * max(1, ||A||)`` count as equalities.  The default-tolerance
    result is cached on the pair.
    """
    if rtol == INTERLACING_RTOL:
        return pair.interlacing
    return _interlacing(pair, rtol)


def _interlacing(pair: MatrixPair, rtol: float) -> InterlacingReport:
    a, b = pair.eigA.values, pair.eigB.values
    seq = np.empty(2 * a.size)
    seq[0::2] = a
    seq[1::2] = b
    margin = float(np.min(np.diff(seq))) if seq.size > 1 else INF
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    if margin <= rtol * scale:
        return InterlacingReport(False, 0.0)
    return InterlacingReport(True, margin)


def cyclic_part(pair: RankOnePair) -> RankOnePair | None:
    """``pair`` itself when it interlaces strictly, otherwise its deflation."""
    if interlacing_report(pair).ok:
        return pair
    return deflate_pair(pair)


def ssf_count(pair: MatrixPair, E: float) -> int:
    """``tr(1_(-inf,E)(A) - 1_(-inf,E)(B))``, the SSF at a resolvent point."""
    return int(np.sum(pair.eigA.values < E)) - int(np.sum(pair.eigB.values < E))


@dataclass(frozen=True)
class BoundaryReport:
    gap_distance: float
    xi_on_boundary: tuple[int, ...]
    JA: tuple[int, ...]
    JB: tuple[int, ...]
    classification: Classification

    @property
    def index(self) -> int:
        return len(self.JA) - len(self.JB)


def index_sets(pair: MatrixPair, I: IntervalSet) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """0-based ``{j: a_j in I}`` and ``{k: b_k in I}``."""
    JA = tuple(int(j) for j in np.flatnonzero(I.contains(pair.eigA.values)))
    JB = tuple(int(k) for k in np.flatnonzero(I.contains(pair.eigB.values)))
    return JA, JB


def gap_distance(pair: MatrixPair, I: IntervalSet) -> float:
    pts = I.boundary_points()
    if not pts:
        return INF
    spec = np.concatenate([pair.eigA.values, pair.eigB.values])
    return float(min(np.min(np.abs(spec - x)) for x in pts))


def classify_boundary(pair: MatrixPair, I: IntervalSet, eta_min: float = DEFAULT_ETA_MIN) -> BoundaryReport:
    """Decide which of the determinant theorems applies to ``(pair, I)``.

    Order of checks: gap too small -> Invalid; ``|JA| != |JB|`` ->
    TraceMismatch; boundary SSF all 0 -> ThmMain; all 1 -> ThmXiOne; mixed
    -> Invalid.
    """
    gap = gap_distance(pair, I)
    xi = tuple(ssf_count(pair, x) for x in I.boundary_points())
    JA, JB = index_sets(pair, I)
    if not gap > eta_min:
        cls = Classification.INVALID
    elif len(JA) != len(JB):
        cls = Classification.TRACE_MISMATCH
    elif all(v == 0 for v in xi):
        cls = Classification.THM_MAIN
    elif all(v == 1 for v in xi):
        cls = Classification.THM_XI_ONE
    else:
        cls = Classification.INVALID
    return BoundaryReport(gap, xi, JA, JB, cls)
