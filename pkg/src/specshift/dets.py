"""Section determinants of spectral projections and the eigenvalue products behind them.

Three independent routes compute ``det(1 - P_I(A) P_{I^c}(B) P_I(A))``:

* ``"direct"``  - eigenvalues of the compressed product of projectors;
* ``"overlap"`` - squared modulus of the eigenvector overlap determinant;
* ``"product"`` - closed product over eigenvalue gaps (no eigenvectors).

Index sets are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .hermlin import DEFAULT_GUARD, eig_hermitian, spectral_projector
from .pairmodel import IntervalSet, MatrixPair, RankOnePair, index_sets, interlacing_report
from .ssf import InterlacingError

METHODS = ("direct", "overlap", "product")
ROUTES = ("direct", "eigenvalue_equation")


class CardinalityMismatch(ValueError):
    pass


class CoincidentNodes(ValueError):
    pass


@dataclass(frozen=True)
class OverlapMatrix:
    entries: np.ndarray
    route: str

    def det_abs_sq(self) -> float:
        if self.entries.size == 0:
            return 1.0
        return float(abs(np.linalg.det(self.entries)) ** 2)


def _check_cardinality(JA, JB):
    if len(JA) != len(JB):
        raise CardinalityMismatch(f"|JA| = {len(JA)} but |JB| = {len(JB)}")


def overlap_matrix(pair: MatrixPair, JA: Sequence[int], JB: Sequence[int], route: str = "direct") -> OverlapMatrix:
    """Matrix of ``<phi_j, psi_k>`` for ``j in JA``, ``k in JB``.

    ``route="eigenvalue_equation"`` uses
    ``<phi_j, psi_k> = <phi_j, phi><phi, psi_k> / (b_k - a_j)`` instead of the
    stored eigenvector products.
    """
    _check_cardinality(JA, JB)
    JA, JB = list(JA), list(JB)
    VA = pair.eigA.vectors[:, JA]
    VB = pair.eigB.vectors[:, JB]
    if route == "direct":
        return OverlapMatrix(VA.conj().T @ VB, route)
    if route != "eigenvalue_equation":
        raise ValueError(f"unknown route {route!r}")
    a = pair.eigA.values[JA]
    b = pair.eigB.values[JB]
    gaps = b[None, :] - a[:, None]
    if np.any(gaps == 0):
        raise ZeroDivisionError("b_k == a_j for some pair; the pair does not interlace")
    left = VA.conj().T @ pair.phi
    right = pair.phi.conj() @ VB
    return OverlapMatrix(np.outer(left, right) / gaps, route)


def _log_abs_sum(values) -> float:
    return math.fsum(math.log(abs(v)) for v in values)


def residue_weights(pair: RankOnePair) -> tuple[np.ndarray, np.ndarray]:
    """``|<phi_j, phi>|^2`` and ``|<psi_k, phi>|^2`` from eigenvalues alone.

    ``wA[j] = |b_j - a_j| prod_{l != j} |b_l - a_j| / |a_l - a_j|`` and the
    mirror formula for ``wB``; products are accumulated as sums of logs.
    """
    if not interlacing_report(pair).ok:
        raise InterlacingError("residue weights need strict interlacing")
    a, b = pair.eigA.values, pair.eigB.values
    M = a.size
    wA = np.empty(M)
    wB = np.empty(M)
    for j in range(M):
        others = [l for l in range(M) if l != j]
        logA = math.log(abs(b[j] - a[j])) + _log_abs_sum(b[others] - a[j]) - _log_abs_sum(a[others] - a[j])
        logB = math.log(abs(a[j] - b[j])) + _log_abs_sum(a[others] - b[j]) - _log_abs_sum(b[others] - b[j])
        wA[j] = math.exp(logA)
        wB[j] = math.exp(logB)
    return wA, wB


def residue_weights_signed(pair: RankOnePair) -> tuple[np.ndarray, np.ndarray]:
    """The same products without absolute values:
    ``(b_j - a_j) prod (b_l - a_j)/(a_l - a_j)`` and ``(a_k - b_k) prod (a_l - b_k)/(b_l - b_k)``.

    Under ``a_1 < b_1 < a_2 < ...`` the second family comes out negative, the
    negative of the true weight.  Kept for diagnostics only.
    """
    a, b = pair.eigA.values, pair.eigB.values
    M = a.size
    sA = np.empty(M)
    sB = np.empty(M)
    for j in range(M):
        others = [l for l in range(M) if l != j]
        sA[j] = (b[j] - a[j]) * np.prod((b[others] - a[j]) / (a[others] - a[j]))
        sB[j] = (a[j] - b[j]) * np.prod((a[others] - b[j]) / (b[others] - b[j]))
    return sA, sB


def cauchy_det_closed(a_sub, b_sub) -> float:
    """``det(1 / (b_k - a_j))_{j,k}`` by the Cauchy product formula.

    ``prod_{j<k} (a_k - a_j)(b_j - b_k) / prod_{j,k} (a_j - b_k)``, times
    ``(-1)^N``; magnitudes in log space, signs counted separately.
    """
    a = np.asarray(a_sub, dtype=float)
    b = np.asarray(b_sub, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("a_sub and b_sub must be 1-D of equal length")
    N = a.size
    if N == 0:
        return 1.0
    if np.unique(a).size != N or np.unique(b).size != N:
        raise CoincidentNodes("nodes repeat within a_sub or b_sub")
    cross = a[:, None] - b[None, :]
    if np.any(cross == 0):
        raise CoincidentNodes("some b_k equals some a_j")
    iu = np.triu_indices(N, 1)
    num = np.concatenate([(a[None, :] - a[:, None])[iu], (b[:, None] - b[None, :])[iu]])
    den = cross.ravel()
    log_mag = np.sum(np.log(np.abs(num))) - np.sum(np.log(np.abs(den)))
    neg = int(np.sum(num < 0)) + int(np.sum(den < 0)) + N
    return (-1.0 if neg % 2 else 1.0) * math.exp(log_mag)


def _complement(J, M) -> list[int]:
    s = set(J)
    return [i for i in range(M) if i not in s]


def log_product_section_det(a, b, JA: Sequence[int], JB: Sequence[int]) -> float:
    """``ln |det(<phi_j, psi_k>)_{j in JA, k in JB}|^2`` from eigenvalues only.

    General relabelled product: with ``l`` running over ``JA`` then its
    complement and ``m`` over ``JB`` then its complement,
    ``prod_{j<=N<k} |b_{m_k} - a_{l_j}| |a_{l_k} - b_{m_j}| /
    (|a_{l_k} - a_{l_j}| |b_{m_k} - b_{m_j}|)``.
    """
    _check_cardinality(JA, JB)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    M = a.size
    JA, JB = sorted(JA), sorted(JB)
    cA, cB = _complement(JA, M), _complement(JB, M)
    if not JA or not cA:
        return 0.0
    aJ, bJ = a[JA][:, None], b[JB][:, None]
    aC, bC = a[cA][None, :], b[cB][None, :]
    terms = (
        np.log(np.abs(bC - aJ)) + np.log(np.abs(aC - bJ))
        - np.log(np.abs(aC - aJ)) - np.log(np.abs(bC - bJ))
    )
    return math.fsum(terms.ravel())


def _interlaced(pair: MatrixPair):
    if not isinstance(pair, RankOnePair) or not interlacing_report(pair).ok:
        raise InterlacingError("product route needs a strictly interlacing rank-one pair")


class DirectDet(NamedTuple):
    value: float
    log_value: float
    spectrum: np.ndarray
    deviation: float


def _direct(pair: MatrixPair, inner: IntervalSet, outer: IntervalSet, guard: float) -> DirectDet:
    P = spectral_projector(pair.eigA, inner, guard).matrix
    Qc = spectral_projector(pair.eigB, outer, guard).matrix
    T = P @ Qc @ P
    T = 0.5 * (T + T.conj().T)
    t = np.asarray(eig_hermitian(T).values)
    deviation = float(max(0.0, -t.min(), t.max() - 1.0)) if t.size else 0.0
    tc = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore"):
        logs = np.log1p(-tc)
    log_value = float(math.fsum(logs)) if np.all(np.isfinite(logs)) else -math.inf
    return DirectDet(math.exp(log_value), log_value, t, deviation)


def direct_section_det(pair: MatrixPair, I: IntervalSet, dual: bool = False, guard: float = DEFAULT_GUARD) -> DirectDet:
    """Direct route with the raw spectrum of the compressed product.

    ``log_value`` is accumulated with ``log1p`` so ``-ln det`` keeps full
    relative accuracy when the determinant is close to 1.
    """
    Ic = I.complement()
    if dual:
        return _direct(pair, Ic, I, guard)
    return _direct(pair, I, Ic, guard)


def _log_section_det(pair, I, method, dual, guard) -> float:
    if method == "direct":
        return direct_section_det(pair, I, dual, guard).log_value
    JA, JB = index_sets(pair, I)
    if dual:
        M = pair.dim
        JA, JB = _complement(JA, M), _complement(JB, M)
    if method == "overlap":
        _check_cardinality(JA, JB)
        val = overlap_matrix(pair, JA, JB, "direct").det_abs_sq()
        return math.log(val) if val > 0 else -math.inf
    if method == "product":
        _interlaced(pair)
        return log_product_section_det(pair.eigA.values, pair.eigB.values, JA, JB)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def log_section_det(pair: MatrixPair, I: IntervalSet, method: str = "direct", guard: float = DEFAULT_GUARD) -> float:
    return _log_section_det(pair, I, method, False, guard)


def log_section_det_dual(pair: MatrixPair, I: IntervalSet, method: str = "direct", guard: float = DEFAULT_GUARD) -> float:
    return _log_section_det(pair, I, method, True, guard)


def section_det(pair: MatrixPair, I: IntervalSet, method: str = "direct", guard: float = DEFAULT_GUARD) -> float:
    """``det(1 - P_I(A) P_{I^c}(B) P_I(A))`` by the chosen route, in [0, 1]."""
    return math.exp(log_section_det(pair, I, method, guard))


def section_det_dual(pair: MatrixPair, I: IntervalSet, method: str = "direct", guard: float = DEFAULT_GUARD) -> float:
    """``det(1 - P_{I^c}(A) P_I(B) P_{I^c}(A))``; overlap/product use complement index sets."""
    return math.exp(log_section_det_dual(pair, I, method, guard))


def diff_sq_det(pair: MatrixPair, I: IntervalSet, guard: float = DEFAULT_GUARD) -> float:
    """``det(1 - (P_I(A) - P_I(B))^2)`` as primal times dual (direct route)."""
    return section_det(pair, I, "direct", guard) * section_det_dual(pair, I, "direct", guard)


def diff_sq_det_matrix(pair: MatrixPair, I: IntervalSet, guard: float = DEFAULT_GUARD) -> float:
    """Cross-check of :func:`diff_sq_det` straight from ``D = P_I(A) - P_I(B)``."""
    D = spectral_projector(pair.eigA, I, guard).matrix - spectral_projector(pair.eigB, I, guard).matrix
    G = np.eye(pair.dim) - D @ D
    G = 0.5 * (G + G.conj().T)
    return float(np.prod(np.clip(eig_hermitian(G).values, 0.0, None)))


def index_trace(pair: MatrixPair, I: IntervalSet) -> int:
    """``tr(P_I(A) - P_I(B)) = |JA| - |JB|``."""
    JA, JB = index_sets(pair, I)
    return len(JA) - len(JB)

