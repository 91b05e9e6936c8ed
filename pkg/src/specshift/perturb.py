"""Subspace perturbation bounds and finite-rank truncation studies."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dets import log_section_det
from .hermlin import eig_hermitian, op_norm
from .pairmodel import (
    Classification,
    IntervalSet,
    RankOnePair,
    classify_boundary,
    gap_distance,
    make_pair,
    ssf_count,
)
from .xint import xi_interaction


class HypothesisViolation(ValueError):
    pass


def enlarged_set(Sigma: IntervalSet, delta: float) -> IntervalSet:
    """``Sigma + [0, delta]``: every ``[lo, hi]`` becomes ``[lo, hi + delta]``, then merged."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if not Sigma.bounded:
        raise ValueError("Sigma must be bounded")
    return IntervalSet((lo, hi + delta) for lo, hi in Sigma)


def _padded_projector(E, S: IntervalSet, scale: float, open_right: bool = False):
    # Sigma and Sigma_delta have endpoints on eigenvalues of A by construction
    # (Sigma = {a} is allowed), so membership is decided on a slightly padded
    # set instead of with a guard band.  Sigma_delta is taken right-open: an
    # eigenvalue of A sitting exactly at hi + delta and untouched by phi must
    # not be pulled in.
    pad = 1e-9 * max(1.0, scale)
    right = -pad if open_right else pad
    padded = IntervalSet((lo - pad, hi + right) for lo, hi in S)
    mask = padded.contains(E.values)
    V = E.vectors[:, mask]
    return V @ V.conj().T, mask


def _scale(pair: RankOnePair) -> float:
    return float(max(np.max(np.abs(pair.eigA.values)), np.max(np.abs(pair.eigB.values))))


def _sigma_projector(pair: RankOnePair, Sigma: IntervalSet):
    return _padded_projector(pair.eigA, Sigma, _scale(pair))


def sigma_gap(pair: RankOnePair, Sigma: IntervalSet) -> float:
    """``dist(Sigma, sigma(A) minus Sigma)``; ``inf`` if every eigenvalue is in Sigma."""
    _, mask = _sigma_projector(pair, Sigma)
    rest = pair.eigA.values[~mask]
    if rest.size == 0:
        return math.inf
    dists = []
    for lo, hi in Sigma:
        dists.append(np.min(np.maximum(np.maximum(lo - rest, rest - hi), 0.0)))
    return float(min(dists))


def projector_diff_norm(pair: RankOnePair, Sigma: IntervalSet, SigmaD: IntervalSet) -> float:
    """``||P_Sigma(A) - P_SigmaD(B)||``; ``Sigma`` closed, ``SigmaD`` open at its right ends."""
    P, _ = _sigma_projector(pair, Sigma)
    Q, _ = _padded_projector(pair.eigB, SigmaD, _scale(pair), open_right=True)
    return op_norm(P - Q)


@dataclass(frozen=True)
class SubspaceReport:
    delta: float
    phi_norm_sq: float
    norm: float
    bound: float
    hypothesis_ok: bool
    strict_lt_one: bool
    strict_lt_ratio: bool
    kernel_norm: float
    kernel_norm_dual: float
    kernel_bound: float


def subspace_bound_check(pair: RankOnePair, Sigma: IntervalSet, slack: float = 1e-9) -> SubspaceReport:
    """Evaluate ``||P_Sigma(A) - P_{Sigma + [0, delta]}(B)||`` against ``||phi||^2 / delta``.

    Also reports ``||P Q' P||`` and its dual (``P = P_Sigma(A)``,
    ``Q' = 1 - P_{Sigma_delta}(B)``) next to ``||phi||^4 / delta^2``.  When
    ``delta <= ||phi||^2`` the report is returned with ``hypothesis_ok`` false
    and the claims are not evaluated as passes.
    """
    delta = sigma_gap(pair, Sigma)
    v = pair.phi_norm_sq
    if not math.isfinite(delta):
        raise HypothesisViolation("Sigma contains the whole spectrum of A")
    SigmaD = enlarged_set(Sigma, delta)
    P, _ = _sigma_projector(pair, Sigma)
    Q, _ = _padded_projector(pair.eigB, SigmaD, _scale(pair), open_right=True)
    n = op_norm(P - Q)
    eye = np.eye(pair.dim)
    k1 = op_norm(P @ (eye - Q) @ P)
    k2 = op_norm((eye - P) @ Q @ (eye - P))
    hyp = delta > v
    bound = v / delta
    return SubspaceReport(
        delta=delta,
        phi_norm_sq=v,
        norm=n,
        bound=bound,
        hypothesis_ok=hyp,
        strict_lt_one=hyp and n < 1.0,
        strict_lt_ratio=hyp and n <= bound + slack,
        kernel_norm=k1,
        kernel_norm_dual=k2,
        kernel_bound=v * v / (delta * delta),
    )


@dataclass(frozen=True)
class ApproxScheme:
    """Truncation to the first ``M`` vectors of ``basis`` plus a spectral filter of radius ``epsilon``."""

    basis: np.ndarray
    M: int
    epsilon: float

    def eta(self, delta: float) -> float:
        return delta - self.epsilon


def normalising_shift(pair: RankOnePair) -> float:
    """The eigenvalue of A closest to 0; subtracting it puts 0 in the spectrum."""
    a = pair.eigA.values
    return float(a[np.argmin(np.abs(a))])


def truncate_filter(pair_full: RankOnePair, scheme: ApproxScheme) -> RankOnePair:
    """Finite-rank approximation ``(A_M, B_M)`` of a reference pair.

    Works in the frame shifted so that ``0`` is an eigenvalue of A:
    compress to the first ``M`` basis vectors, zero the eigenvalues of the
    compression farther than ``epsilon`` from the reference spectrum, then
    shift back.  Returned in the original frame, so interval data need no
    adjustment.  ``B_M`` adds the compressed ``phi``.
    """
    n = pair_full.dim
    M = scheme.M
    if not 1 <= M <= n:
        raise ValueError(f"M = {M} out of range 1..{n}")
    s = normalising_shift(pair_full)
    U = np.asarray(scheme.basis, dtype=complex)
    At = (U.conj().T @ (pair_full.A - s * np.eye(n)) @ U)[:M, :M]
    At = 0.5 * (At + At.conj().T)
    E = eig_hermitian(At)
    ref = pair_full.eigA.values - s
    keep = np.array([np.min(np.abs(ref - lam)) <= scheme.epsilon for lam in E.values])
    vals = np.where(keep, E.values, 0.0)
    AM = (E.vectors * vals) @ E.vectors.conj().T + s * np.eye(M)
    phiM = (U.conj().T @ pair_full.phi)[:M]
    return make_pair(0.5 * (AM + AM.conj().T), phiM)


@dataclass(frozen=True)
class StudyRow:
    M: int
    classification: str
    det: float
    integral: float
    det_residual: float
    integral_residual: float
    theorem_residual: float
    gap_persist: bool
    min_boundary_dist_A: float


@dataclass(frozen=True)
class ConvergenceStudy:
    rows: list[StudyRow]
    M0: int | None
    delta: float
    epsilon: float
    eta: float


def _persists(pair_M: RankOnePair, I: IntervalSet, eta: float) -> bool:
    b = pair_M.eigB.values
    for E in I.boundary_points():
        if np.any((b >= E) & (b < E + eta)):
            return False
        if ssf_count(pair_M, E) != 0:
            return False
    return True


def convergence_study(
    pair_full: RankOnePair,
    I: IntervalSet,
    Ms: Sequence[int],
    epsilon: float | None = None,
    basis=None,
) -> ConvergenceStudy:
    """Section determinant and SSF integral of truncations against the full pair.

    ``epsilon`` defaults to ``delta / 4`` with
    ``delta = dist(boundary of I, sigma(A) u sigma(B))``.  ``M0`` is the
    smallest grid value from which the gap-persistence check holds for every
    larger grid value.
    """
    report = classify_boundary(pair_full, I)
    if report.classification != Classification.THM_MAIN:
        raise ValueError(f"reference pair is {report.classification.value}, not ThmMain")
    delta = gap_distance(pair_full, I)
    if epsilon is None:
        epsilon = delta / 4
    if not 0 < epsilon < delta / 2:
        raise ValueError("epsilon must lie in (0, delta/2)")
    eta = delta - epsilon
    if basis is None:
        basis = np.eye(pair_full.dim)
    ref_log = log_section_det(pair_full, I)
    ref_det = math.exp(ref_log)
    ref_int = xi_interaction(pair_full, I).value
    rows = []
    for M in sorted(Ms):
        pM = truncate_filter(pair_full, ApproxScheme(basis, M, epsilon))
        cls = classify_boundary(pM, I).classification
        a = pM.eigA.values
        dA = min((float(np.min(np.abs(a - E))) for E in I.boundary_points()), default=math.inf)
        try:
            lg = log_section_det(pM, I)
            det = math.exp(lg)
        except ValueError:
            lg, det = math.nan, math.nan
        if cls == Classification.THM_MAIN:
            integral = xi_interaction(pM, I).value
            thm = abs(-lg - integral)
        else:
            integral, thm = math.nan, math.nan
        rows.append(
            StudyRow(
                M=M,
                classification=cls.value,
                det=det,
                integral=integral,
                det_residual=abs(det - ref_det),
                integral_residual=abs(integral - ref_int),
                theorem_residual=thm,
                gap_persist=_persists(pM, I, eta),
                min_boundary_dist_A=dA,
            )
        )
    M0 = None
    for row in reversed(rows):
        if not row.gap_persist:
            break
        M0 = row.M
    return ConvergenceStudy(rows, M0, delta, epsilon, eta)
