"""The spectral shift function of a rank-one pair, stored exactly as a step function."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

from .hermlin import eig_hermitian
from .pairmodel import RankOnePair, interlacing_report


class InterlacingError(ValueError):
    """The pair does not interlace strictly; deflate it first."""


def _normalize(pieces) -> tuple[tuple[float, float], ...]:
    items = sorted((float(lo), float(hi)) for lo, hi in pieces if hi > lo)
    merged: list[tuple[float, float]] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class StepFunction:
    """Indicator of a finite union of half-open intervals ``(lo, hi]``."""

    pieces: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _normalize(self.pieces))

    def __call__(self, E):
        return ssf_eval(self, E)

    @property
    def support_hull(self) -> tuple[float, float] | None:
        if not self.pieces:
            return None
        return self.pieces[0][0], self.pieces[-1][1]


def ssf_of_pair(pair: RankOnePair) -> StepFunction:
    """``sum_n 1_(a_n, b_n]`` for a strictly interlacing pair; empty for phi = 0."""
    if not np.any(pair.phi):
        return StepFunction()
    if not interlacing_report(pair).ok:
        raise InterlacingError("eigenvalues of A and B do not interlace strictly")
    a, b = pair.eigA.values, pair.eigB.values
    return StepFunction(tuple(zip(a.tolist(), b.tolist())))


def ssf_eval(xi: StepFunction, E):
    """Value in {0, 1} at ``E`` (scalar or array)."""
    E_arr = np.asarray(E, dtype=float)
    out = np.zeros(E_arr.shape, dtype=int)
    for lo, hi in xi.pieces:
        out += (E_arr > lo) & (E_arr <= hi)
    if np.ndim(E) == 0:
        return int(out)
    return out


def ssf_l1(xi: StepFunction) -> float:
    return math.fsum(hi - lo for lo, hi in xi.pieces)


def ssf_resolvent_diagnostic(pair: RankOnePair, E: float, eps: float = 1e-6) -> float:
    """``arg(1 + <phi, (A - E - i eps)^-1 phi>) / pi`` with arg in [0, 2 pi).

    Only meaningful at points of the common resolvent set, where it tends to
    the step value as ``eps -> 0``.
    """
    w = np.abs(pair.eigA.vectors.conj().T @ pair.phi) ** 2
    z = 1.0 + np.sum(w / (pair.eigA.values - E - 1j * eps))
    ang = math.atan2(z.imag, z.real)
    if ang < 0:
        ang += 2 * math.pi
    return ang / math.pi


class PiecewisePolynomial:
    """Compactly supported function, polynomial on each ``[lo, hi]`` piece.

    ``pieces`` is a sequence of ``(lo, hi, coeffs)`` with coefficients in
    increasing degree; outside all pieces the function is 0.
    """

    def __init__(self, pieces: Iterable[tuple[float, float, Sequence[float]]]):
        self.pieces = [(float(lo), float(hi), Polynomial(coeffs)) for lo, hi, coeffs in pieces]
        self.pieces.sort(key=lambda p: p[0])
        for (_, h0, _), (l1, _, _) in zip(self.pieces, self.pieces[1:]):
            if l1 < h0:
                raise ValueError("pieces overlap")

    @classmethod
    def on_interval(cls, lo: float, hi: float, coeffs: Sequence[float]) -> "PiecewisePolynomial":
        return cls([(lo, hi, coeffs)])

    @classmethod
    def hat(cls, lo: float, peak: float, hi: float) -> "PiecewisePolynomial":
        """Continuous tent function, 0 at ``lo`` and ``hi``, 1 at ``peak``."""
        up = Polynomial([-lo, 1.0]) / (peak - lo)
        down = Polynomial([hi, -1.0]) / (hi - peak)
        return cls([(lo, peak, up.coef), (peak, hi, down.coef)])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        done = np.zeros(x.shape, dtype=bool)
        for lo, hi, p in self.pieces:
            m = (x >= lo) & (x <= hi) & ~done
            out[m] = p(x[m])
            done |= m
        return out

    def integrate_over(self, lo: float, hi: float) -> float:
        """Exact integral over ``[lo, hi]`` via antiderivatives."""
        total = []
        for plo, phi, p in self.pieces:
            a, b = max(lo, plo), min(hi, phi)
            if b > a:
                P = p.integ()
                total.append(P(b) - P(a))
        return math.fsum(total)


class BirmanSolomyak(NamedTuple):
    lhs: float
    rhs: float


def birman_solomyak_check(pair: RankOnePair, f: PiecewisePolynomial, nodes: int = 32) -> BirmanSolomyak:
    """Both sides of ``int f xi dx = int_0^1 <phi, f(A + s phi phi*) phi> ds``.

    The left side is exact from the step pieces; the right side uses
    Gauss-Legendre in ``s`` with a fresh eigendecomposition per node.
    """
    xi = ssf_of_pair(pair)
    lhs = math.fsum(f.integrate_over(lo, hi) for lo, hi in xi.pieces)
    x, w = leggauss(nodes)
    s = 0.5 * (x + 1.0)
    w = 0.5 * w
    V = np.outer(pair.phi, pair.phi.conj())
    vals = []
    for sk in s:
        E = eig_hermitian(pair.A + sk * V)
        weights = np.abs(E.vectors.conj().T @ pair.phi) ** 2
        vals.append(float(np.sum(f(E.values) * weights)))
    rhs = math.fsum(wk * v for wk, v in zip(w, vals))
    return BirmanSolomyak(lhs, rhs)
