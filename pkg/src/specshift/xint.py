"""Double integrals of interval indicators against the kernel ``1/(y - x)^2``.

For intervals ``[x1, x2]`` and ``[y1, y2]`` at positive distance,

    int_{x1}^{x2} int_{y1}^{y2} dy dx / (y - x)^2
        = ln(|y1 - x1| |y2 - x2| / (|y2 - x1| |y1 - x2|)),

and infinite endpoints are handled by letting the matching logarithms
cancel.  The closed form is the main path; ``interaction_quadrature`` is an
independent adaptive-Simpson oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .dets import log_section_det
from .pairmodel import Classification, IntervalSet, RankOnePair, classify_boundary, cyclic_part
from .ssf import StepFunction, ssf_of_pair

Interval = tuple[float, float]


class ClassificationMismatch(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class InteractionResult:
    value: float
    terms: list[tuple[int, int, float]] = field(default_factory=list)
    divergent: bool = False


def _pair_term(x: Interval, y: Interval) -> float:
    """Closed-form double integral of one interval pair; ``inf`` if divergent."""
    x1, x2 = x
    y1, y2 = y
    if x2 <= x1 or y2 <= y1:
        return 0.0
    if not (x2 < y1 or y2 < x1):
        return math.inf
    finite = []
    n_inf = 0
    for u, v, sign in ((x1, y1, 1), (x2, y2, 1), (x1, y2, -1), (x2, y1, -1)):
        if math.isfinite(u) and math.isfinite(v):
            finite.append(sign * math.log(abs(v - u)))
        else:
            n_inf += sign
    if n_inf != 0:
        return math.inf
    return math.fsum(finite)


def interaction_closed(X: Sequence[Interval], Y: Sequence[Interval]) -> InteractionResult:
    """``int_X dx int_Y dy (y - x)^-2`` as an exact finite sum of log terms."""
    terms = []
    divergent = False
    for j, x in enumerate(X):
        for k, y in enumerate(Y):
            t = _pair_term(tuple(x), tuple(y))
            if math.isinf(t):
                divergent = True
            terms.append((j, k, t))
    if divergent:
        return InteractionResult(math.inf, terms, True)
    value = math.fsum(t for _, _, t in terms)
    return InteractionResult(max(value, 0.0), terms, False)


def _inner(x, y: Interval):
    # int_{y1}^{y2} dy / (y - x)^2 for x outside [y1, y2]
    y1, y2 = y
    return 1.0 / (y1 - x) - 1.0 / (y2 - x)


def _adaptive_simpson(f, a: float, b: float, tol: float, max_intervals: int) -> float:
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    acc = []
    count = 0
    while stack:
        a, b, fa, fm, fb, whole, tol = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        delta = left + right - whole
        count += 1
        if abs(delta) <= 15.0 * tol or b - a < 1e-14 * max(1.0, abs(a)):
            acc.append(left + right + delta / 15.0)
            continue
        if count > max_intervals:
            raise QuadratureError(f"adaptive Simpson exceeded {max_intervals} subdivisions")
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol))
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol))
    return math.fsum(acc)


def interaction_quadrature(
    X: Sequence[Interval],
    Y: Sequence[Interval],
    rel_tol: float = 1e-9,
    max_intervals: int = 200_000,
) -> float:
    """Numerical oracle for :func:`interaction_closed` on bounded intervals.

    The inner integral over ``y`` is exact, the outer one adaptive Simpson.
    The absolute tolerance is ``rel_tol`` times a coarse first estimate of
    each outer integral.
    """
    total = []
    for x in X:
        x1, x2 = float(x[0]), float(x[1])
        if not (math.isfinite(x1) and math.isfinite(x2)):
            raise ValueError("quadrature needs bounded intervals; truncate first")
        if x2 <= x1:
            continue
        ys = [(float(y[0]), float(y[1])) for y in Y if y[1] > y[0]]
        for y1, y2 in ys:
            if not (math.isfinite(y1) and math.isfinite(y2)):
                raise ValueError("quadrature needs bounded intervals; truncate first")
            if not (x2 < y1 or y2 < x1):
                raise ValueError("intervals must be at positive distance")

        def f(t, ys=ys):
            return sum(_inner(t, y) for y in ys)

        # Coarse pass fixes the magnitude the relative tolerance refers to.
        rough = _adaptive_simpson(f, x1, x2, 1e-4 * abs(f(x1) + f(x2)) * (x2 - x1) + 1e-300, max_intervals)
        total.append(_adaptive_simpson(f, x1, x2, rel_tol * max(abs(rough), 1e-300), max_intervals))
    return math.fsum(total)


def truncate_intervals(X: Sequence[Interval], lo: float, hi: float) -> list[Interval]:
    """Clip intervals to ``[lo, hi]``, dropping empty ones."""
    out = []
    for a, b in X:
        a, b = max(a, lo), min(b, hi)
        if b > a:
            out.append((a, b))
    return out


def quadrature_window(X: Sequence[Interval], Y: Sequence[Interval], factor: float = 10.0) -> tuple[float, float]:
    """Truncation window ``hull +- factor * width`` over the finite endpoints.

    Cutting a half-line at distance ``L`` from the other family drops a tail
    of order ``width / L`` of the interaction.
    """
    pts = [p for iv in list(X) + list(Y) for p in iv if math.isfinite(p)]
    lo, hi = min(pts), max(pts)
    width = max(hi - lo, 1.0)
    return lo - factor * width, hi + factor * width


def split_pieces(pieces: Sequence[Interval], I: IntervalSet) -> tuple[list[Interval], list[Interval]]:
    """Cut step-function pieces into their parts inside ``I`` and inside ``I^c``."""
    inside, outside = [], []
    for target, ivs in ((inside, I.intervals), (outside, I.complement().intervals)):
        for lo, hi in pieces:
            for a, b in ivs:
                l, h = max(lo, a), min(hi, b)
                if h > l:
                    target.append((l, h))
    return inside, outside


def _require(pair, I, wanted, eta_min):
    report = classify_boundary(pair, I, eta_min)
    if report.classification != wanted:
        raise ClassificationMismatch(
            f"expected {wanted.value}, got {report.classification.value}"
        )
    return report


def pair_ssf(pair: RankOnePair) -> StepFunction:
    core = cyclic_part(pair)
    return StepFunction() if core is None else ssf_of_pair(core)


def xi_interaction(pair: RankOnePair, I: IntervalSet, eta_min: float = 1e-8) -> InteractionResult:
    """``int_I dx int_{I^c} dy xi(x) xi(y) / (y - x)^2`` for a ThmMain instance."""
    _require(pair, I, Classification.THM_MAIN, eta_min)
    X, Y = split_pieces(pair_ssf(pair).pieces, I)
    return interaction_closed(X, Y)


def gap_pieces(pair: RankOnePair) -> list[Interval]:
    """Support of ``1 - xi``: the gaps ``(b_n, a_{n+1}]`` plus the two outer half-lines."""
    core = cyclic_part(pair)
    if core is None:
        return [(-math.inf, math.inf)]
    a, b = core.eigA.values, core.eigB.values
    pieces = [(-math.inf, float(a[0]))]
    pieces += [(float(b[n]), float(a[n + 1])) for n in range(a.size - 1)]
    pieces.append((float(b[-1]), math.inf))
    return pieces


def xi_minus_one_interaction(pair: RankOnePair, I: IntervalSet, eta_min: float = 1e-8) -> InteractionResult:
    """``int_I dx int_{I^c} dy (xi(x) - 1)(xi(y) - 1) / (y - x)^2`` for ThmXiOne."""
    _require(pair, I, Classification.THM_XI_ONE, eta_min)
    X, Y = split_pieces(gap_pieces(pair), I)
    return interaction_closed(X, Y)


class TheoremResidual(NamedTuple):
    lhs: float
    rhs: float
    abs_residual: float
    classification: Classification


def theorem_residual(pair: RankOnePair, I: IntervalSet, eta_min: float = 1e-8) -> TheoremResidual:
    """``-ln det`` (direct route) against the matching interaction integral."""
    cls = classify_boundary(pair, I, eta_min).classification
    if cls == Classification.THM_MAIN:
        rhs = xi_interaction(pair, I, eta_min).value
    elif cls == Classification.THM_XI_ONE:
        rhs = xi_minus_one_interaction(pair, I, eta_min).value
    else:
        raise ClassificationMismatch(f"no determinant identity applies to {cls.value}")
    lhs = -log_section_det(pair, I, "direct")
    return TheoremResidual(lhs, rhs, abs(lhs - rhs), cls)
