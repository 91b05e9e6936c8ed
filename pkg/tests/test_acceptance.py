"""Acceptance criteria, one test per criterion.

Every test records a ``AC<n> PASS|FAIL ...`` line; the lines are printed in
the pytest terminal summary (see ``conftest.py``) and also when this file is
run directly with ``python3 tests/test_acceptance.py``.
"""
import math
import sys
import time
import timeit

import mpmath
import numpy as np
import pytest

from specshift import dets, runner, xint
from specshift.pairmodel import IntervalSet, classify_boundary, make_pair
from specshift.ssf import PiecewisePolynomial, birman_solomyak_check, ssf_l1, ssf_of_pair

RESULTS: list[str] = []

SQRT5 = math.sqrt(5.0)
GOLDEN_DET = (2 + SQRT5) / (2 * SQRT5)
GOLDEN_NEG_LOG = math.log(2 * SQRT5 / (2 + SQRT5))
DELTA_MIN = 1e-3


def record(tag: str, ok: bool, detail: str) -> None:
    line = f"{tag:<6} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def ensemble(target: str, count: int):
    cfg = {
        "format_version": 1,
        "name": target,
        "checks": ["theorem", "methods", "dual", "ssf_l1"],
        "ensemble": {"count": count, "seed": 7, "target": target, "dim_range": [4, 40],
                     "generators": ["DiagonalGapped", "DenseGaussian", "Jacobi"]},
    }
    t0 = time.perf_counter()
    rep = runner.run_suite(cfg)
    return rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def main_ensemble():
    return ensemble("ThmMain", 200)


def golden_pipeline():
    pair = make_pair(np.diag([0.0, 2.0]), np.array([1.0, 1.0]) / math.sqrt(2.0))
    I = IntervalSet([(-1.0, 1.0)])
    d = [dets.section_det(pair, I, m) for m in dets.METHODS]
    integral = xint.xi_interaction(pair, I).value
    l1 = ssf_l1(ssf_of_pair(pair))
    return d, integral, l1


def test_ac1_golden():
    d, integral, l1 = golden_pipeline()
    # best of repeated runs; the first call pays import and cache costs
    per_run = min(timeit.repeat(golden_pipeline, number=10, repeat=30)) / 10
    det_ok = all(abs(v - 0.9472135955) <= 1e-9 for v in d)
    log_ok = abs(-math.log(d[0]) - integral) <= 1e-9 and abs(integral - GOLDEN_NEG_LOG) <= 1e-9
    l1_ok = abs(l1 - 1.0) <= 1e-10
    ok = det_ok and log_ok and l1_ok and per_run < 1e-3
    record("AC1", ok, f"det={d[0]:.12f} (3 methods, spread {max(d) - min(d):.1e}) "
                      f"-ln det={-math.log(d[0]):.12f} integral={integral:.12f} L1={l1:.12f} "
                      f"runtime={per_run * 1e3:.3f} ms")
    assert ok


@pytest.mark.xfail(strict=True, reason="reference literal 0.0542323 disagrees with -ln(0.9472135955) = 0.0542306616")
def test_ac1_reference_log_literal():
    d, integral, _ = golden_pipeline()
    ok = abs(integral - 0.0542323) <= 1e-9
    record("AC1*", ok, f"integral vs literal 0.0542323: off by {abs(integral - 0.0542323):.2e} "
                       f"(literal is inconsistent with det=0.9472135955; expected failure)")
    assert ok


def _main_like(rep, secs, target, count, tag, limit):
    rows = rep.rows
    dims = [r["dim"] for r in rows]
    gens = sorted({r["generator"] for r in rows})
    cls_ok = all(r.get("classification") == target for r in rows)
    gap_ok = all(r.get("gap_distance", 0) >= DELTA_MIN for r in rows)
    thm_ok = all(r.get("theorem_pass") for r in rows)
    meth_ok = all(r.get("methods_pass") for r in rows)
    worst = max((r.get("theorem_residual", math.inf) / max(1.0, r.get("integral_closed", 1.0)) for r in rows), default=math.nan)
    worst_m = max((r.get("methods_residual", math.inf) for r in rows), default=math.nan)
    ok = (len(rows) >= count and cls_ok and gap_ok and thm_ok and meth_ok and rep.hard_errors == 0
          and min(dims) >= 4 and max(dims) <= 40 and (limit is None or secs < limit))
    record(tag, ok, f"{len(rows)} {target} instances, dims {min(dims)}-{max(dims)}, generators {','.join(gens)}; "
                    f"max rel theorem residual {worst:.2e} (tol 1e-8), max method spread {worst_m:.2e} (tol 1e-8); "
                    f"{secs:.1f} s" + (f" (limit {limit} s)" if limit else ""))
    return ok


def test_ac2_main_ensemble(main_ensemble):
    rep, secs = main_ensemble
    assert _main_like(rep, secs, "ThmMain", 200, "AC2", 30.0)


def test_ac3_xi_one_ensemble():
    rep, secs = ensemble("ThmXiOne", 100)
    assert _main_like(rep, secs, "ThmXiOne", 100, "AC3", None)


def test_ac4_trace_mismatch():
    rep, secs = ensemble("TraceMismatch", 50)
    rows = rep.rows
    vals = [r.get("predicted_zero_det", math.inf) for r in rows]
    idx = [r.get("index", 0) for r in rows]
    ok = (len(rows) >= 50 and rep.hard_errors == 0 and all(v <= 1e-10 for v in vals)
          and all(r["classification"] == "TraceMismatch" for r in rows))
    record("AC4", ok, f"{len(rows)} TraceMismatch instances ({sum(i > 0 for i in idx)} positive index, "
                      f"{sum(i < 0 for i in idx)} negative); max predicted det {max(vals):.2e} (tol 1e-10)")
    assert ok


def test_ac5_counterexample():
    row = runner.counterexample_row()
    ok = (abs(row["diff_sq_det"] - 1.0) <= 1e-12 and abs(row["integral_closed"] - math.log(9 / 8)) <= 1e-10
          and row["expected_failure"] is True)
    record("AC5", ok, f"diff_sq_det={row['diff_sq_det']!r} integral={row['integral_closed']:.12f} "
                      f"ln(9/8)={math.log(9 / 8):.12f}; mismatch flagged as expected")
    assert ok


def test_ac6_dual_and_diff_sq(main_ensemble):
    rep, _ = main_ensemble
    rows = rep.rows
    d1 = max(r["dual_residual"] for r in rows)
    d2 = max(r["diff_sq_residual"] for r in rows)
    # diff_sq_det as reported is primal * dual; the residual compares it with
    # det(1 - D^2) formed from the projector difference itself
    ok = all(r["dual_pass"] and r["diff_sq_pass"] for r in rows) and d1 <= 1e-9 and d2 <= 1e-9
    record("AC6", ok, f"{len(rows)} instances: max |primal - dual| {d1:.2e}, "
                      f"max |det(1-D^2) - primal*dual| {d2:.2e} (tol 1e-9)")
    assert ok


def test_ac7_oracles():
    rng = np.random.default_rng(2024)
    # interaction: closed form vs adaptive quadrature
    worst_q, n_q = 0.0, 0
    while n_q < 100:
        nx, ny = rng.integers(1, 5, size=2)
        pts = np.sort(rng.uniform(-10, 10, 2 * (nx + ny)))
        if np.min(np.diff(pts)) < 1e-3:
            continue
        ivs = list(zip(pts[0::2], pts[1::2]))
        order = rng.permutation(nx + ny)
        X, Y = [ivs[i] for i in order[:nx]], [ivs[i] for i in order[nx:]]
        closed = xint.interaction_closed(X, Y).value
        quad = xint.interaction_quadrature(X, Y)
        worst_q = max(worst_q, abs(quad - closed) / max(1e-8, 1e-6 * closed))
        n_q += 1
    # Cauchy determinant vs brute force; the brute-force determinant runs in
    # 50-digit arithmetic because random Cauchy matrices are ill-conditioned
    # enough that a double-precision LU is itself the least accurate party
    worst_c, n_c = 0.0, 0
    with mpmath.workdps(50):
        for n in range(1, 9):
            for _ in range(25):
                pts = rng.permutation(rng.uniform(-5, 5, 2 * n))
                a, b = pts[:n], pts[n:]
                M = mpmath.matrix([[1 / (mpmath.mpf(bk) - mpmath.mpf(aj)) for bk in b] for aj in a])
                brute = mpmath.det(M)
                worst_c = max(worst_c, float(abs((dets.cauchy_det_closed(a, b) - brute) / brute)))
                n_c += 1
    # residue weights vs eigenvector overlaps
    worst_w, n_w = 0.0, 0
    for _ in range(100):
        n = int(rng.integers(1, 25))
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        phi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        pair = make_pair((G + G.conj().T) / 2, phi / np.linalg.norm(phi))
        wA, wB = dets.residue_weights(pair)
        dA = np.abs(pair.eigA.vectors.conj().T @ pair.phi) ** 2
        dB = np.abs(pair.eigB.vectors.conj().T @ pair.phi) ** 2
        worst_w = max(worst_w, np.max(np.abs(wA - dA)), np.max(np.abs(wB - dB)))
        n_w += 1
    # Birman-Solomyak, polynomial degree <= 3
    worst_b, n_b = 0.0, 0
    for _ in range(10):
        n = int(rng.integers(1, 9))
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        phi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        pair = make_pair((G + G.conj().T) / 2, phi / np.linalg.norm(phi))
        lo = min(pair.eigA.values[0], pair.eigB.values[0]) - 1
        hi = max(pair.eigA.values[-1], pair.eigB.values[-1]) + 1
        for deg in range(4):
            f = PiecewisePolynomial.on_interval(lo, hi, rng.standard_normal(deg + 1))
            lhs, rhs = birman_solomyak_check(pair, f, nodes=32)
            worst_b = max(worst_b, abs(lhs - rhs))
            n_b += 1
    ok = worst_q <= 1.0 and worst_c <= 1e-10 and worst_w <= 1e-9 and worst_b <= 1e-6
    record("AC7", ok, f"quadrature {n_q} families worst err/tol {worst_q:.2e}; Cauchy {n_c} dets worst rel {worst_c:.2e}; "
                      f"residue {n_w} pairs worst {worst_w:.2e}; Birman-Solomyak {n_b} cases worst {worst_b:.2e}")
    assert ok


def test_ac8_subspace():
    rep = runner.subspace_suite(count=100, seed=11)
    rows = rep.rows
    ratio = max(r["subspace_norm"] / r["subspace_bound"] for r in rows)
    top = max(r["subspace_norm"] for r in rows)
    ok = (len(rows) >= 100 and rep.hard_errors == 0
          and all(r["phi_norm_sq"] < r["subspace_delta"] for r in rows)
          and all(r["subspace_norm"] <= r["subspace_bound"] + 1e-9 and r["subspace_norm"] < 1 for r in rows))
    record("AC8", ok, f"{len(rows)} instances with |phi|^2 < delta: max norm/bound {ratio:.3f}, max norm {top:.3f}")
    assert ok


def test_ac9_convergence():
    t0 = time.perf_counter()
    study, _ = runner.convergence_report(dim=200, Ms=(25, 50, 100, 150, 200))
    secs = time.perf_counter() - t0
    rows = study.rows
    mono = True
    for key in ("det_residual", "integral_residual"):
        r = [getattr(x, key) for x in rows]
        mono &= all(b <= 1.1 * a for a, b in zip(r, r[1:]))
    final = max(rows[-1].det_residual, rows[-1].integral_residual)
    persist = study.M0 is not None and all(x.gap_persist for x in rows if x.M >= study.M0)
    ok = mono and final <= 1e-9 and persist and secs < 60
    trail = ", ".join(f"M={x.M}: {x.det_residual:.1e}/{x.integral_residual:.1e}" for x in rows)
    record("AC9", ok, f"det/integral residuals {trail}; M0={study.M0}; {secs:.1f} s")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
