"""Instance generation, experiment suites, report emission and the command line.

Suites are described by JSON config files carrying a ``format_version`` key::

    {
      "format_version": 1,
      "name": "thm-main",
      "checks": ["theorem", "methods", "dual", "ssf_l1", "quadrature"],
      "tolerances": {"theorem": 1e-8},
      "ensemble": {"count": 200, "seed": 7, "target": "ThmMain",
                   "generators": ["DiagonalGapped", "DenseGaussian", "Jacobi"],
                   "dim_range": [4, 40]},
      "instances": [ ... explicit instance specs ... ]
    }

Exit codes: 0 all checks pass, 1 a check failed or an instance errored,
2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from . import dets, perturb, xint
from .pairmodel import (
    Classification,
    IntervalSet,
    RankOnePair,
    classify_boundary,
    cyclic_part,
    make_matrix_pair,
    make_pair,
    ssf_count,
)
from .ssf import ssf_l1, ssf_of_pair

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAX_RETRIES = 100
GENERATORS = ("Explicit", "DiagonalGapped", "DenseGaussian", "Jacobi")
PHI_MODES = ("RandomUnit", "Ones", "E1", "Explicit")

DEFAULT_TOLERANCES = {
    "theorem": 1e-8,       # relative to max(1, value)
    "methods": 1e-8,       # relative for values < 1e-4
    "dual": 1e-9,
    "diff_sq": 1e-9,
    "ssf_l1": 1e-9,
    "quadrature_abs": 1e-8,
    "quadrature_rel": 1e-6,
    "trace_mismatch": 1e-10,
    "subspace": 1e-9,
}

COLUMNS = [
    "suite", "instance", "generator", "dim", "seed", "attempt", "classification",
    "gap_distance", "index", "det_direct", "det_overlap", "det_product", "det_dual",
    "diff_sq_det", "diff_sq_det_matrix", "neg_log_det", "integral_closed",
    "integral_quadrature", "theorem_residual", "theorem_tol", "theorem_pass",
    "methods_residual", "methods_tol", "methods_pass", "dual_residual", "dual_tol",
    "dual_pass", "diff_sq_residual", "diff_sq_tol", "diff_sq_pass",
    "predicted_zero_det", "trace_mismatch_tol", "trace_mismatch_pass",
    "quadrature_residual", "quadrature_tol", "quadrature_pass", "ssf_l1",
    "phi_norm_sq", "ssf_l1_residual", "ssf_l1_tol", "ssf_l1_pass", "subspace_delta",
    "subspace_norm", "subspace_bound", "subspace_tol", "subspace_pass",
    "expected_failure", "status", "error", "seconds",
]


class ConfigError(ValueError):
    pass


class UnsatisfiableSpec(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# random numbers


def _rng(seed: int, attempt: int = 0) -> np.random.Generator:
    # PCG64 streams are platform independent; the attempt number is a sub-seed.
    return np.random.Generator(np.random.PCG64([int(seed) & (2**64 - 1), attempt]))


def box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` standard normal variates by the Box-Muller transform."""
    m = (n + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1], keeps log finite
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:n]


# ---------------------------------------------------------------------------
# instances


@dataclass
class InstanceSpec:
    generator: str = "DiagonalGapped"
    dim: int = 10
    seed: int = 1
    gap_layout: list = field(default_factory=lambda: [[-1.0, 0.5, 5], [1.0, 0.5, 5]])
    phi_mode: str = "RandomUnit"
    phi_norm: float | None = None
    phi: list | None = None
    A: list | None = None
    interval: dict = field(default_factory=lambda: {"kind": "auto", "target": "ThmMain"})
    jacobi: dict = field(default_factory=dict)
    name: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown instance keys: {sorted(extra)}")
        spec = cls(**d)
        if spec.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {spec.generator!r}")
        if spec.phi_mode not in PHI_MODES:
            raise ConfigError(f"unknown phi_mode {spec.phi_mode!r}")
        return spec


def _complex_vector(v) -> np.ndarray:
    """Accept plain numbers or ``[re, im]`` pairs."""
    out = []
    for x in v:
        if isinstance(x, (list, tuple)):
            out.append(complex(x[0], x[1]))
        else:
            out.append(complex(x))
    return np.array(out)


def _complex_matrix(rows) -> np.ndarray:
    return np.array([_complex_vector(r) for r in rows])


def jacobi_surrogate(dim: int, strong: float = 1.0, weak: float = 0.9) -> np.ndarray:
    """Tridiagonal chain with alternating hoppings; two bands around ``+-(strong+weak)/2``."""
    off = np.array([strong if i % 2 == 0 else weak for i in range(dim - 1)])
    return np.diag(off, 1) + np.diag(off, -1)


def _make_A(spec: InstanceSpec, rng: np.random.Generator) -> np.ndarray:
    n = spec.dim
    if spec.generator == "Explicit":
        if spec.A is None:
            raise ConfigError("Explicit generator needs A")
        return _complex_matrix(spec.A)
    if spec.generator == "DiagonalGapped":
        vals = []
        for center, width, count in spec.gap_layout:
            vals.extend(center + width * (rng.random(int(count)) - 0.5))
        if len(vals) != n:
            raise ConfigError(f"gap_layout gives {len(vals)} eigenvalues, dim is {n}")
        return np.diag(np.sort(vals))
    if spec.generator == "DenseGaussian":
        g = box_muller(rng, 2 * n * n).reshape(2, n, n)
        G = (g[0] + 1j * g[1]) / math.sqrt(2.0)
        return (G + G.conj().T) / (2.0 * math.sqrt(n))
    # Jacobi
    opts = spec.jacobi or {}
    if opts.get("kind") == "ssh":
        return jacobi_surrogate(n, opts.get("strong", 1.0), opts.get("weak", 0.9))
    diag = opts.get("diag_scale", 1.0) * (2 * rng.random(n) - 1)
    off = opts.get("off_min", 0.2) + (opts.get("off_max", 1.0) - opts.get("off_min", 0.2)) * rng.random(n - 1)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def _make_phi(spec: InstanceSpec, rng: np.random.Generator) -> np.ndarray:
    n = spec.dim
    if spec.phi_mode == "Explicit":
        if spec.phi is None:
            raise ConfigError("phi_mode Explicit needs phi")
        phi = _complex_vector(spec.phi)
        if spec.phi_norm is not None:
            phi = phi / np.linalg.norm(phi) * spec.phi_norm
        return phi
    if spec.phi_mode == "Ones":
        phi = np.ones(n, dtype=complex)
    elif spec.phi_mode == "E1":
        phi = np.zeros(n, dtype=complex)
        phi[0] = 1.0
    else:
        z = box_muller(rng, 2 * n)
        phi = z[:n] + 1j * z[n:]
    norm = 1.0 if spec.phi_norm is None else spec.phi_norm
    return phi / np.linalg.norm(phi) * norm


def _candidates(pair: RankOnePair):
    """Midpoints of consecutive points of sigma(A) u sigma(B), with half-gap and SSF value."""
    pts = np.sort(np.concatenate([pair.eigA.values, pair.eigB.values]))
    out = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo <= 0:
            continue
        mid = 0.5 * (lo + hi)
        out.append((float(mid), float(0.5 * (hi - lo)), ssf_count(pair, mid)))
    return out


def auto_interval(pair: RankOnePair, rng: np.random.Generator, opts: dict) -> IntervalSet:
    """Place the boundary of I at gap midpoints matching the requested classification."""
    target = opts.get("target", "ThmMain")
    n_int = int(opts.get("n_intervals", 1))
    delta_min = float(opts.get("delta_min", 1e-3))
    unbounded = bool(opts.get("unbounded", False))
    cands = [c for c in _candidates(pair) if c[1] >= delta_min]
    if target in ("ThmMain", "ThmXiOne"):
        want = 0 if target == "ThmMain" else 1
        pool = [c[0] for c in cands if c[2] == want]
        if "gap_index" in opts:
            # explicit choice: indices into the admissible boundary points;
            # an odd count makes the first interval start at -inf
            idx = opts["gap_index"]
            idx = [idx] if isinstance(idx, int) else list(idx)
            if any(not -len(pool) <= i < len(pool) for i in idx):
                raise UnsatisfiableSpec(f"gap_index {idx} outside {len(pool)} admissible points")
            pts = sorted(pool[i] for i in idx)
            if len(pts) % 2:
                pts = [-math.inf] + pts
            return IntervalSet(zip(pts[0::2], pts[1::2]))
        k = 2 * n_int - (1 if unbounded else 0)
        if len(pool) < k:
            raise UnsatisfiableSpec(f"only {len(pool)} admissible boundary points")
        pts = sorted(rng.choice(pool, size=k, replace=False).tolist())
        if unbounded:
            pts = [-math.inf] + pts
        return IntervalSet(zip(pts[0::2], pts[1::2]))
    if target == "TraceMismatch":
        zeros = [c[0] for c in cands if c[2] == 0]
        ones = [c[0] for c in cands if c[2] == 1]
        if not zeros or not ones:
            raise UnsatisfiableSpec("need boundary candidates with both SSF values")
        p, q = float(rng.choice(zeros)), float(rng.choice(ones))
        return IntervalSet([(min(p, q), max(p, q))])
    raise ConfigError(f"unknown interval target {target!r}")


def gen_instance(spec: InstanceSpec) -> tuple[RankOnePair, IntervalSet, int]:
    """Deterministic instance for ``spec``; returns ``(pair, I, attempt)``.

    Auto intervals are classified before returning; mismatching draws are
    retried with sub-seeds ``1, 2, ...`` up to ``MAX_RETRIES`` times.
    """
    iv = dict(spec.interval)
    kind = iv.get("kind", "auto")
    last = None
    for attempt in range(MAX_RETRIES):
        rng = _rng(spec.seed, attempt)
        A = _make_A(spec, rng)
        phi = _make_phi(spec, rng)
        pair = make_pair(A, phi)
        if kind == "explicit":
            return pair, IntervalSet(_parse_intervals(iv["intervals"])), attempt
        try:
            I = auto_interval(pair, rng, iv)
        except UnsatisfiableSpec as exc:
            last = exc
            continue
        report = classify_boundary(pair, I, iv.get("eta_min", 1e-8))
        if report.classification.value == iv.get("target", "ThmMain"):
            return pair, I, attempt
        last = UnsatisfiableSpec(f"classified as {report.classification.value}")
    raise UnsatisfiableSpec(f"no admissible instance after {MAX_RETRIES} attempts: {last}")


def _parse_intervals(items) -> list[tuple[float, float]]:
    # float() accepts "inf" and "-inf" strings as written in JSON configs
    return [(float(lo), float(hi)) for lo, hi in items]


GOLDEN = {
    "generator": "Explicit",
    "dim": 2,
    "A": [[0.0, 0.0], [0.0, 2.0]],
    "phi_mode": "Explicit",
    "phi": [1.0, 1.0],
    "phi_norm": 1.0,
    "interval": {"kind": "explicit", "intervals": [[-1.0, 1.0]]},
    "name": "golden",
}


def ensemble_specs(ens: dict) -> list[InstanceSpec]:
    """Expand an ensemble description into per-instance specs (seed = base + index)."""
    count = int(ens.get("count", 0))
    base = int(ens.get("seed", 1))
    gens = ens.get("generators", ["DiagonalGapped", "DenseGaussian", "Jacobi"])
    lo, hi = ens.get("dim_range", [4, 40])
    target = ens.get("target", "ThmMain")
    specs = []
    for i in range(count):
        rng = _rng(base + 7919 * i, 1_000_003)
        gen = gens[i % len(gens)]
        dim = int(rng.integers(lo, hi + 1))
        seed = base + i
        iv = {"kind": "auto", "target": target,
              "n_intervals": int(rng.integers(1, 3)) if dim >= 8 else 1,
              "unbounded": bool(rng.random() < 0.25) and target == "ThmMain",
              "delta_min": float(ens.get("delta_min", 1e-3))}
        spec = InstanceSpec(generator=gen, dim=dim, seed=seed, interval=iv, name=f"{target}-{i}")
        if gen == "DiagonalGapped":
            k = int(rng.integers(2, 5)) if dim >= 8 else 2
            counts = [dim // k + (1 if j < dim % k else 0) for j in range(k)]
            spacing = 2.0
            spec.gap_layout = [[spacing * j, float(0.3 + 0.7 * rng.random()), c] for j, c in enumerate(counts)]
            spec.phi_norm = float(ens.get("phi_norm", 0.6 if target == "ThmMain" else 1.5))
        elif gen == "DenseGaussian":
            spec.phi_norm = float(ens.get("phi_norm", 0.5 if target == "ThmMain" else 1.0))
        else:
            spec.phi_norm = float(ens.get("phi_norm", 0.5 if target == "ThmMain" else 1.0))
        if target != "ThmMain":
            spec.interval["delta_min"] = float(ens.get("delta_min", 1e-2))
        specs.append(spec)
    return specs


# ---------------------------------------------------------------------------
# checks


def _rel(a: float, b: float, tiny: float = 1e-4) -> float:
    d = abs(a - b)
    scale = max(abs(a), abs(b))
    return d / scale if 0 < scale < tiny else d


def evaluate_instance(pair: RankOnePair, I: IntervalSet, checks: Iterable[str], tol: dict) -> dict:
    """Run the requested checks on one instance and return a report row (no identity fields)."""
    checks = set(checks)
    row: dict[str, Any] = {}
    rep = classify_boundary(pair, I)
    cls = rep.classification
    row.update(classification=cls.value, gap_distance=rep.gap_distance, index=rep.index)
    passes = []

    if cls in (Classification.THM_MAIN, Classification.THM_XI_ONE):
        direct = dets.direct_section_det(pair, I)
        row["det_direct"] = direct.value
        row["neg_log_det"] = -direct.log_value
        if "methods" in checks or "dual" in checks:
            row["det_overlap"] = dets.section_det(pair, I, "overlap")
            row["det_product"] = dets.section_det(pair, I, "product")
            r = max(_rel(direct.value, row["det_overlap"]), _rel(direct.value, row["det_product"]),
                    _rel(row["det_overlap"], row["det_product"]))
            row.update(methods_residual=r, methods_tol=tol["methods"], methods_pass=r <= tol["methods"])
            passes.append(row["methods_pass"])
        if "dual" in checks:
            # primal and dual from one eigensolve each; their product is the
            # diff-square determinant, cross-checked against 1 - D^2 directly
            dual = dets.direct_section_det(pair, I, dual=True).value
            dsq = direct.value * dual
            dsq_m = dets.diff_sq_det_matrix(pair, I)
            r1 = abs(dual - direct.value)
            r2 = abs(dsq_m - dsq)
            row.update(det_dual=dual, diff_sq_det=dsq, diff_sq_det_matrix=dsq_m,
                       dual_residual=r1, dual_tol=tol["dual"], dual_pass=r1 <= tol["dual"],
                       diff_sq_residual=r2, diff_sq_tol=tol["diff_sq"], diff_sq_pass=r2 <= tol["diff_sq"])
            passes += [row["dual_pass"], row["diff_sq_pass"]]
        if "theorem" in checks:
            if cls == Classification.THM_MAIN:
                rhs = xint.xi_interaction(pair, I).value
            else:
                rhs = xint.xi_minus_one_interaction(pair, I).value
            res = abs(-direct.log_value - rhs)
            t = tol["theorem"] * max(1.0, abs(rhs))
            row.update(integral_closed=rhs, theorem_residual=res, theorem_tol=t, theorem_pass=res <= t)
            passes.append(row["theorem_pass"])
        if "quadrature" in checks and cls == Classification.THM_MAIN:
            X, Y = xint.split_pieces(xint.pair_ssf(pair).pieces, I)
            closed = xint.interaction_closed(X, Y).value
            quad = xint.interaction_quadrature(X, Y)
            t = max(tol["quadrature_abs"], tol["quadrature_rel"] * closed)
            r = abs(quad - closed)
            row.update(integral_quadrature=quad, quadrature_residual=r, quadrature_tol=t,
                       quadrature_pass=r <= t)
            passes.append(row["quadrature_pass"])
    elif cls == Classification.TRACE_MISMATCH:
        if rep.index > 0:
            z = dets.section_det(pair, I, "direct")
        else:
            z = dets.section_det_dual(pair, I, "direct")
        row.update(predicted_zero_det=z, trace_mismatch_tol=tol["trace_mismatch"],
                   trace_mismatch_pass=z <= tol["trace_mismatch"])
        passes.append(row["trace_mismatch_pass"])

    if "ssf_l1" in checks:
        core = cyclic_part(pair)
        l1 = 0.0 if core is None else ssf_l1(ssf_of_pair(core))
        r = abs(l1 - pair.phi_norm_sq)
        row.update(ssf_l1=l1, phi_norm_sq=pair.phi_norm_sq, ssf_l1_residual=r,
                   ssf_l1_tol=tol["ssf_l1"], ssf_l1_pass=r <= tol["ssf_l1"])
        passes.append(row["ssf_l1_pass"])
    row["status"] = "pass" if all(passes) else "fail"
    return row


def counterexample_row(tol: dict | None = None) -> dict:
    """The rank-two pair ``diag(0,3)`` vs ``diag(1,4)`` on ``I = [-1, 2]``.

    The determinant side is exactly 1 while the naive SSF integral equals
    ``ln(9/8)``; the mismatch is the expected outcome.
    """
    tol = {**DEFAULT_TOLERANCES, **(tol or {})}
    A = np.diag([0.0, 3.0])
    pair = make_matrix_pair(A, A + np.eye(2))
    I = IntervalSet([(-1.0, 2.0)])
    dsq = dets.diff_sq_det(pair, I)
    dsq_m = dets.diff_sq_det_matrix(pair, I)
    # SSF of the pair by eigenvalue counting: 1 on (0,1] and (3,4].
    X, Y = xint.split_pieces([(0.0, 1.0), (3.0, 4.0)], I)
    integral = xint.interaction_closed(X, Y).value
    lhs = 0.0 - math.log(dsq)
    mismatch = abs(lhs - 2 * integral) > 1e-6
    return {
        "suite": "counterexample", "instance": "rank-two", "generator": "Explicit", "dim": 2,
        "classification": "RankTwo", "diff_sq_det": dsq, "diff_sq_det_matrix": dsq_m,
        "neg_log_det": lhs, "integral_closed": integral,
        "theorem_residual": abs(lhs - 2 * integral),
        "expected_failure": mismatch,
        "status": "pass" if (mismatch and abs(dsq - 1.0) <= 1e-12) else "fail",
    }


@dataclass
class Report:
    rows: list[dict] = field(default_factory=list)
    hard_errors: int = 0

    @property
    def all_pass(self) -> bool:
        return self.hard_errors == 0 and all(r.get("status") == "pass" for r in self.rows)


def _tolerances(config: dict, tol_scale: float) -> dict:
    tol = {**DEFAULT_TOLERANCES, **config.get("tolerances", {})}
    unknown = set(config.get("tolerances", {})) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
    return {k: v * tol_scale for k, v in tol.items()}


def validate_config(config: dict) -> None:
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    if config.get("format_version") != FORMAT_VERSION:
        raise ConfigError(f"format_version must be {FORMAT_VERSION}")


def run_suite(config: dict, tol_scale: float = 1.0, timings: bool = False, seed: int | None = None) -> Report:
    """Run every instance of a suite config; failures are recorded, never raised."""
    validate_config(config)
    tol = _tolerances(config, tol_scale)
    name = config.get("name", "suite")
    checks = config.get("checks", ["theorem", "methods", "dual", "ssf_l1"])
    specs = [InstanceSpec.from_dict(d) for d in config.get("instances", [])]
    if "ensemble" in config:
        ens = dict(config["ensemble"])
        if seed is not None:
            ens["seed"] = seed
        specs += ensemble_specs(ens)
    report = Report()
    for i, spec in enumerate(specs):
        t0 = time.perf_counter()
        row = {"suite": name, "instance": spec.name or str(i), "generator": spec.generator,
               "dim": spec.dim, "seed": spec.seed}
        try:
            pair, I, attempt = gen_instance(spec)
            row["attempt"] = attempt
            row.update(evaluate_instance(pair, I, checks, tol))
        except Exception as exc:  # recorded per instance, suite continues
            log.warning("instance %s failed: %s", row["instance"], exc)
            row.update(status="error", error=f"{type(exc).__name__}: {exc}")
            report.hard_errors += 1
        if timings:
            row["seconds"] = time.perf_counter() - t0
        report.rows.append(row)
    if config.get("counterexample"):
        report.rows.append(counterexample_row(tol))
    return report


def subspace_suite(count: int = 100, seed: int = 11, tol_scale: float = 1.0) -> Report:
    """Random gapped rank-one instances with ``||phi||^2 < delta``; checks the norm bounds."""
    report = Report()
    tol = DEFAULT_TOLERANCES["subspace"] * tol_scale
    for i in range(count):
        row = {"suite": "subspace", "instance": str(i), "seed": seed + i}
        try:
            pair, Sigma = subspace_instance(seed + i)
            r = perturb.subspace_bound_check(pair, Sigma)
            ok = r.hypothesis_ok and r.norm <= r.bound + tol and r.norm < 1.0
            row.update(generator="Clustered", dim=pair.dim, subspace_delta=r.delta,
                       phi_norm_sq=r.phi_norm_sq, subspace_norm=r.norm, subspace_bound=r.bound,
                       subspace_tol=tol, subspace_pass=ok, status="pass" if ok else "fail")
        except Exception as exc:
            row.update(status="error", error=f"{type(exc).__name__}: {exc}")
            report.hard_errors += 1
        report.rows.append(row)
    return report


def subspace_instance(seed: int) -> tuple[RankOnePair, IntervalSet]:
    """A clustered spectrum, Sigma a random union of cluster hulls, ``||phi||^2`` below the gap."""
    for attempt in range(MAX_RETRIES):
        rng = _rng(seed, attempt)
        k = int(rng.integers(2, 6))
        counts = rng.integers(1, 6, size=k)
        centers = np.cumsum(1.0 + 2.0 * rng.random(k))
        vals = np.concatenate([c + 0.4 * (rng.random(m) - 0.5) for c, m in zip(centers, counts)])
        chosen = rng.random(k) < 0.5
        if not chosen.any() or chosen.all():
            continue
        n = vals.size
        if rng.random() < 0.5:
            Q, _ = np.linalg.qr(box_muller(rng, n * n).reshape(n, n) + 1j * box_muller(rng, n * n).reshape(n, n))
            A = (Q * vals) @ Q.conj().T
        else:
            A = np.diag(vals)
        # Sigma: hull of the chosen clusters' eigenvalues (may be a single point).
        start = np.concatenate([[0], np.cumsum(counts)])
        Sigma = IntervalSet(
            (float(vals[start[j]:start[j + 1]].min()), float(vals[start[j]:start[j + 1]].max()))
            for j in range(k) if chosen[j]
        )
        z = box_muller(rng, 2 * n)
        phi = z[:n] + 1j * z[n:]
        pair0 = make_pair(A, phi)
        delta = perturb.sigma_gap(pair0, Sigma)
        frac = 0.1 + 0.85 * rng.random()
        phi = phi / np.linalg.norm(phi) * math.sqrt(frac * delta)
        return make_pair(A, phi), Sigma
    raise UnsatisfiableSpec("could not build a subspace instance")


def convergence_report(dim: int = 200, Ms=(25, 50, 100, 150, 200), strong: float = 1.0,
                       weak: float = 0.9) -> tuple[perturb.ConvergenceStudy, Report]:
    """Truncation study on the alternating-hopping chain with ``phi`` at the chain end."""
    A = jacobi_surrogate(dim, strong, weak)
    phi = np.zeros(dim)
    phi[0], phi[1] = 0.6, 0.3
    pair = make_pair(A, phi)
    I = IntervalSet([(-math.inf, 0.0)])
    study = perturb.convergence_study(pair, I, Ms)
    report = Report()
    for r in study.rows:
        row = {"suite": "converge", "instance": f"M={r.M}", "generator": "Jacobi", "dim": r.M,
               "classification": r.classification, "det_direct": r.det, "integral_closed": r.integral,
               "theorem_residual": r.theorem_residual, "methods_residual": r.det_residual,
               "quadrature_residual": r.integral_residual,
               "status": "pass" if r.gap_persist else "fail"}
        report.rows.append(row)
    return study, report


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return _fmt(v)
        return float(format(v, ".17g"))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def format_report(report: Report, fmt: str = "csv") -> str:
    """Serialise rows with the fixed column order; floats to 17 significant digits."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in report.rows:
            w.writerow([_fmt(row.get(c)) for c in COLUMNS])
        return buf.getvalue()
    if fmt in ("jsonl", "json-lines"):
        lines = []
        for row in report.rows:
            obj = {c: _json_value(row.get(c)) for c in COLUMNS}
            lines.append(json.dumps(obj, sort_keys=False))
        return "".join(line + "\n" for line in lines)
    raise ConfigError(f"unknown format {fmt!r}")


def emit_report(report: Report, fmt: str = "csv", path: str | None = None) -> None:
    text = format_report(report, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def parse_report(text: str, fmt: str = "csv") -> list[dict]:
    """Read rows back as strings (csv) or JSON values (jsonl)."""
    if fmt == "csv":
        return list(csv.DictReader(io.StringIO(text)))
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# ---------------------------------------------------------------------------
# command line


def _load_config(path: str | None) -> dict | None:
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specshift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, help_ in [
        ("check", "single instance (golden pair by default)"),
        ("suite", "ensemble of instances from a config"),
        ("converge", "finite-rank truncation study"),
        ("subspace", "subspace perturbation bound study"),
        ("counterexample", "rank-two counterexample"),
    ]:
        sp = sub.add_parser(verb, help=help_)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int, help="override the ensemble base seed")
        sp.add_argument("--format", default="csv", choices=["csv", "jsonl"])
        sp.add_argument("--out", default="-", help="output path (default stdout)")
        sp.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")
        sp.add_argument("--timings", action="store_true", help="add per-instance wall time")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        config = _load_config(args.config)
        if config is not None:
            validate_config(config)
        if args.verb == "check":
            config = config or {"format_version": FORMAT_VERSION, "name": "check",
                                "checks": ["theorem", "methods", "dual", "ssf_l1", "quadrature"]}
            if "instances" not in config and "ensemble" not in config:
                config["instances"] = [GOLDEN]
            report = run_suite(config, args.tol_scale, args.timings, args.seed)
        elif args.verb == "suite":
            if config is None:
                raise ConfigError("suite needs --config")
            report = run_suite(config, args.tol_scale, args.timings, args.seed)
        elif args.verb == "converge":
            opts = config or {}
            _, report = convergence_report(
                int(opts.get("dim", 200)), tuple(opts.get("Ms", (25, 50, 100, 150, 200))),
                float(opts.get("strong", 1.0)), float(opts.get("weak", 0.9)))
        elif args.verb == "subspace":
            opts = config or {}
            report = subspace_suite(int(opts.get("count", 100)),
                                    args.seed if args.seed is not None else int(opts.get("seed", 11)),
                                    args.tol_scale)
        else:
            report = Report([counterexample_row()])
        emit_report(report, args.format, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
