"""Spectral subspaces move by at most |phi|^2 / delta.

For a set Sigma separated from the rest of sigma(A) by delta, the projector
of A onto Sigma and the projector of B onto the delta-enlarged set differ in
norm by at most |phi|^2 / delta.  We sweep |phi|^2 up to delta and watch the
ratio of the observed norm to the bound.
"""
import math

import numpy as np

from specshift import IntervalSet, make_pair, subspace_bound_check
from specshift.runner import subspace_suite

A = np.diag([-2.0, -1.9, 0.0, 0.1, 0.2, 2.0])
Sigma = IntervalSet([(-0.05, 0.25)])
rng = np.random.default_rng(5)
u = rng.normal(size=6) + 1j * rng.normal(size=6)
u /= np.linalg.norm(u)

for frac in (0.05, 0.2, 0.5, 0.8, 0.95):
    delta = 1.8
    phi = math.sqrt(frac * delta) * u
    rep = subspace_bound_check(make_pair(A, phi), Sigma)
    print(f"|phi|^2/delta={frac:4.2f}  norm={rep.norm:.4f}  bound={rep.bound:.4f}  "
          f"ratio={rep.norm / rep.bound:.3f}  hypothesis={rep.hypothesis_ok}")

report = subspace_suite(count=30, seed=2)
ratios = [r["subspace_norm"] / r["subspace_bound"] for r in report.rows]
print(f"\nrandom suite: {len(ratios)} instances, all_pass={report.all_pass}, max ratio={max(ratios):.3f}")
