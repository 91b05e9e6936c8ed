"""Walkthrough on the smallest interesting pair.

A = diag(0, 2) and phi = (1, 1)/sqrt(2), so B = A + phi phi*.  The script
prints the spectra, the spectral shift function, the section determinant by
three routes and the interaction integral it should match.

Run with ``python3 notebooks/01_golden_pair.py``.
"""
import math

import numpy as np

from specshift import IntervalSet, make_pair, section_det, ssf_of_pair
from specshift.dets import residue_weights, residue_weights_signed, section_det_dual
from specshift.xint import interaction_quadrature, split_pieces, pair_ssf, xi_interaction
from specshift.pairmodel import classify_boundary

A = np.diag([0.0, 2.0])
phi = np.array([1.0, 1.0]) / math.sqrt(2.0)
pair = make_pair(A, phi)

print("sigma(A) =", pair.eigA.values)
print("sigma(B) =", pair.eigB.values, " exact: 3/2 -+ sqrt(5)/2 =",
      1.5 - math.sqrt(5) / 2, 1.5 + math.sqrt(5) / 2)

# The shift function is 1 between each eigenvalue of A and the next one of B.
xi = ssf_of_pair(pair)
print("xi pieces:", xi.pieces)

# Residue weights: the A-side weights are |<phi, a_k>|^2; the signed B-side
# form alternates, the unsigned one is what the Cauchy determinant uses.
wA, wB = residue_weights(pair)
print("wA =", wA, " wB =", wB, " signed wB =", residue_weights_signed(pair)[1])

I = IntervalSet([(-1.0, 1.0)])
print("\nI =", I, "->", classify_boundary(pair, I).classification.value)
for method in ("direct", "overlap", "product"):
    print(f"  det ({method:8s}) = {section_det(pair, I, method):.15f}")
exact = (2 + math.sqrt(5)) / (2 * math.sqrt(5))
print(f"  exact           = {exact:.15f}")
print(f"  dual det        = {section_det_dual(pair, I):.15f}")

# -ln det equals a double integral of xi against itself across the boundary of I.
res = xi_interaction(pair, I)
inside, outside = split_pieces(pair_ssf(pair).pieces, I)
quad = interaction_quadrature(inside, outside, rel_tol=1e-10)
print(f"\n-ln det           = {-math.log(exact):.12f}")
print(f"closed-form integral = {res.value:.12f}")
print(f"adaptive quadrature  = {quad:.12f}")
