"""Why rank one matters.

With A = diag(0, 3) and B = A + I (a rank-two perturbation) and the window
I = [-1, 2], the product of primal and dual section determinants is
computable, but the interaction integral built from the shift function no
longer matches it.  The runner reports this row with ``expected_failure``.
"""
import math

import numpy as np

from specshift import IntervalSet, make_matrix_pair
from specshift.dets import diff_sq_det, diff_sq_det_matrix
from specshift.runner import counterexample_row

pair = make_matrix_pair(np.diag([0.0, 3.0]), np.diag([1.0, 4.0]))
I = IntervalSet([(-1.0, 2.0)])
dsq = diff_sq_det(pair, I)
print("det(P Q P) det(P' Q' P') =", dsq, " via det(1 - D^2):", diff_sq_det_matrix(pair, I))
print("-ln of it               =", -math.log(dsq))

row = counterexample_row()
for key in ("neg_log_det", "integral_closed", "theorem_residual", "expected_failure", "status"):
    print(f"{key:18s} {row.get(key)}")
