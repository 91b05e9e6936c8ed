"""Finite-rank truncation of a gapped chain.

The reference pair is a 200-site chain with alternating hopping (a spectral
gap around 0) and phi localised at the chain end.  Compressing to the first
M sites and filtering spurious eigenvalues gives pairs whose section
determinant on (-inf, 0] converges quickly to the reference value.
"""
from specshift.runner import convergence_report

study, _ = convergence_report()
print(f"delta={study.delta:.4f} epsilon={study.epsilon:.4f} eta={study.eta:.4f} M0={study.M0}")
print(f"{'M':>4} {'det':>20} {'|det - ref|':>12} {'|int - ref|':>12} persist")
for r in study.rows:
    print(f"{r.M:4d} {r.det:20.15f} {r.det_residual:12.3e} {r.integral_residual:12.3e} {r.gap_persist}")
