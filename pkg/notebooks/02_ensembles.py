"""Random ensembles: the determinant identity across generators and dimensions.

Builds a small ThmMain ensemble and a small ThmXiOne ensemble from the same
config machinery the CLI uses, then summarises the worst residuals.  The
full-size runs live in ``configs/thm_main.json`` and ``configs/xi_one.json``.
"""
from specshift.runner import format_report, run_suite

for target in ("ThmMain", "ThmXiOne", "TraceMismatch"):
    config = {
        "format_version": 1,
        "name": target,
        "checks": ["theorem", "methods", "dual", "ssf_l1"],
        "ensemble": {"count": 20, "seed": 3, "target": target, "dim_range": [4, 24]},
    }
    report = run_suite(config)
    rows = report.rows
    worst = {}
    for key in ("theorem_residual", "methods_residual", "dual_residual", "ssf_l1_residual"):
        vals = [r[key] for r in rows if isinstance(r.get(key), float)]
        worst[key] = max(vals) if vals else None
    print(f"{target:14s} instances={len(rows):3d} all_pass={report.all_pass}")
    for key, val in worst.items():
        if val is not None:
            print(f"    max {key:18s} {val:.3e}")

# One row in full, as the CLI would print it.
text = format_report(run_suite({"format_version": 1, "checks": ["theorem"],
                                "ensemble": {"count": 1, "seed": 1, "target": "ThmMain",
                                             "dim_range": [6, 6]}}), "jsonl")
print("\n" + text)
