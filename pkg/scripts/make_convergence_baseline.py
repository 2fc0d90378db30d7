"""Regenerate the committed convergence baseline.

Run from the repository root:

    python3 scripts/make_convergence_baseline.py

The output is deterministic for the committed seed; the acceptance suite
re-runs the same configuration and compares against this file.
"""

import json
from pathlib import Path

from multilattice.testbed import ExperimentConfig, convergence_experiment
from multilattice.weights import WeightSpec

BASELINE_CONFIG = dict(
    dim=2,
    alpha_eff=1.4,
    m_grid=(4.0, 8.0, 16.0, 32.0, 64.0),
    degree=1,
    seed=2026,
    c=122.0,
    delta=0.5,
    num_shifts=16,
    grid_per_dim=64,
    compare_single=True,
)


def baseline_experiment():
    return ExperimentConfig(spec=WeightSpec.product([1.0, 1.0]), **BASELINE_CONFIG)


def main():
    result = convergence_experiment(baseline_experiment())
    payload = {
        "config": {**BASELINE_CONFIG, "weights": {"kind": "product", "gammas": [1.0, 1.0]}},
        "summary": result.summary_dict(),
    }
    out = Path(__file__).resolve().parent.parent / "baselines" / "convergence_baseline.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    print(f"wrote {out}")
    print(f"slope_l2 = {result.slope_l2:.4f}, slope_linf = {result.slope_linf:.4f}, "
          f"single_slope_l2 = {result.single_slope_l2:.4f}")


if __name__ == "__main__":
    main()
