#!/usr/bin/env python3
"""Run the four desk-scale sweeps and drop their CSVs under results/.

Usage: python scripts/run_experiments.py [results_dir] [--quick]

--quick shrinks trial counts so the whole thing finishes in well under a
minute; default settings reproduce the figures discussed in the README in a
few minutes.
"""

import sys
from pathlib import Path

from oselab.cli import main


def run(out_dir: Path, quick: bool) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    trials = "200" if quick else "1000"
    phase_trials = "200" if quick else "2000"
    jobs = "4"
    runs = [
        (
            "dim-frontier",
            ["--d", "10", "--eps", "0.1,0.3", "--m", "25,50,100,200,400,800,1600,3200,6400,12800",
             "--n", "12800", "--trials", trials],
        ),
        (
            "sparsity-phase",
            ["--d", "20", "--s", "1,2,4,8", "--m", "40,100,400,1600,6400,40000",
             "--eps", "0.3", "--trials", phase_trials],
        ),
        ("lemma-suite", ["--trials", "1000"]),
        (
            "regress-demo",
            ["--d", "5", "--eps", "0.2", "--m", "1200", "--n", "2000", "--trials", "100"],
        ),
    ]
    worst = 0
    for sweep, extra in runs:
        out = out_dir / f"{sweep}.csv"
        print(f"== {sweep} -> {out}")
        code = main([sweep, "--out", str(out), "--seed", "42", "--jobs", jobs, *extra])
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    args = [a for a in sys.argv[1:] if a != "--quick"]
    quick = "--quick" in sys.argv[1:]
    target = Path(args[0]) if args else Path("results")
    raise SystemExit(run(target, quick))
