"""Run every experiment at its acceptance-scale configuration and write CSV + JSON.

    python scripts/run_experiment_grid.py --seed 1 --out results/
    python scripts/run_experiment_grid.py --seed 1 --out results/ --quick
"""

import argparse
import os
import time
from pathlib import Path

from mallows_trees.experiments import ExperimentConfig, Schedule, run, to_csv, to_json

SCHED = Schedule.parse("one-minus-n-pow:" + repr(1 / 3))

# (name, experiment, schedule, n grid, trials, thresholds, params)
GRID = [
    ("height-ratio-q0", "height-ratio", Schedule.constant(0.0), (100, 1000, 10**4), 100, {}, {}),
    ("height-ratio-schedule", "height-ratio", SCHED, (10**6,), 100, {}, {}),
    ("height-ratio-uniform", "height-ratio", Schedule.constant(1.0), (10**5,), 200, {"ratio_lo": 0.80, "ratio_hi": 1.05}, {}),
    ("rd-clt", "rd-clt", SCHED, (10**6,), 2000, {}, {}),
    ("height-clt", "height-clt", SCHED, (10**6,), 1000, {}, {}),
    ("poisson-0.5", "poisson", Schedule("lambda-over-n", 0.5), (10**5,), 5000, {}, {}),
    ("poisson-2", "poisson", Schedule("lambda-over-n", 2.0), (10**5,), 5000, {}, {}),
    ("mean-variance", "mean-variance", Schedule.constant(0.999), (10**4,), 10**4, {}, {}),
    ("chernoff", "chernoff", Schedule.constant(0.999), (10**4,), 10**5, {}, {}),
    ("threshold-0.3", "threshold", Schedule.constant(0.3), tuple(range(4, 9)), 20000, {}, {}),
    ("threshold-0.7", "threshold", Schedule.constant(0.7), tuple(range(4, 9)), 20000, {}, {}),
    ("subtree-identity", "subtree-identity", Schedule.constant(0.5), (6,), 10**5, {}, {"m": 3}),
    ("coupling-exact", "coupling", Schedule.constant(0.6), tuple(range(1, 8)), 1, {}, {}),
    ("coupling-mc", "coupling", Schedule.constant(0.999), (10**4,), 2000, {}, {"ells": (20, 40, 80)}),
    ("occupancy", "occupancy", Schedule.constant(0.5), tuple(range(1, 8)), 1, {}, {}),
    ("path-bounds-0.9", "path-bounds", Schedule.constant(0.9), (10**4,), 100, {}, {}),
    ("path-bounds-0.999", "path-bounds", Schedule.constant(0.999), (10**4,), 100, {}, {}),
    ("path-bounds-1", "path-bounds", Schedule.constant(1.0), (10**4,), 100, {}, {}),
    ("left-subtree-sup", "left-subtree-sup", Schedule.constant(0.99), (200,), 200, {}, {}),
    ("range-of-m", "range-of-m", SCHED, (10**3, 10**4, 10**5), 2000, {}, {}),
    ("height-tails", "height-tails", SCHED, (10**3, 10**4, 10**5), 200, {}, {}),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--quick", action="store_true", help="divide trial counts by 10")
    ap.add_argument("--only", nargs="*", help="run only these names")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name, exp, sched, grid, trials, th, params in GRID:
        if args.only and name not in args.only:
            continue
        if args.quick:
            trials = max(1, trials // 10)
        cfg = ExperimentConfig(exp, sched, grid, trials, args.seed, threads=args.threads, thresholds=th, params=params)
        t0 = time.perf_counter()
        summary = run(cfg)
        (args.out / f"{name}.csv").write_text(to_csv(summary))
        (args.out / f"{name}.json").write_text(to_json(summary))
        status = "pass" if summary.passed else "FAIL"
        print(f"{name:24s} {status}  {time.perf_counter() - t0:7.1f}s")
        if not summary.passed:
            failed.append(name)
    if failed:
        print("failed:", ", ".join(failed))


if __name__ == "__main__":
    main()
