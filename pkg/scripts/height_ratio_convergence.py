"""Mean height of uniform random BSTs against c* log n over an n grid.

Two routes per n: the size-process kernel (q = 1) and, for moderate n,
explicit BSTs built from uniform permutations. The ratio creeps toward 1
only at log-log speed, which is why the q = 1 band check at n = 10^5 sits
just under 0.80.

    python scripts/height_ratio_convergence.py --seed 3
"""

import argparse
import math

import numpy as np

from mallows_trees.analytics import c_star
from mallows_trees.bst import build_bst, height
from mallows_trees.experiments import run_trials
from mallows_trees.kernels import tree_height_kernel


def main():
    ap = argparse.ArgumentParser(description="uniform BST height / (c* log n)")
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--n", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--bst-trials", type=int, default=50)
    ap.add_argument("--bst-max-n", type=int, default=10**5)
    args = ap.parse_args()
    cs = c_star()
    print("n,route,trials,mean_height,se,ratio,ratio_loglog_corrected")
    for i, n in enumerate(args.n):
        norm = cs * math.log(n)
        # second-order term of the expected height: -3/(2 log(c*/2)) log log n
        corr = 3.0 / (2.0 * math.log(cs / 2.0)) * math.log(math.log(n))
        h = np.array(run_trials(lambda r: int(tree_height_kernel(n, 1.0, r.random(n))), args.trials, args.seed, "kernel", i))
        print(f"{n},kernel,{args.trials},{h.mean():.3f},{h.std(ddof=1) / math.sqrt(len(h)):.3f},{h.mean() / norm:.4f},{(h.mean() + corr) / norm:.4f}")
        if n <= args.bst_max_n:
            hb = np.array(run_trials(lambda r: height(build_bst(r.permutation(n) + 1)), args.bst_trials, args.seed, "bst", i))
            print(f"{n},bst,{args.bst_trials},{hb.mean():.3f},{hb.std(ddof=1) / math.sqrt(len(hb)):.3f},{hb.mean() / norm:.4f},{(hb.mean() + corr) / norm:.4f}")


if __name__ == "__main__":
    main()
