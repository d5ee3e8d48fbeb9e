"""Print exact laws for small n: root split, height, right depth, threshold count.

    python scripts/exact_tables.py --n 6 --q 0.5 --s 3
"""

import argparse

from mallows_trees.analytics import mu_alpha, record_pmf, threshold_pmf
from mallows_trees.oracle import exact_height_pmf, exact_right_depth_pmf, exact_split_pmf


def show(title, table):
    print(f"# {title}  (mean {table.mean():.6f})")
    for k, m in zip(table.support, table.mass):
        print(f"{k:4d}  {m:.12f}")


def main():
    ap = argparse.ArgumentParser(description="exact small-n tables")
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--s", type=int, default=3)
    args = ap.parse_args()
    n, q = args.n, args.q
    show(f"left subtree size of the root, n={n}, q={q}", exact_split_pmf(n, q))
    show(f"height, n={n}, q={q}", exact_height_pmf(n, q))
    show(f"right depth by enumeration, n={n}, q={q}", exact_right_depth_pmf(n, q))
    show(f"right depth from the record product, n={n}, q={q}", record_pmf(n, q))
    print(f"# mu_1({n}, {q}) = {mu_alpha(n, q):.12f}")
    if q < 1:
        show(f"threshold count N({n}, {args.s}), q={q}", threshold_pmf(n, args.s, q))


if __name__ == "__main__":
    main()
