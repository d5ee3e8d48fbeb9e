"""Command-line front end.

    mallows-trees sample-perm --n 8 --q 0.5 --seed 42
    mallows-trees sample-tree --n 20 --q 0.9 --seed 1
    mallows-trees exact pmf --kind right-depth --n 6 --q 0.5
    mallows-trees verify poisson --lambda 2 --n 100000 --trials 5000 --seed 7
    mallows-trees bench --n 1000000 --q 0.99 --trials 10 --seed 0

Exit codes: 0 success, 1 failed verdict (verify), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__
from . import analytics as an
from . import experiments as ex
from . import oracle
from .bst import build_bst, mirror, tree_to_json
from .mallows import reverse, sample_mallows, sample_mallows_bmodel
from .size_process import generate_tree


class ConfigError(ValueError):
    pass


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _csv(header, rows, seed=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    buf.write(f"# seed={'' if seed is None else seed},version={__version__}\n")
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _q_for_sampling(q: float) -> tuple[float, bool]:
    """Sampling commands accept q > 1 through reversal."""
    if q < 0:
        raise ConfigError("q must be non-negative")
    return (1.0 / q, True) if q > 1 else (q, False)


# --- commands -----------------------------------------------------------------


def cmd_sample_perm(args) -> int:
    q, flipped = _q_for_sampling(args.q)
    rng = np.random.default_rng(args.seed)
    perms = []
    for _ in range(args.count):
        if args.model == "bmodel":
            if q >= 1.0:
                raise ConfigError("the b-model sampler needs q != 1")
            p = sample_mallows_bmodel(args.n, q, rng)
        else:
            p = sample_mallows(args.n, q, rng)
        perms.append(reverse(p) if flipped else tuple(p))
    if args.format == "json":
        doc = {"n": args.n, "q": args.q, "seed": args.seed, "model": args.model, "permutations": [list(p) for p in perms]}
        _emit(json.dumps(doc) + "\n", args.output)
    else:
        _emit(_csv(["draw"] + [f"p{i + 1}" for i in range(args.n)], [[d, *p] for d, p in enumerate(perms)], args.seed), args.output)
    return 0


def cmd_sample_tree(args) -> int:
    q, flipped = _q_for_sampling(args.q)
    rng = np.random.default_rng(args.seed)
    if args.method == "bst":
        perm = sample_mallows(args.n, q, rng)
        tree = build_bst(reverse(perm) if flipped else perm)
    else:
        tree = generate_tree(args.n, q, rng)
        if flipped:
            tree = mirror(tree)
    _emit(tree_to_json(tree) + "\n", args.output)
    return 0


def cmd_exact(args) -> int:
    what = args.what
    if what == "pmf":
        if args.kind == "right-depth":
            table = an.record_pmf(args.n, args.q)
        elif args.kind == "threshold":
            table = an.threshold_pmf(args.n, args.s, args.q)
        elif args.kind == "height":
            table = oracle.exact_height_pmf(args.n, args.q)
        else:
            table = oracle.exact_split_pmf(args.n, args.q)
        rows = [[int(k), float(m)] for k, m in zip(table.support, table.mass)]
        if args.format == "json":
            _emit(json.dumps({"kind": args.kind, "n": args.n, "q": args.q, "mean": table.mean(), "pmf": rows}) + "\n", args.output)
        else:
            _emit(_csv(["k", "mass"], rows), args.output)
        return 0
    if what == "mgf":
        rows = [["mgf", an.record_mgf(args.n, args.q, args.x, args.y)]]
    elif what == "mu":
        main, scale = an.mu_asymptotic(args.n, args.q, args.alpha)
        rows = [["mu", an.mu_alpha(args.n, args.q, args.alpha)], ["asymptotic_main", main], ["asymptotic_scale", scale]]
    elif what == "moments":
        rows = [
            ["moment", an.record_moment(args.n, args.q, args.alpha)],
            ["pmf_moment", an.record_pmf(args.n, args.q).moment(args.alpha)],
        ]
    else:
        rows = _bounds_rows(args)
    rows = [[k, float(v)] for k, v in rows]
    if args.format == "json":
        _emit(json.dumps(dict(rows)) + "\n", args.output)
    else:
        _emit(_csv(["quantity", "value"], rows), args.output)
    return 0


def _bounds_rows(args):
    if args.kind == "mu":
        m = args.m if args.m is not None else max(1, int(args.n**0.5))
        lo, hi = an.mu_bounds(args.n, args.q, args.alpha, m)
        return [["lower", lo], ["mu", an.mu_alpha(args.n, args.q, args.alpha)], ["upper", hi]]
    if args.kind == "chernoff":
        up, lo = an.chernoff_bounds(args.n, args.q, args.c)
        return [["upper_tail", up], ["lower_tail", lo]]
    b = an.threshold_tail_bounds(args.n, args.s, args.q, args.xi)
    nan = float("nan")
    return [
        ["upper", b.upper if b.upper_valid else nan],
        ["upper_valid", float(b.upper_valid)],
        ["lower", b.lower if b.lower_valid else nan],
        ["lower_valid", float(b.lower_valid)],
    ]


def _parse_kv(items) -> dict:
    out = {}
    for item in items or ():
        k, sep, v = item.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {item!r}")
        out[k] = float(v)
    return out


def config_from_args(args) -> ex.ExperimentConfig:
    if args.schedule:
        schedule = ex.Schedule.parse(args.schedule)
    elif args.lam is not None:
        schedule = ex.Schedule("lambda-over-n", args.lam)
    elif args.q is not None:
        if not 0.0 <= args.q <= 1.0:
            raise ConfigError("verify needs q in [0, 1]")
        schedule = ex.Schedule.constant(args.q)
    else:
        raise ConfigError("give --q, --schedule or --lambda")
    params = {}
    for name in ("K", "m"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    if args.s is not None:
        params["s"] = tuple(args.s)
    if args.c is not None:
        params["c"] = tuple(args.c)
    if args.ells is not None:
        params["ells"] = tuple(args.ells)
    n_grid = tuple(args.n)
    if args.experiment == "left-subtree-sup" and "K" in params:
        n_grid = (params["K"],)
    return ex.ExperimentConfig(
        experiment=args.experiment,
        schedule=schedule,
        n_grid=n_grid,
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        output=args.output,
        thresholds=_parse_kv(args.threshold),
        params=params,
    )


def cmd_verify(args) -> int:
    cfg = config_from_args(args)
    summary = ex.run(cfg)
    text = ex.to_json(summary) if args.format == "json" else ex.to_csv(summary)
    _emit(text, args.output)
    if args.output and args.summary:
        with open(args.summary, "w") as fh:
            fh.write(ex.to_json(summary))
    return 0 if summary.passed else 1


def cmd_bench(args) -> int:
    from .kernels import rm_chain_kernel, tree_height_kernel

    q = args.q
    tree_height_kernel(2, q, np.random.default_rng(0).random(2))
    rows = []
    for label, fn in (
        ("tree_height", lambda rng: tree_height_kernel(args.n, q, rng.random(args.n))),
        ("rm_chain", lambda rng: rm_chain_kernel(args.n, min(q, 1 - 1e-15), rng.random(args.n), rng.random(args.n))),
    ):
        rng = np.random.default_rng(args.seed)
        t0 = time.perf_counter()
        for _ in range(args.trials):
            fn(rng)
        dt = (time.perf_counter() - t0) / args.trials
        rows.append([label, args.n, q, dt])
    _emit(_csv(["kernel", "n", "q", "seconds_per_trial"], rows, args.seed), args.output)
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mallows-trees", description="Mallows permutations and their binary search trees")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def out_flags(sp, formats=("csv", "json"), default="csv"):
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.add_argument("--format", choices=formats, default=default)

    sp = sub.add_parser("sample-perm", help="draw Mallows permutations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, required=True, help="q > 1 is handled by reversal")
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--model", choices=("insertion", "bmodel"), default="insertion")
    out_flags(sp)
    sp.set_defaults(func=cmd_sample_perm)

    sp = sub.add_parser("sample-tree", help="draw one Mallows tree as nested JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--method", choices=("bst", "size"), default="bst", help="bst: labelled tree of a sampled permutation; size: shape via subtree sizes")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_sample_tree)

    sp = sub.add_parser("exact", help="exact tables and closed forms")
    sp.add_argument("what", choices=("pmf", "mgf", "mu", "moments", "bounds"))
    sp.add_argument("--kind", default=None, help="pmf: right-depth|height|split|threshold; bounds: mu|chernoff|threshold")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--s", type=int, default=0)
    sp.add_argument("--x", type=float, default=1.0)
    sp.add_argument("--y", type=float, default=1.0)
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--c", type=float, default=2.0)
    sp.add_argument("--xi", type=int, default=1)
    out_flags(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("verify", help="run a seeded experiment and report verdicts")
    sp.add_argument("experiment", choices=sorted(ex.EXPERIMENTS))
    sp.add_argument("--n", type=int, nargs="+", required=True, help="n grid")
    sp.add_argument("--q", type=float)
    sp.add_argument("--schedule", help="kind:param, kind in " + ", ".join(ex.SCHEDULE_KINDS))
    sp.add_argument("--lambda", dest="lam", type=float, help="shorthand for --schedule lambda-over-n:LAMBDA")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--K", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--s", type=int, nargs="+")
    sp.add_argument("--c", type=float, nargs="+")
    sp.add_argument("--ells", type=int, nargs="+")
    sp.add_argument("--threshold", action="append", metavar="KEY=VALUE", help="override a verdict threshold")
    sp.add_argument("--summary", help="with --output, also write the JSON summary here")
    out_flags(sp, default="json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="time the compiled kernels")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--seed", type=_seed, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_bench)
    return p


def _check_exact_kind(args) -> None:
    if args.command != "exact":
        return
    kinds = {"pmf": ("right-depth", "height", "split", "threshold"), "bounds": ("mu", "chernoff", "threshold")}
    if args.what in kinds:
        args.kind = args.kind or kinds[args.what][0]
        if args.kind not in kinds[args.what]:
            raise ConfigError(f"--kind for {args.what} must be one of {kinds[args.what]}")
    if not 0.0 <= args.q <= 1.0:
        raise ConfigError("exact tables need q in [0, 1]")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        _check_exact_kind(args)
        return args.func(args)
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
