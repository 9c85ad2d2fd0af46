"""Command line: ``run``, ``reproduce`` and ``oracle`` subcommands."""

from __future__ import annotations

import argparse
import sys

from .blocking import BlockPolicy, Policy
from .errors import InvalidParamsError
from .harness import ExperimentConfig, emit_report, run_experiment
from .oracles import compare_greedy_mc, compare_replay
from .strategies import Strategy

STRATEGY_NAMES = [s.name.lower() for s in Strategy]
POLICY_NAMES = [p.value for p in Policy]

# Columns of each reproducible table: (strategy, statistic) pairs, where the
# statistic prefix is expanded into its _avg and _max fields.
TABLES = {
    1: [("classic", "insert"), ("shortseq", "insert"),
        ("smallcluster", "search"), ("smallcluster", "insert")],
    2: [("classic", "cluster"), ("shortseq", "cluster"), ("smallcluster", "cluster")],
    3: [("locallylinear", "search"), ("walkfirst", "search"), ("decidefirst", "search")],
    4: [("locallylinear", "insert"), ("walkfirst", "insert"), ("decidefirst", "insert")],
    5: [("locallylinear", "cluster"), ("walkfirst", "cluster"), ("decidefirst", "cluster")],
}
TABLE_SIZES = (2**8, 2**12, 2**16, 2**20, 2**22)
TABLE_ALPHAS = (0.4, 0.9)


def _policy(args) -> BlockPolicy:
    return BlockPolicy(Policy(args.block_policy), beta=args.beta, c=args.c,
                       eta=args.eta, delta=args.delta)


def _add_policy_args(p):
    p.add_argument("--block-policy", default="simulation", choices=POLICY_NAMES)
    p.add_argument("--beta", type=int, help="block size for --block-policy explicit")
    p.add_argument("--delta", type=float, help="delta for --block-policy b3")
    p.add_argument("--c", type=float, default=0.0, help="additive constant for b1")
    p.add_argument("--eta", type=float, default=1.0, help="additive constant for b2")


def _write(data: bytes, out: str) -> None:
    if out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def cmd_run(args) -> int:
    config = ExperimentConfig(Strategy.parse(args.strategy), args.n, args.alpha,
                              _policy(args), args.iterations, args.sims, args.seed)
    report = run_experiment(config, workers=args.workers)
    _write(emit_report(report, args.format), args.out)
    return 0


def reproduce_table(table: int, seed: int, max_n: int = 2**16, iterations: int = 10,
                    sims: int = 100, policy: BlockPolicy | None = None,
                    workers: int = 1) -> list[dict]:
    """One row per (n, alpha) with the averaged columns of the chosen table."""
    policy = policy or BlockPolicy()
    rows = []
    for n in (n for n in TABLE_SIZES if n <= max_n):
        for alpha in TABLE_ALPHAS:
            row = {"n": n, "alpha": alpha}
            for name, stat in TABLES[table]:
                cfg = ExperimentConfig(Strategy.parse(name), n, alpha, policy,
                                       iterations, sims, seed)
                grand = run_experiment(cfg, workers=workers).grand
                row[f"{name}_{stat}_avg"] = getattr(grand, f"{stat}_avg")
                row[f"{name}_{stat}_max"] = getattr(grand, f"{stat}_max")
            rows.append(row)
    return rows


def format_table(rows: list[dict]) -> str:
    keys = list(rows[0])
    widths = [max(len(k), 9) for k in keys]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    for row in rows:
        cells = []
        for k, w in zip(keys, widths):
            v = row[k]
            cells.append((f"2^{v.bit_length() - 1}" if k == "n" else f"{v:.2f}").rjust(w))
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


def cmd_reproduce(args) -> int:
    rows = reproduce_table(args.table, args.seed, args.max_n, args.iterations, args.sims,
                           _policy(args), args.workers)
    _write(format_table(rows).encode(), args.out)
    return 0


def cmd_oracle(args) -> int:
    config = ExperimentConfig(Strategy.parse(args.strategy), args.n, args.alpha,
                              _policy(args), 1, 1, args.seed)
    if args.check == "replay":
        problems = compare_replay(config)
    else:
        problems = compare_greedy_mc(config)
        if problems is None:
            print("greedymc: not applicable (block size does not divide n, "
                  "or a block overflowed)")
            return 2
    if problems:
        for p in problems:
            print(f"MISMATCH: {p}")
        return 1
    print(f"{args.check}: ok ({config.strategy.name.lower()}, n={config.n}, "
          f"alpha={config.alpha}, seed={config.master_seed})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoway-probing",
        description="Two-way linear probing simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment and write its report")
    p.add_argument("--strategy", required=True, choices=STRATEGY_NAMES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    _add_policy_args(p)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--sims", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=["csv", "json-like", "json"])
    p.add_argument("--out", default="-")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reproduce", help="rebuild one of the five result tables")
    p.add_argument("--table", type=int, required=True, choices=sorted(TABLES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=2**16)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--sims", type=int, default=100)
    _add_policy_args(p)
    p.add_argument("--out", default="-")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("oracle", help="check a run against a reference implementation")
    p.add_argument("--check", required=True, choices=["replay", "greedymc"])
    p.add_argument("--strategy", required=True, choices=STRATEGY_NAMES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_policy_args(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParamsError, ValueError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
