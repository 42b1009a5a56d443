#!/usr/bin/env python3
"""Generate a random solvable pole-assignment instance as a problem file.

Draws a random descriptor system (E, A, B) with prescribed rank(E) and a
random target spectrum with r finite poles (taken from the eigenvalues of
an auxiliary random pencil so that complex poles arrive in conjugate
pairs), then writes the instance in the text format the CLI consumes.

Example:
    python3 scripts/generate_problem.py --n 6 --rankE 3 --m 2 --r 4 --seed 1 -o demo.prob
    schurpole assign demo.prob
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from schurpole import BenchConfig, generate_random_instance, serialize_problem


def parse_args(argv=None) -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, required=True, help="state dimension")
    ap.add_argument("--rankE", type=int, required=True, help="rank of E")
    ap.add_argument("--m", type=int, required=True, help="input count")
    ap.add_argument(
        "--r",
        type=int,
        default=None,
        help="finite pole count (default: largest admissible, min(n, rankE + m))",
    )
    ap.add_argument("--seed", type=int, default=0, help="random seed")
    ap.add_argument(
        "-o",
        "--output",
        type=pathlib.Path,
        default=None,
        help="output path (default: stdout)",
    )
    return ap.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        cfg = BenchConfig(n=args.n, rank_e=args.rankE, m=args.m, seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    r = cfg.q if args.r is None else args.r
    if r not in cfg.r_values:
        print(
            f"error: r={r} not admissible; must lie in "
            f"[{cfg.r_values[0]}, {cfg.r_values[-1]}]",
            file=sys.stderr,
        )
        return 1
    problem = generate_random_instance(cfg, r, trial=0)
    text = serialize_problem(problem)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)
        print(f"wrote {args.output} (n={problem.n} m={problem.m} r={problem.r})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
