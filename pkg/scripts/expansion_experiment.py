#!/usr/bin/env python3
"""Descent experiment: sampled pairings vs the certified bound.

Runs the restart descent on random regular multigraphs for one or more sizes
and prints the per-trial CSV followed by the summary line for each size.
"""

from argparse import ArgumentParser

from expander_bounds import expansion_experiment, summary_lines


def main() -> int:
    ap = ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=int, default=3)
    ap.add_argument("--sizes", type=int, nargs="+", default=[12, 16, 20])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--restarts", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--simple", action="store_true")
    args = ap.parse_args()

    for n in args.sizes:
        summary = expansion_experiment(
            args.delta,
            n,
            trials=args.trials,
            seed=args.seed,
            restarts=args.restarts,
            simple_only=args.simple,
        )
        for line in summary_lines(summary):
            print(line)
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
