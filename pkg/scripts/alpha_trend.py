#!/usr/bin/env python3
"""Track alpha = eta * sqrt(delta) along growing even degrees.

Prints the trend table plus the classical counting threshold at delta = 1e4,
both to be read against the reference constant 2 * sqrt(ln 2) ~ 1.66511.
"""

from argparse import ArgumentParser

from expander_bounds import TWO_SQRT_LN2, alpha_trend, bollobas_threshold


def main() -> int:
    ap = ArgumentParser(description=__doc__)
    ap.add_argument("--deltas", type=int, nargs="+", default=[40, 60, 100, 200, 400])
    ap.add_argument("--margin", type=float, default=1e-6)
    args = ap.parse_args()

    print("delta,eta,alpha,gamma,theta,p1")
    for pt in alpha_trend(args.deltas, margin=args.margin):
        print(
            f"{pt.delta},{pt.eta:.3f},{pt.alpha:.6f},{pt.gamma:.6f},"
            f"{pt.theta:.6f},{pt.p1:.6f}"
        )
    big = bollobas_threshold(10**4) * 100.0
    print(f"# reference constant 2*sqrt(ln 2) = {TWO_SQRT_LN2:.6f}")
    print(f"# counting threshold alpha at delta=1e4: {big:.6f} (gap {TWO_SQRT_LN2 - big:.1e})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
