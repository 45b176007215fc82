"""Gaussian width of finite uniform samples of the unit ball against E|g|.

The width of a finite sample converges to the width of the ball only as the
sample covers every direction, which in R^20 takes an astronomical number of
points.  This prints the gap for increasing sample sizes.

    python3 scripts/width_convergence.py --dim 20 --counts 500 2000 20000
"""
import argparse
import math

from scipy.special import gammaln

from embedbounds.estimators import gaussian_width_mc
from embedbounds.models import Ball, sample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=20)
    ap.add_argument("--counts", type=int, nargs="+", default=[500, 2000, 20000])
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    n = args.dim
    target = math.sqrt(2) * math.exp(gammaln((n + 1) / 2) - gammaln(n / 2))
    print(f"E|g| in R^{n} = {target:.4f}")
    for count in args.counts:
        est = gaussian_width_mc(sample(Ball(n), count, args.seed), args.trials, args.seed + 1)
        print(f"count={count:7d}  width={est.mean:.4f} +/- {est.std_error:.4f}  rel gap={1 - est.mean / target:.3f}")


if __name__ == "__main__":
    main()
