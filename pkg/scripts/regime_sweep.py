"""Lower bound and regime as V / tau^d sweeps across the threshold.

Holds d, tau and the diameter fixed and scales the volume, printing the
regime, the compositional lower bound and the radius used.

    python3 scripts/regime_sweep.py --dim 2 --points 12
"""
import argparse
import math

import numpy as np

from embedbounds.bounds import ManifoldDescriptor, main_lower_bound, reach_regime, unit_ball_volume


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--reach", type=float, default=1.0)
    ap.add_argument("--epsilon", type=float, default=1 / 3)
    ap.add_argument("--points", type=int, default=12)
    args = ap.parse_args()

    d, tau = args.dim, args.reach
    # reach drops below (V / omega_d)^(1/d) / (4 sqrt e) exactly when V / tau^d passes this
    thr = unit_ball_volume(d) * (4 * math.sqrt(math.e)) ** d
    print(f"d={d}: LowReach once V/tau^d exceeds {thr:.4g}")
    for log_ratio in np.linspace(math.log(thr) - 6, math.log(thr) + 6, args.points):
        M = ManifoldDescriptor.from_log_volume(d, float(log_ratio) + d * math.log(tau), tau, 4 * tau)
        lb = main_lower_bound(M, args.epsilon)
        print(f"V/tau^d={math.exp(log_ratio):12.4g}  {reach_regime(M).value:9s}  "
              f"m_lb={lb.m_lb:.4g}  delta={lb.delta_used:.4g}")


if __name__ == "__main__":
    main()
