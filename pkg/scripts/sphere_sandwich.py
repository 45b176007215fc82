"""Empirical minimal projection dimension for spheres against the two bounds.

    python3 scripts/sphere_sandwich.py --dims 1 2 3 --count 2000 --trials 10
"""
import argparse
import csv
import sys

from embedbounds import main_lower_bound, wakin_upper_bound
from embedbounds.estimators import minimal_embedding_dim_search
from embedbounds.models import Sphere, embed_isometric, sample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--ambient", type=int, default=50)
    ap.add_argument("--epsilon", type=float, default=1 / 3)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["dim", "lower_bound", "empirical_m", "upper_bound", "assumption_ok"])
    for d in args.dims:
        cloud = embed_isometric(sample(Sphere(d), args.count, args.seed), args.ambient, args.seed)
        m = minimal_embedding_dim_search(cloud, args.epsilon, args.trials, seed=args.seed)
        lb = main_lower_bound(cloud.truth, args.epsilon)
        ub = wakin_upper_bound(cloud.truth, args.epsilon, 1 / 3)
        out.writerow([d, lb.m_lb, m, ub.m_ub, ub.assumption_ok])


if __name__ == "__main__":
    main()
