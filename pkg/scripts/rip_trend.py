"""Median RIP distortion of Gaussian sketches on a bounded-intersection sparse family.

    python3 scripts/rip_trend.py --n 64 --s 8 --m 8 16 32 64 --trials 50
"""
import argparse

from embedbounds import rip_lower_bound
from embedbounds.sparse import build_subset_family, family_to_vectors, median_eps_hat, rip_experiment, rip_minimal_m


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--s", type=int, default=8)
    ap.add_argument("--m", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--epsilon", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    fam = build_subset_family(args.n, args.s, seed=args.seed)
    vecs = family_to_vectors(fam)
    print(f"family size {len(fam)} for n={args.n}, s={args.s}")
    for m in args.m:
        med = median_eps_hat(rip_experiment(vecs, m, args.trials, args.seed))
        print(f"m={m:4d}  median eps_hat={med:.4f}")
    bound = rip_lower_bound(args.n, args.s, args.epsilon)
    m_min = rip_minimal_m(vecs, args.epsilon, args.trials, seed=args.seed)
    print(f"lower bound {bound.value:.4g} (vacuous={bound.vacuous}); empirical minimal m {m_min}")


if __name__ == "__main__":
    main()
