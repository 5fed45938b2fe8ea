"""Worst observed efficiency loss as a function of the reserve price.

For each reserve on the grid, runs the distance-based mechanism with that
reserve over a random corpus and the adversarial families, and writes one
CSV row: reserve, worst random loss, worst adversarial loss, the bound
max(v_h, cap - v_h) / cap, all normalised by k * cap.

    python3 scripts/alpha_sweep.py --count 2000 --step 10 > alpha.csv
"""
import argparse
import csv
import sys
from fractions import Fraction

from diffauction.efficiency import alpha_estimate
from diffauction.generators import corpus_params, gen_random_instance


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=100)
    ap.add_argument("--step", type=int, default=10)
    args = ap.parse_args(argv)

    corpus = [
        gen_random_instance(corpus_params(s, max_value=args.cap)) for s in range(args.seed, args.seed + args.count)
    ]
    by_k: dict = {}
    for inst in corpus:
        by_k.setdefault(inst.k, []).append(inst)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["reserve", "random_max", "adversarial_max", "bound"])
    for v_h in range(0, args.cap + 1, args.step):
        rand = adv = Fraction(0)
        for k, insts in sorted(by_k.items()):
            est = alpha_estimate(k, args.cap, v_h, insts)
            rand = max(rand, est.random_max)
            adv = max(adv, est.adversarial_max)
        bound = Fraction(max(v_h, args.cap - v_h), args.cap)
        w.writerow([v_h, float(rand), float(adv), float(bound)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
