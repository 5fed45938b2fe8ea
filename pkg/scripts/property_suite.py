"""Run every claimed property of each mechanism over a seeded random corpus.

Prints one row per (mechanism, property) with the verdict and the number of
instances checked. Exit status is 1 if anything fails.

    python3 scripts/property_suite.py --count 500 --seed 0
"""
import argparse
import sys
import time

from diffauction.generators import corpus_params, gen_random_instance
from diffauction.properties import CLAIMED, run_property


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-followers", type=int, default=4)
    ap.add_argument("--mechanism", action="append", choices=sorted(CLAIMED))
    args = ap.parse_args(argv)

    corpus = [
        gen_random_instance(corpus_params(s, max_followers=args.max_followers))
        for s in range(args.seed, args.seed + args.count)
    ]
    failed = 0
    print("mechanism\tproperty\tverdict\tchecked\tseconds")
    for mech in args.mechanism or sorted(CLAIMED):
        for name in CLAIMED[mech]:
            t0 = time.perf_counter()
            rep = run_property(name, corpus, mech)
            dt = time.perf_counter() - t0
            print(f"{mech}\t{name}\t{rep.verdict}\t{rep.info.get('checked', '')}\t{dt:.2f}")
            if not rep.passed:
                failed += 1
                print(f"  witness: {rep.witness}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
