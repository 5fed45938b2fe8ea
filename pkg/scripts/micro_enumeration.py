"""Exhaustive incentive check over every instance with n buyers.

Enumerates all seller follower sets, all buyer follower sets and all value
profiles in 0..levels-1, for each k in 1..n, and reports violations of the
chosen claim together with how often hiding followers is strictly worse
than forwarding them.

    python3 scripts/micro_enumeration.py --n 3 --mechanism distance --claim hiding-dominance
"""
import argparse
import sys
import time

from diffauction.exhaustive import MECHANISMS, check_micro, structures
from diffauction.fileformat import format_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--mechanism", choices=MECHANISMS, default="distance")
    ap.add_argument("--claim", choices=("strategy-proofness", "hiding-dominance"), default="strategy-proofness")
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args(argv)
    if args.n > 4:
        ap.error("n > 4 does not fit in memory")

    preps = structures(args.n)
    failed = 0
    for k in range(1, args.n + 1):
        t0 = time.perf_counter()
        res = check_micro(args.n, k, args.mechanism, args.claim, args.levels, preps)
        print(f"# k={k} {time.perf_counter() - t0:.1f}s")
        sys.stdout.write(format_report(res.report()))
        failed += res.violations > 0
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
