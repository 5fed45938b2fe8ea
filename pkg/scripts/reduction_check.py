"""Check the Partition gadget on every small multiset.

For every multiset of at most ``--max-len`` items drawn from 1..``--max-item``,
builds the diffusion instance, solves it exactly and compares the decision
with a subset-sum oracle. Prints one line per multiset and a summary.

    python3 scripts/reduction_check.py --max-len 5 --max-item 4
"""
import argparse
import itertools
import sys

from diffauction.diffusion_opt import PartitionInstance, verify_reduction


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-len", type=int, default=5)
    ap.add_argument("--max-item", type=int, default=4)
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args(argv)

    bad = total = 0
    for size in range(1, args.max_len + 1):
        for items in itertools.combinations_with_replacement(range(1, args.max_item + 1), size):
            rep = verify_reduction(PartitionInstance(items))
            total += 1
            info = rep.info if rep.passed else rep.witness
            if not args.quiet or not rep.passed:
                print(f"{rep.verdict}\t{items}\tpartition={info['partition']}\tK={info['threshold']}\tbest={info['best_revenue']}")
            bad += not rep.passed
    print(f"{total} multisets, {bad} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
