"""Command-line entry point.

Exit codes: 0 success or pass, 1 a property failed, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import properties as props
from .diffusion_opt import PartitionInstance, optimal_diffusion_exact, reduce_partition
from .efficiency import CSV_COLUMNS, adversarial_instances, efficiency_record, write_csv
from .fileformat import (
    format_comparison,
    format_outcome,
    format_outcome_csv,
    format_report,
    parse_instance,
    serialize_instance,
)
from .generators import GeneratorParams, corpus_params, gen_random_instance
from .mechanisms import MECHANISMS, run_mechanism
from .network import InstanceError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _money(text: str):
    value = Fraction(text)
    if value < 0:
        raise argparse.ArgumentTypeError("money must be non-negative")
    return int(value) if value.denominator == 1 else value


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _reserve_for(args, instance, mechanism):
    """Command-line reserve wins over the file; baselines ignore a file reserve."""
    reserve = args.reserve if args.reserve is not None else instance.reserve
    return reserve if mechanism == "distance" else None


def cmd_run(args, out):
    inst = _load(args.instance)
    if args.reserve is not None and args.mechanism != "distance":
        raise ValueError("--reserve only applies to the distance mechanism")
    reserve = _reserve_for(args, inst, args.mechanism)
    outcome = run_mechanism(args.mechanism, inst, inst.truthful(), reserve)
    if args.format == "csv":
        out.write(format_outcome_csv(inst, outcome, args.mechanism))
    else:
        out.write(format_outcome(inst, outcome, args.mechanism, reserve))
    return EXIT_OK


def cmd_compare(args, out):
    inst = _load(args.instance)
    outcomes = {m: run_mechanism(m, inst, inst.truthful(), _reserve_for(args, inst, m)) for m in MECHANISMS}
    out.write(format_comparison(inst, outcomes))
    return EXIT_OK


def _instances(args):
    if args.instance:
        return [_load(args.instance)]
    return [gen_random_instance(corpus_params(s)) for s in range(args.seed, args.seed + args.count)]


def cmd_check(args, out):
    instances = _instances(args)
    names = props.CLAIMED[args.mechanism] if args.property == "all" else [args.property]
    reserve = args.reserve
    if reserve is None and args.instance:
        reserve = instances[0].reserve if args.mechanism == "distance" else None
    failed = 0
    for name in names:
        if reserve is not None and name in ("surplus-domination", "revenue-domination", "non-wastefulness"):
            # claims stated for the mechanism without a reserve
            rep = props.run_property(name, instances, args.mechanism, None if name != "non-wastefulness" else reserve)
        else:
            rep = props.run_property(name, instances, args.mechanism, reserve)
        out.write(format_report(rep))
        if not rep.passed:
            failed += 1
            subset = rep.witness.get("subset")
            if subset is not None:
                inst = rep.witness["instance"]
                out.write("witness subset: " + ",".join(inst.label(i) for i in subset) + "\n")
    if args.expect_fail:
        return EXIT_OK if failed == len(names) else EXIT_FAIL
    return EXIT_FAIL if failed else EXIT_OK


def cmd_optdiff(args, out):
    inst = _load(args.instance)
    sol = optimal_diffusion_exact(inst)
    out.write("subset\trevenue\n")
    for subset, r in sol.table.items():
        out.write("{" + ",".join(inst.label(i) for i in subset) + "}\t" + str(r) + "\n")
    out.write("best_subset: {" + ",".join(inst.label(i) for i in sol.best_subset) + "}\n")
    out.write(f"best_revenue: {sol.best_revenue}\n")
    if args.threshold is not None:
        out.write(f"decision (K={args.threshold}): {'yes' if sol.best_revenue >= args.threshold else 'no'}\n")
    return EXIT_OK


def cmd_reduce(args, out):
    try:
        items = [int(x) for x in args.partition.replace(" ", "").split(",") if x]
    except ValueError:
        raise InstanceError(f"bad partition list {args.partition!r}") from None
    inst, threshold = reduce_partition(PartitionInstance(items))
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    sys.stderr.write(f"threshold: {threshold}\n")
    return EXIT_OK


def _gen_params(args, seed):
    if args.n is None:
        base = corpus_params(seed)
        return GeneratorParams(base.n, args.k or base.k, args.max_value, args.max_followers, base.edge_probability, seed)
    return GeneratorParams(args.n, args.k or 1, args.max_value, args.max_followers, args.edge_probability, seed)


def cmd_gen(args, out):
    if args.count > 1 and not args.output_dir:
        raise InstanceError("--count > 1 needs --output-dir")
    for seed in range(args.seed, args.seed + args.count):
        text = serialize_instance(gen_random_instance(_gen_params(args, seed)))
        if args.output_dir:
            os.makedirs(args.output_dir, exist_ok=True)
            with open(os.path.join(args.output_dir, f"seed_{seed}.json"), "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
    return EXIT_OK


def cmd_efficiency(args, out):
    reserve = args.reserve
    if args.instance:
        inst = _load(args.instance)
        reserve = reserve if reserve is not None else (inst.reserve or 0)
        rows = [(args.seed, inst, reserve)]
    else:
        reserve = reserve if reserve is not None else 0
        rows = [(s, gen_random_instance(corpus_params(s)), reserve) for s in range(args.seed, args.seed + args.count)]
    if args.format == "csv":
        write_csv(rows, out)
        return EXIT_OK
    worst = None
    for seed, inst, r in rows:
        rec = efficiency_record(inst, reserve=r)
        if worst is None or rec.normalized_loss > worst[1].normalized_loss:
            worst = (seed, rec)
        if args.instance:
            for col, val in zip(CSV_COLUMNS[4:], (rec.optimal_surplus, rec.achieved_surplus, rec.loss, rec.normalized_loss)):
                out.write(f"{col}: {val}\n")
    if not args.instance:
        out.write(f"profiles: {len(rows)}\n")
        out.write(f"max_normalized_loss: {worst[1].normalized_loss} (seed {worst[0]})\n")
        caps = {inst.value_cap for _, inst, _ in rows}
        ks = sorted({inst.k for _, inst, _ in rows})
        adv = max(
            efficiency_record(a, reserve=reserve).normalized_loss
            for k in ks
            for cap in caps
            for a in adversarial_instances(k, cap, reserve)
        )
        out.write(f"adversarial_max_normalized_loss: {adv}\n")
        out.write(f"alpha_estimate: {max(adv, worst[1].normalized_loss)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diffauction", description="Diffusion auctions on buyer networks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one mechanism on an instance")
    run.add_argument("--instance", required=True)
    run.add_argument("--mechanism", choices=sorted(MECHANISMS), default="distance")
    run.add_argument("--reserve", type=_money)
    run.add_argument("--format", choices=("text", "csv"), default="text")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="all mechanisms side by side")
    cmp_.add_argument("--instance", required=True)
    cmp_.add_argument("--reserve", type=_money)
    cmp_.set_defaults(func=cmd_compare)

    chk = sub.add_parser("check", help="check a property on an instance or a random corpus")
    chk.add_argument("--property", required=True, choices=[*props.ALL_PROPERTIES, "all"])
    chk.add_argument("--instance")
    chk.add_argument("--mechanism", choices=sorted(MECHANISMS), default="distance")
    chk.add_argument("--reserve", type=_money)
    chk.add_argument("--expect-fail", action="store_true")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--count", type=int, default=100)
    chk.set_defaults(func=cmd_check)

    opt = sub.add_parser("optdiff", help="revenue-maximising set of direct buyers")
    opt.add_argument("--instance", required=True)
    opt.add_argument("--threshold", type=_money)
    opt.set_defaults(func=cmd_optdiff)

    red = sub.add_parser("reduce", help="build a diffusion instance from a Partition instance")
    red.add_argument("--partition", required=True)
    red.add_argument("--output")
    red.set_defaults(func=cmd_reduce)

    gen = sub.add_parser("gen", help="generate seeded random instances")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--max-value", type=int, default=100)
    gen.add_argument("--max-followers", type=int)
    gen.add_argument("--edge-probability", type=float, default=0.3)
    gen.add_argument("--output-dir")
    gen.set_defaults(func=cmd_gen)

    eff = sub.add_parser("efficiency", help="efficiency loss with a reserve price")
    eff.add_argument("--instance")
    eff.add_argument("--reserve", type=_money)
    eff.add_argument("--seed", type=int, default=0)
    eff.add_argument("--count", type=int, default=100)
    eff.add_argument("--format", choices=("text", "csv"), default="text")
    eff.set_defaults(func=cmd_efficiency)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (InstanceError, OSError, ValueError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
