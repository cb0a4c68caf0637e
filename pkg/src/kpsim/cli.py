"""Command-line harness.

Subcommands:
    simulate      run one design and write a power-trace file (plus a .key
                  file holding the processed scalar for later scoring)
    attack        run the difference-of-means attack on a trace file
    experiment    design x countermeasure x seed sweep into one CSV
    gates         gate-complexity table (calculator and netlist counts)
    recover-key   ECDSA private key from a revealed nonce
    dump-netlist  textual gate-level dump of a partial multiplier

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal error.
"""

import argparse
import sys

from . import __version__
from .attack import EcdsaSample, recover_private_key
from .curve import default_curve, load_curve, Point
from .datapath import DESIGNS, get_pm_netlist
from .field import from_hex
from .formulas import COMBINED_59, Classical, gate_cost
from .harness import (COUNTERMEASURES, ExperimentSpec, attack_power_trace,
                      experiment_csv, experiment_key, run_experiment,
                      simulate_power_trace)
from .netlist import dump_netlist
from .trace import PowerModelParams, read_trace, write_trace

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        sys.exit(EXIT_USAGE)


def _parse_int(text):
    return int(text, 16) if text.lower().startswith("0x") else int(text, 0)


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":", 1)
            seeds.extend(range(int(lo), int(hi)))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("no seeds given")
    return tuple(seeds)


def _parse_key(text):
    if text == "random":
        return "random"
    key = int(text, 16)
    if key.bit_length() != 232 or not (key >> 231) & 1:
        raise ValueError("key must be a 232-bit hex scalar with the most "
                         "significant bit set")
    return key


def _parse_point(text, curve):
    if text == "G":
        return curve.g
    try:
        xs, ys = text.split(",", 1)
    except ValueError:
        raise ValueError("point must be 'G' or '<hex-x>,<hex-y>'") from None
    return Point(from_hex(xs), from_hex(ys))


def _parse_arms(values):
    if not values:
        return ((),)
    arms = [()]
    for value in values:
        arm = tuple(cm.strip() for cm in value.split(",") if cm.strip())
        for cm in arm:
            if cm not in COUNTERMEASURES:
                raise ValueError("unknown countermeasure %r (choose from %s)"
                                 % (cm, ", ".join(COUNTERMEASURES)))
        arms.append(arm)
    return tuple(arms)


def _spec_comments(args, extra=()):
    skip = {"func", "out"}
    items = ["kpsim=%s" % __version__]
    items += ["%s=%s" % (k, v) for k, v in sorted(vars(args).items())
              if k not in skip and not callable(v)]
    return list(extra) + items


def _power_params(args):
    return PowerModelParams(alpha=args.alpha, beta=args.beta,
                            sigma=args.noise_sigma,
                            noise_seed=args.noise_seed)


def _add_power_args(p):
    p.add_argument("--alpha", type=float, default=1.0,
                   help="weight per PM toggle (default 1)")
    p.add_argument("--beta", type=float, default=1.0,
                   help="weight per register HD unit (default 1)")
    p.add_argument("--noise-sigma", type=float, default=0.0,
                   help="Gaussian noise std-dev (default 0)")
    p.add_argument("--noise-seed", type=int, default=0)


def cmd_simulate(args):
    curve = load_curve(args.curve_file) if args.curve_file else default_curve()
    key = _parse_key(args.key)
    point = _parse_point(args.point, curve)
    arms = _parse_arms(args.countermeasure)
    if len(arms) > 2:
        raise ValueError("simulate takes at most one countermeasure arm; "
                         "use experiment for sweeps")
    cms = arms[-1]
    if key == "random":
        key = experiment_key("random", args.seed)
    trace, k_eff = simulate_power_trace(key, point, args.design, args.seed,
                                        _power_params(args), cms, curve)
    write_trace(trace, args.out)
    with open(args.out + ".key", "w") as fh:
        fh.write("# processed scalar (hex)\n%x\n" % k_eff)
    print("wrote %s (%d cycles) and %s.key" % (args.out, len(trace.samples),
                                               args.out))
    return EXIT_OK


def _read_key_file(path):
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                return int(line, 16)
    raise ValueError("%s: no key found" % path)


def cmd_attack(args):
    trace = read_trace(args.trace)
    true_key = _read_key_file(args.key) if args.key else None
    if true_key is None:
        sys.stderr.write("warning: no key file; candidates ranked by the "
                         "majority-agreement proxy, not delta\n")
    if args.slots_csv:
        from .trace import compress, slice_into_slots, slot_matrix_to_csv
        with open(args.slots_csv, "w") as fh:
            slot_matrix_to_csv(slice_into_slots(compress(trace)), fh)
    report = attack_power_trace(trace, true_key=true_key)
    comments = _spec_comments(args)
    if args.out:
        with open(args.out, "w") as fh:
            report.to_csv(fh, comments)
        print("wrote %s" % args.out)
    else:
        report.to_csv(sys.stdout, comments)
    return EXIT_OK


def cmd_experiment(args):
    chosen = args.design or ["all"]
    designs = tuple(DESIGNS) if "all" in chosen else tuple(dict.fromkeys(chosen))
    spec = ExperimentSpec(
        designs=designs,
        key=_parse_key(args.key),
        point="G",
        countermeasure_arms=_parse_arms(args.countermeasure),
        seeds=_parse_seeds(args.seeds),
        params=_power_params(args),
        curve_file=load_curve(args.curve_file) if args.curve_file else None,
    )
    rows, summaries = run_experiment(spec)
    with open(args.out, "w") as fh:
        experiment_csv(spec, rows, summaries, fh, _spec_comments(args))
    print("wrote %s (%d rows)" % (args.out, len(rows)))
    for (design, arm), mean_best in sorted(summaries.items()):
        print("  %-15s %-40s mean best-delta %.2f" % (design, arm, mean_best))
    return EXIT_OK


def cmd_gates(args):
    rows = [
        ("combined", "calculator", gate_cost(COMBINED_59)),
        ("classical", "calculator", gate_cost(Classical(59))),
    ]
    print("variant,source,and,xor")
    for variant, source, cost in rows:
        print("%s,%s,%d,%d" % (variant, source, cost.and_count,
                               cost.xor_count))
    for variant in ("combined", "classical"):
        nl = get_pm_netlist(variant)
        print("%s,netlist,%d,%d" % (variant, nl.and_count, nl.xor_count))
    return EXIT_OK


def cmd_recover_key(args):
    sample = EcdsaSample(e=_parse_int(args.e), r=_parse_int(args.r),
                         s=_parse_int(args.s), k=_parse_int(args.k),
                         epsilon=_parse_int(args.order))
    key = recover_private_key(sample)
    print("key=%d" % key)
    print("key_hex=0x%x" % key)
    return EXIT_OK


def cmd_dump_netlist(args):
    nl = get_pm_netlist(args.variant)
    if args.out:
        with open(args.out, "w") as fh:
            dump_netlist(nl, fh)
        print("wrote %s (%d gates)" % (args.out, nl.n_gates))
    else:
        dump_netlist(nl, sys.stdout)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="kpsim", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one kP power trace")
    p.add_argument("--design", choices=sorted(DESIGNS), default="basic")
    p.add_argument("--key", default="random",
                   help="232-bit hex scalar or 'random' (default)")
    p.add_argument("--point", default="G", help="'G' or '<hex-x>,<hex-y>'")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--curve-file")
    p.add_argument("--countermeasure", action="append", default=[],
                   metavar="CM[,CM...]",
                   help="traditional countermeasures applied to the run")
    _add_power_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("attack", help="difference-of-means attack on a trace")
    p.add_argument("trace")
    p.add_argument("--key", help="key file written by simulate")
    p.add_argument("--out", help="report CSV (stdout if omitted)")
    p.add_argument("--slots-csv",
                   help="also export the slot matrix as CSV (rows x 54)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("experiment",
                       help="design x countermeasure x seed sweep")
    p.add_argument("--design", action="append", default=None,
                   choices=sorted(DESIGNS) + ["all"],
                   help="repeatable; default all four designs")
    p.add_argument("--key", default="random")
    p.add_argument("--seeds", default="0:10",
                   help="comma list and/or lo:hi ranges (default 0:10)")
    p.add_argument("--countermeasure", action="append", default=[],
                   metavar="CM[,CM...]",
                   help="adds an experiment arm with these countermeasures")
    p.add_argument("--curve-file")
    _add_power_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("gates", help="gate-complexity table")
    p.set_defaults(func=cmd_gates)

    p = sub.add_parser("recover-key",
                       help="ECDSA private key from a revealed nonce")
    for name in ("s", "k", "e", "r"):
        p.add_argument("--" + name, required=True)
    p.add_argument("--order", required=True,
                   help="group order (decimal or 0x hex)")
    p.set_defaults(func=cmd_recover_key)

    p = sub.add_parser("dump-netlist", help="textual netlist dump")
    p.add_argument("--variant", choices=("combined", "classical"),
                   default="combined")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump_netlist)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write("kpsim: error: %s\n" % exc)
        return EXIT_DATA
    except AssertionError as exc:
        sys.stderr.write("kpsim: internal invariant violation: %s\n" % exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
