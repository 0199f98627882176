"""Command line entry point: ``cogchan run|sweep|oracle``."""
from __future__ import annotations

import argparse
import logging
import sys

from .experiment import ConfigError, STRATEGY_CHOICES, oracle_command, parse_config, run_command

log = logging.getLogger("cogchan")


def _u64(text):
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _counts(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML experiment config")
    common.add_argument("--channels", type=int, help="number of sampled channels")
    common.add_argument("--nodes", type=int, help="number of CR nodes")
    common.add_argument("--trials", type=int, help="trials per strategy")
    common.add_argument("--slots", type=int, help="counted slots per trial")
    common.add_argument("--strategy", choices=STRATEGY_CHOICES)
    common.add_argument("--sensing", metavar="{perfect,window:W}")
    common.add_argument("--seed", type=_u64, metavar="U64")
    common.add_argument("--out", metavar="PATH", help="CSV output path (stdout if omitted)")
    common.add_argument("--workers", type=int, help="processes for trial execution")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cogchan", description="Occupancy-based channel selection simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run one experiment and write per-node CSV")
    sweep = sub.add_parser("sweep", parents=[common], help="repeat the experiment over channel counts")
    sweep.add_argument("--sweep", type=_counts, metavar="N1,N2,...", help="channel counts")
    oracle = sub.add_parser("oracle", parents=[common], help="compare simulation with closed-form expectations")
    oracle.add_argument("--sweep", type=_counts, metavar="N1,N2,...", help="channel counts")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s", stream=sys.stderr)
    overrides = {
        "channels": args.channels,
        "nodes": args.nodes,
        "trials": args.trials,
        "slots": args.slots,
        "strategy": args.strategy,
        "sensing": args.sensing,
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
        "sweep": getattr(args, "sweep", None),
    }
    try:
        spec = parse_config(args.config, overrides)
        log.info("resolved spec:\n%s", spec.to_yaml().rstrip())
        if args.command == "oracle":
            sys.stdout.write(oracle_command(spec, sweep=spec.sweep is not None))
        else:
            text = run_command(spec, sweep=args.command == "sweep")
            if spec.out is None:
                sys.stdout.write(text)
            else:
                log.info("wrote %s", spec.out)
    except (ConfigError, OSError) as e:
        print(f"cogchan: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
