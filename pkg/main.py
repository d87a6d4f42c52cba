"""
Main Entry Point for the microcech toolkit.

Exact computations on microdifferential operators, Čech cohomology of
finite covers, 2-group cocycles and the descent data of twisted
microdifferential algebroids:
1. Parses the subcommand and its documents
2. Dispatches to the owning module
3. Prints a JSON answer on stdout and exits with the verdict code

Exit codes: 0 success/true, 1 verified false, 2 usage or format error,
3 indeterminate (window or search budget too small).

Usage:
  microcech op mul p.json q.json
  microcech cohomology s2.json --coeff Z --deg 2
  microcech classify bundle_s1_lambda.json --model s1_e0.json
"""

import argparse
import logging
import sys
from logging.handlers import RotatingFileHandler
from typing import List, Optional

import config
from data_models import CommandSpec, ExitCode, Subcommand
from services.codec import dumps
from services.command_service import OP_VERBS, run

logger = logging.getLogger(__name__)

_handlers: List[logging.Handler] = []


def configure_logging(verbose: bool, settings: config.Settings) -> None:
    """stderr handler, plus a rotating file when MICROCECH_LOG_FILE is set. stdout carries JSON only."""
    root = logging.getLogger()
    for handler in _handlers:
        root.removeHandler(handler)
    _handlers.clear()

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    _handlers.append(console_handler)

    if settings.log_file:
        file_handler = RotatingFileHandler(settings.log_file, maxBytes=1024 * 1024, backupCount=3)
        file_handler.setFormatter(formatter)
        _handlers.append(file_handler)

    for handler in _handlers:
        root.addHandler(handler)
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.WARNING)
    root.setLevel(level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='microcech',
        description='Exact microlocal and Čech computations on finite covers',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Rationals are written as strings "p/q" in every JSON document.
Example usage:
  microcech op mul p.json q.json
  microcech verify bundle.json --window 6
  microcech selftest --quick
        """
    )
    # Global options
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')
    parser.add_argument('--threads', type=int, default=None, help='Worker threads (default: MICROCECH_THREADS)')
    parser.add_argument('--seed', type=int, default=0, help='Seed for every random sampler (default: 0)')
    parser.add_argument('--budget', type=int, default=None, help='Node budget for enumeration searches')

    sub = parser.add_subparsers(dest='subcommand', required=True)

    op = sub.add_parser('op', help='Operator algebra on operator JSON files')
    op.add_argument('verb', choices=OP_VERBS, help='Operation')
    op.add_argument('inputs', nargs='*', help='Operator files')
    op.add_argument('--window', type=int, default=None, help='Window for hom/shift (default: 5)')
    op.add_argument('--order', type=str, default=None, help='Degree for the symbol verb')
    op.add_argument('--lam', type=str, default=None, help='λ for hom/shift')
    op.add_argument('--mu', type=str, default=None, help='μ for hom')
    op.add_argument('--nvars', type=int, default=None, help='Chart dimension for hom/shift (default: 2)')

    coh = sub.add_parser('cohomology', help='H^k of a nerve or of a bundle total space')
    coh.add_argument('inputs', nargs=1, help='Nerve or bundle-model file')
    coh.add_argument('--coeff', type=str, default='Z', help='Z, Z/m, Q, Q/Z or RCx (default: Z)')
    coh.add_argument('--deg', type=int, required=True, help='Degree k')

    h1 = sub.add_parser('h1', help='H¹ classes with crossed-module coefficients')
    h1.add_argument('inputs', nargs=2, help='Nerve file and crossed-module or group file')
    h1.add_argument('--shift', type=int, default=None, help='For a group G: 0 for G[0], 1 for G[1]')
    h1.add_argument('--cocycle', type=str, default=None, help='Cocycle file to verify and place in a class')
    h1.add_argument('--compare', action='store_true', help='Compare with abelian Čech cohomology')

    verify = sub.add_parser('verify', help='Verify descent data and its companions')
    verify.add_argument('inputs', nargs=1, help='Descent bundle file')
    verify.add_argument('--window', type=int, default=None, help='Comparison window')

    twist = sub.add_parser('twist', help='Twist by a Q/Z 1-cocycle and an RCx 2-cocycle')
    twist.add_argument('inputs', nargs=1, help='Nerve or descent bundle file')
    twist.add_argument('--lambda', dest='lam', type=str, default=None, help='Q/Z 1-cochain file')
    twist.add_argument('--scalar', type=str, default=None, help='RCx 2-cochain file')
    twist.add_argument('--window', type=int, default=None, help='Window of the chart algebras')

    classify = sub.add_parser('classify', help='Class of descent, twist or Pic data')
    classify.add_argument('inputs', nargs=1, help='Descent, twist or pic file')
    classify.add_argument('--model', type=str, required=True, help='Bundle-model file')
    classify.add_argument('--against', type=str, default=None, help='Second descent or twist file to compare')

    sequence = sub.add_parser('sequence', help='Five-term sequence of a circle bundle')
    sequence.add_argument('inputs', nargs=1, help='Bundle-model file')
    sequence.add_argument('--coeff', type=str, default='Z/2', help='Z/m, Q, Q/Z or RCx (default: Z/2)')

    selftest = sub.add_parser('selftest', help='Run the acceptance suite')
    selftest.add_argument('--quick', action='store_true', help='Reduced sample counts')
    return parser


def to_command_spec(args: argparse.Namespace) -> CommandSpec:
    subcommand = Subcommand(args.subcommand)
    inputs = tuple(getattr(args, 'inputs', ()) or ())
    if subcommand is Subcommand.OP:
        inputs = (args.verb,) + inputs
    options = {
        name: getattr(args, name)
        for name in ('order', 'lam', 'mu', 'nvars', 'shift', 'cocycle', 'compare', 'scalar', 'model', 'against', 'quick')
        if getattr(args, name, None) is not None
    }
    if subcommand is Subcommand.TWIST:
        options['lambda'] = options.pop('lam', None)
    return CommandSpec(
        subcommand=subcommand,
        inputs=inputs,
        options=options,
        window=getattr(args, 'window', None),
        coeff=getattr(args, 'coeff', None),
        deg=getattr(args, 'deg', None),
        budget=args.budget,
        seed=args.seed,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point. Returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitCode.USAGE if exc.code else ExitCode.SUCCESS

    settings = config.configure(threads=args.threads, budget=args.budget)
    configure_logging(args.verbose, settings)

    spec = to_command_spec(args)
    logger.debug(f"running {spec.subcommand.value} on {list(spec.inputs)}")
    code, payload = run(spec)
    print(dumps(payload))
    return int(code)


if __name__ == '__main__':
    sys.exit(main())
