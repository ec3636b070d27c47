'''
``ent-crit`` command line tool.

    ent-crit [--seed N] [--tol-detect T] [--no-meta] [-v] check --state FILE --criteria ppt,ccn,lur
    ent-crit scan --family noisy_singlet --criterion ccn [--bracket LO HI] [--tol T]
    ent-crit demo [--json]

JSON goes to stdout, logs to stderr. Exit codes: 0 success, 1 criterion
error or failed demo row, 2 input error.
'''
import argparse
import dataclasses as dc
import logging
import sys
import typing
from collections.abc import Sequence

from ent_crit import __version__
from ent_crit.config import DEFAULT_TOLERANCES, Tolerances
from ent_crit.errors import BracketError, EntCritError, InvalidStateError, StateFileError, exit_code_for
from ent_crit.types import CHECK_CRITERIA, FAMILY_NAMES, SCAN_CRITERIA

from .check import cmd_check
from .demo import cmd_demo, format_table
from .scan import cmd_scan
from .schema import ErrorDocument


logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ent-crit',
        description='Bipartite entanglement criteria: PPT, CCN, LUR and nonlinear witnesses.',
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--seed', type=int, default=0, help='seed for sampled checks (default: 0)')
    parser.add_argument('--tol-detect', type=float, default=None, help='detection margin (default: 1e-9)')
    parser.add_argument('--no-meta', action='store_true', help='omit the meta block from JSON output')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG')

    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', help='run criteria on a state file')
    check.add_argument('--state', required=True, metavar='FILE', help='JSON state file')
    check.add_argument(
        '--criteria',
        default='ppt,ccn,lur',
        metavar='LIST',
        help=f"comma separated, from {', '.join(CHECK_CRITERIA)} or 'all' (default: ppt,ccn,lur)",
    )

    scan = commands.add_parser('scan', help='bisect the detection threshold of a state family')
    scan.add_argument('--family', required=True, metavar='NAME', help=f"one of {', '.join(FAMILY_NAMES)}")
    scan.add_argument('--criterion', required=True, metavar='NAME', help=f"one of {', '.join(SCAN_CRITERIA)}")
    scan.add_argument('--bracket', nargs=2, type=float, metavar=('LO', 'HI'), default=None)
    scan.add_argument('--tol', type=float, default=1e-4, help='final bracket width (default: 1e-4)')
    scan.add_argument('--workers', type=int, default=1, help='threads for the monotonicity samples')

    demo = commands.add_parser('demo', help='reproduce the reference thresholds and properties')
    demo.add_argument('--json', action='store_true', help='print a JSON document instead of a table')
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )


def _error_details(exc: EntCritError) -> dict[str, typing.Any]:
    match exc:
        case InvalidStateError(report=report):
            return dc.asdict(report)
        case StateFileError(path=path, detail=detail):
            return {'path': path, 'detail': detail}
        case BracketError():
            return {
                'lo': exc.lo,
                'hi': exc.hi,
                'detected_lo': exc.detected_lo,
                'detected_hi': exc.detected_hi,
            }
        case _:
            return {}


def _tolerances(args: argparse.Namespace) -> Tolerances:
    if args.tol_detect is None:
        return DEFAULT_TOLERANCES
    return DEFAULT_TOLERANCES.with_options(detect=args.tol_detect)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    meta = not args.no_meta

    try:
        tol = _tolerances(args)
        match args.command:
            case 'check':
                doc = cmd_check(args.state, args.criteria, tol=tol, seed=args.seed, meta=meta)
                print(doc.dump())
            case 'scan':
                doc = cmd_scan(
                    args.family,
                    args.criterion,
                    tuple(args.bracket) if args.bracket else None,
                    args.tol,
                    tol=tol,
                    seed=args.seed,
                    meta=meta,
                    workers=args.workers,
                )
                print(doc.dump())
            case 'demo':
                doc = cmd_demo(tol=tol, seed=args.seed, meta=meta)
                print(doc.dump() if args.json else format_table(doc))
                return 0 if doc.passed else 1
    except EntCritError as e:
        logger.error("%s", e)
        print(ErrorDocument(error=type(e).__name__, message=str(e), details=_error_details(e)).dump())
        return exit_code_for(e)
    return 0
