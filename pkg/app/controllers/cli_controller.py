"""
Command-Line Controller
app/controllers/cli_controller.py

Parses the command line, builds the run configuration and dispatches to the
analysis pipelines. Exit codes: 0 success, 1 analysis failure, 2 usage error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from app.config import get_config
from app.exceptions import AnalysisError, UsageError
from app.services.analysis_service import AnalysisService
from app.utils import render_json, render_text

logger = logging.getLogger(__name__)

COMMANDS = ('analyze', 'degrees', 'signature', 'charpoly', 'period', 'invariants', 'rotor', 'selftest')
NEEDS_PARAMS = {'analyze', 'degrees', 'signature', 'charpoly', 'period', 'invariants'}

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog='birdyn', description='Exact analysis of 3-step linear fractional recurrences')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--params', help='parameter file or bundled fixture name')
    parser.add_argument('--ledger', help='planar ledger file or bundled fixture name (rotor)')
    parser.add_argument('--nmax', type=int, help='number of symbolic iterates')
    parser.add_argument('--pmax', type=int, help='largest period tested')
    parser.add_argument('--precision', type=int, help='bits for reported floats')
    parser.add_argument('--seed', type=int, help='seed of the randomized certificates')
    parser.add_argument('--degree', type=int, default=4, help='degree of invariant polynomials')
    parser.add_argument('--quick', action='store_true', help='selftest without the period-12 certificates')
    parser.add_argument('--env', help='configuration name (development, production, testing)')
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument('--json', dest='output', action='store_const', const='json')
    fmt.add_argument('--text', dest='output', action='store_const', const='text')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
    parser.set_defaults(output='text')
    return parser


def run_config(args: argparse.Namespace):
    """Configuration class with the command-line overrides applied"""
    base = get_config(args.env)
    overrides = {}
    if args.nmax:
        overrides['N_MAX_DEGREES'] = args.nmax
    if args.pmax:
        overrides['P_MAX'] = args.pmax
    if args.precision:
        overrides['PRECISION'] = args.precision
    if args.seed is not None:
        overrides['SEED'] = args.seed
    return type('RunConfig', (base,), overrides) if overrides else base


def dispatch(service: AnalysisService, args: argparse.Namespace):
    command = args.command
    params = None
    if command in NEEDS_PARAMS or (command == 'rotor' and not args.ledger):
        if not args.params:
            raise UsageError(f"{command} needs --params")
        params = service.repository.load_parameters(args.params)

    if command == 'analyze':
        return service.analyze(params)
    if command == 'degrees':
        return service.degrees(params, args.nmax)
    if command == 'signature':
        return service.signature(params)
    if command == 'charpoly':
        return service.charpoly(params)
    if command == 'period':
        return service.period(params, args.pmax)
    if command == 'invariants':
        return service.invariants(params, args.degree)
    if command == 'rotor':
        return service.rotor(params, args.ledger, args.nmax)
    return service.selftest(args.quick)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one command

    Args:
        argv: arguments without the program name (sys.argv[1:] by default)

    Returns:
        process exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    config = run_config(args)
    logging.basicConfig(level=(args.log_level or config.LOG_LEVEL).upper(),
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        service = AnalysisService(config)
        report = dispatch(service, args)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except AnalysisError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILURE

    data = report.to_dict()
    print(render_json(data) if args.output == 'json' else render_text(data))
    return EXIT_OK if report.ok else EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
