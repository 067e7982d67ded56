"""
metafact command line: factorize, lowrank and verify subcommands.

Every invocation prints exactly one JSON document on stdout and returns
0 (success), 1 (a verify check failed), 2 (usage, validation or input error),
3 (numerical breakdown) or 4 (internal error).
"""

import argparse
import sys
from typing import List, Optional

from .cli.base_controller import BaseController
from .cli.controllers import CONTROLLERS, FACTORIZE_METHODS, LOWRANK_METHODS, VERIFY_CHECKS
from .config.settings import settings
from .periodic.models import GeneratorKind
from .randomized.models import CurMode
from .shared.utils.exceptions import UsageError
from .shared.utils.logger import setup_logging

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting, so usage errors are JSON-reported."""

    def error(self, message: str):
        raise UsageError(message)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"must be a 64-bit unsigned integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _common_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="PATH", help="matrix file (.mtx Matrix Market array/coordinate, or .csv)")
    source.add_argument("--synthetic", metavar="SPEC", help="generated matrix, e.g. rank_k:200x150:k=10:seed=7")
    common.add_argument("--pretty", action="store_true", help="indent the JSON report")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=None, help=f"stderr log level (default {settings.LOG_LEVEL})")
    return common


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog=settings.PROJECT_NAME, description=settings.DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    common = _common_parser()

    factorize = commands.add_parser("factorize", parents=[common], help="exact constructions via the meta-factorization")
    factorize.add_argument("--method", choices=FACTORIZE_METHODS, required=True)
    factorize.add_argument("--rank", type=_positive_int, help="target rank k (not used by pinv-meta)")
    factorize.add_argument("--out", metavar="DIR", help="write factor matrices as Matrix Market files")
    factorize.add_argument("--json", action="store_true", help="JSON report on stdout (always on)")

    lowrank = commands.add_parser("lowrank", parents=[common], help="randomized and sampling low-rank approximations")
    lowrank.add_argument("--method", choices=LOWRANK_METHODS, required=True)
    lowrank.add_argument("--rank", type=_positive_int, help="target rank k; for wedderburn the maximum number of steps")
    lowrank.add_argument("--oversample", type=_non_negative_int, help="row sketch width minus k (default k)")
    lowrank.add_argument("--seed", type=_seed, help=f"master seed (default {settings.SEED})")
    lowrank.add_argument("--rows", metavar="I", help="comma-separated row indices for cur")
    lowrank.add_argument("--cols", metavar="J", help="comma-separated column indices for cur")
    lowrank.add_argument("--mode", choices=[mode.value for mode in CurMode], default=CurMode.ORTHOGONAL.value)
    lowrank.add_argument("--trials", type=_positive_int, default=1, help="independent trials with split seeds")
    lowrank.add_argument("--csv", metavar="PATH", help="also write per-trial rows as CSV")
    lowrank.add_argument("--pivot-tol", type=_positive_float, help="wedderburn pivot threshold")

    verify = commands.add_parser("verify", parents=[common], help="run invariant checks against a matrix")
    verify.add_argument("--check", choices=VERIFY_CHECKS, action="append", required=True)
    verify.add_argument("--rank", type=_positive_int, help="rank used by the checks (default: numerical rank)")
    verify.add_argument("--period", type=_positive_int, default=2, help="generator period N")
    verify.add_argument("--generator", choices=[kind.value for kind in GeneratorKind], default=GeneratorKind.SHIFT.value)
    verify.add_argument("--pmax", type=_positive_int, default=3, help="highest projector power checked")
    verify.add_argument("--factors", metavar="DIR", help="factor directory for the reconstruction check")
    verify.add_argument("--seed", type=_seed, help="seed for the oblique anchors")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        BaseController(argv=argv).fail(e.kind, e.message)
        return e.exit_code
    setup_logging(args.log_level)
    controller = CONTROLLERS[args.command](argv=argv, pretty=args.pretty)
    return controller.execute(args)


if __name__ == "__main__":
    sys.exit(main())
