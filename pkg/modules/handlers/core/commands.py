import argparse
import logging
from functools import wraps

from modules.config import DEFAULT_FOLDS, DEFAULT_SEED, ENUMERATION_CAP, JOBS, SAMPLE_LIMIT
from modules.reasoning.errors import OracleLimitExceeded, ReasonKitError, UsageError
from modules.utils.presets import DELTA_PRESETS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3


def exit_code_for(error: ReasonKitError) -> int:
    if isinstance(error, (UsageError, OracleLimitExceeded)):
        return EXIT_USAGE
    return EXIT_INPUT


def command_handler(func):
    """Run a command handler and turn reported errors into exit codes"""

    @wraps(func)
    def wrapped(args, *rest, **kwargs):
        try:
            return func(args, *rest, **kwargs)
        except ReasonKitError as e:
            logger.error(f"{args.command} failed: {e}")
            return exit_code_for(e)
        except OSError as e:
            logger.error(f"{args.command} failed: {e}")
            return EXIT_INPUT

    return wrapped


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{value}'") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def _add_explain_options(parser: argparse.ArgumentParser, default_kinds: str):
    parser.add_argument("--kinds", default=default_kinds,
                        help="comma-separated kinds, a preset name, or 'all'")
    parser.add_argument("--delta", action="append", default=None, metavar="P/Q",
                        help="δ for probable reasons, exact rational p/q (repeatable)")
    parser.add_argument("--delta-preset", choices=sorted(DELTA_PRESETS), default=None)
    parser.add_argument("--cap", type=int, default=ENUMERATION_CAP,
                        help="enumeration cap (default %(default)s); all-minimal keeps the lexicographically first "
                             "reasons, all-sufficient keeps the first ones its deterministic search "
                             "finds, then sorts them")
    parser.add_argument("--order", choices=("path", "index"), default="path",
                        help="literal removal order for greedy reasons")
    parser.add_argument("--sample", type=_positive_int, default=SAMPLE_LIMIT,
                        help="instances sampled per dataset or fold (default %(default)s)")
    parser.add_argument("--jobs", type=_positive_int, default=JOBS)


def create_parser() -> argparse.ArgumentParser:
    # handlers import command_handler from this module
    from modules.handlers.explain import handle_explain
    from modules.handlers.learn import handle_learn
    from modules.handlers.verify import handle_verify

    parser = argparse.ArgumentParser(
        prog="reasonkit",
        description="Abductive and contrastive explanations for Boolean decision trees",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    learn = subparsers.add_parser("learn", help="cross-validate a Gini tree learner on a CSV dataset")
    learn.add_argument("--data", required=True, help="CSV file or http(s) URL")
    learn.add_argument("--label", required=True, help="label column")
    learn.add_argument("--target-class", default=None, help="class mapped to 1 (one versus all)")
    learn.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    learn.add_argument("--seed", type=int, default=DEFAULT_SEED)
    learn.add_argument("--out-dir", required=True)
    learn.add_argument("--explain", action="store_true",
                       help="batch-explain sampled test instances of every fold")
    _add_explain_options(learn, "direct,sufficient,minimal")
    learn.set_defaults(handler=handle_learn)

    explain = subparsers.add_parser("explain", help="explain instances of a tree")
    explain.add_argument("--tree", required=True)
    source = explain.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", help="bit vector such as 1011 or 1,0,1,1")
    source.add_argument("--instances", help="file with one bit vector per line")
    source.add_argument("--data", help="CSV rows, binarized with the tree's feature predicates")
    explain.add_argument("--label", default=None, help="label column of --data, for accuracy")
    explain.add_argument("--target-class", default=None)
    explain.add_argument("--seed", type=int, default=DEFAULT_SEED)
    explain.add_argument("--out", default=None, help="JSON-lines output (default stdout)")
    explain.add_argument("--stats", default=None, help="write batch statistics as JSON")
    explain.add_argument("--importance-dir", default=None, help="one importance CSV per instance")
    _add_explain_options(explain, "direct,sufficient,minimal")
    explain.set_defaults(handler=handle_explain)

    verify = subparsers.add_parser("verify", help="run the randomized oracle agreement suite")
    verify.add_argument("--trials", type=_positive_int, default=100)
    verify.add_argument("--max-vars", type=_positive_int, default=12)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--checks", default=None, help="comma-separated subset of checks")
    verify.add_argument("--inject-fault", action="store_true",
                        help="flip one leaf of the tree seen by the oracles")
    verify.add_argument("--json", default=None, help="write the result matrix as JSON")
    verify.set_defaults(handler=handle_verify)

    return parser
