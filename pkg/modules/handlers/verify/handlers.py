import json
import logging
from pathlib import Path

from modules.config import ORACLE_LIMIT
from modules.handlers.core.commands import EXIT_FAILED, EXIT_OK, command_handler
from modules.reasoning.errors import OracleLimitExceeded, UsageError
from modules.reasoning.verification import CHECKS, run_suite
from modules.utils.formatters import create_progress_bar, format_check_matrix

logger = logging.getLogger(__name__)


def _log_progress(done: int, total: int):
    step = max(total // 10, 1)
    if done % step == 0 or done == total:
        logger.info(f"Trials {create_progress_bar(100 * done / total)} {done}/{total}")


@command_handler
def handle_verify(args) -> int:
    if args.max_vars > ORACLE_LIMIT:
        raise OracleLimitExceeded(f"--max-vars {args.max_vars} exceeds the oracle limit {ORACLE_LIMIT}")
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = sorted(set(checks) - set(CHECKS))
        if unknown:
            raise UsageError(f"unknown checks {unknown}, expected some of {', '.join(CHECKS)}")

    result = run_suite(
        args.trials,
        max_vars=args.max_vars,
        seed=args.seed,
        inject_fault=args.inject_fault,
        checks=checks,
        progress=_log_progress,
    )
    print(format_check_matrix(result.matrix()))
    summary = result.to_dict()
    print(f"greedy/minimal size ratio: mean {summary['greedy_ratio']['mean']:.3f}, max {summary['greedy_ratio']['max']:.3f}")
    if args.json:
        Path(args.json).write_text(json.dumps(summary, indent=1) + "\n", encoding="utf-8")

    if not result.ok:
        logger.error("Verification found disagreements")
        return EXIT_FAILED
    return EXIT_OK
