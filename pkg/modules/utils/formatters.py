import logging
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

logger = logging.getLogger(__name__)


def format_bytes(bytes_value):
    """Format bytes to human-readable format"""
    if not bytes_value:
        return "0 B"

    bytes_value = float(bytes_value)
    for unit in ['B', 'KB', 'MB', 'GB', 'TB']:
        if bytes_value < 1024.0:
            return f"{bytes_value:.2f} {unit}"
        bytes_value /= 1024.0
    return f"{bytes_value:.2f} PB"


def create_progress_bar(percentage, length=20):
    """Create a visual progress bar"""
    if percentage < 0:
        percentage = 0
    elif percentage > 100:
        percentage = 100

    filled_length = int((percentage / 100) * length)
    bar = "█" * filled_length + "░" * (length - filled_length)
    return bar


def format_delta(delta: Fraction) -> str:
    return f"{delta.numerator}/{delta.denominator}"


def format_terms(terms: Iterable) -> str:
    """Terms joined with ' | ', or '(none)'"""
    shown = [str(t) for t in terms]
    return " | ".join(shown) if shown else "(none)"


def format_check_matrix(rows: Sequence[Tuple[str, int, int]]) -> str:
    """Pass/fail matrix of the verification suite, one line per check"""
    if not rows:
        return "no checks were run"
    width = max(len(name) for name, _, _ in rows)
    lines = [f"{'check':<{width}}  {'passed':>6}  {'failed':>6}"]
    for name, passed, failed in rows:
        total = passed + failed
        percentage = 100 * passed / total if total else 0
        status = "ok" if failed == 0 else "FAIL"
        lines.append(
            f"{name:<{width}}  {passed:>6}  {failed:>6}  {create_progress_bar(percentage, 10)} {status}"
        )
    return "\n".join(lines)


def format_fold_table(summaries: Sequence[dict]) -> str:
    lines = ["fold  accuracy  nodes  depth"]
    for s in summaries:
        lines.append(f"{s['fold'] + 1:>4}  {s['accuracy']:>8.3f}  {s['nodes']:>5}  {s['depth']:>5}")
    return "\n".join(lines)
