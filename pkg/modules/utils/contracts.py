from functools import wraps
from typing import Iterable

from modules.reasoning.errors import ContractViolation
from modules.reasoning.literals import as_instance
from modules.reasoning.tree import evaluate
import logging

logger = logging.getLogger(__name__)

NEGATE_HINT = "explain the negated tree for instances classified 0"


def check_prediction(expected_labels: Iterable[int]):
    """Decorator factory enforcing that tree(x) belongs to expected_labels.

    The wrapped function must take (tree, x, ...); x is normalised to an Instance
    of the tree's length before the call.
    """
    allowed = frozenset(expected_labels)

    def decorator(func):
        @wraps(func)
        def wrapped(tree, x, *args, **kwargs):
            x = as_instance(x, tree.n)
            label = evaluate(tree, x)
            if label not in allowed:
                logger.debug("%s refused instance with T(x)=%s", func.__name__, label)
                raise ContractViolation(
                    f"{func.__name__} needs T(x) in {sorted(allowed)}, got {label}; {NEGATE_HINT}"
                )
            return func(tree, x, *args, **kwargs)

        return wrapped

    return decorator


check_positive = check_prediction({1})
