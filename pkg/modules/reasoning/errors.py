"""
Exceptions raised by the reasoning and pipeline layers.

Handlers catch ReasonKitError and turn it into an exit code; anything else is a bug
and reaches the last-resort handler in main.py.
"""
from typing import Optional


class ReasonKitError(Exception):
    """Base class for every error reported to the user"""


class InputError(ReasonKitError, ValueError):
    """An argument does not satisfy the documented precondition"""


class TreeFormatError(InputError):
    """Tree file could not be turned into a valid DecisionTree"""


class MalformedTreeError(TreeFormatError):
    """Syntax or structure problem (bad JSON, missing keys, cycles, shared children)"""


class ReadOnceViolation(TreeFormatError):
    """A variable repeats on a root-to-leaf path"""

    def __init__(self, variable: int, node: int):
        self.variable = variable
        self.node = node
        super().__init__(f"variable x{variable + 1} repeats on the path to node {node}")


class DanglingChildError(TreeFormatError):
    """An internal node points to a node id that does not exist"""

    def __init__(self, node: int, child: int):
        self.node = node
        self.child = child
        super().__init__(f"node {node} references missing child {child}")


class IngestionError(InputError):
    """CSV input problem; row is the 1-based line number in the file"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"line {row}")
        if column is not None:
            location.append(f"column '{column}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")


class UsageError(InputError):
    """Command-line misuse detected after argument parsing"""


class ContractViolation(ReasonKitError):
    """A positive instance was required but T(x) = 0"""


class OracleLimitExceeded(ReasonKitError):
    """Brute-force oracle refuses a tree with too many variables"""


class DownloadError(ReasonKitError):
    """Remote dataset could not be fetched"""
