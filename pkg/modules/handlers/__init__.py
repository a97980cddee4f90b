from . import core, explain, learn, verify

__all__ = [
    "core",
    "explain",
    "learn",
    "verify",
]
