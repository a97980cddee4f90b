from .handlers import *  # noqa: F401,F403
