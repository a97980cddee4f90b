import os
import logging
import sys
from dotenv import load_dotenv

# Setup logging first, before any other imports
def setup_logging():
    """Setup logging configuration from environment variables"""
    load_dotenv()

    log_level = os.getenv("LOG_LEVEL", "ERROR").upper()

    log_levels = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "WARN": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL
    }

    # Set the log level, default to ERROR if invalid level provided
    level = log_levels.get(log_level, logging.ERROR)

    # stdout carries reports and tables, so logs go to stderr
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=level,
        force=True,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )

    # Dataset downloads log every request at INFO
    if level <= logging.INFO:
        logging.getLogger('httpx').setLevel(logging.INFO)
        logging.getLogger('httpcore').setLevel(logging.INFO)
    else:
        logging.getLogger('httpx').setLevel(logging.WARNING)
        logging.getLogger('httpcore').setLevel(logging.WARNING)

    return level

# Setup logging immediately
current_log_level = setup_logging()
logger = logging.getLogger(__name__)

from modules.handlers.core.commands import EXIT_FAILED, create_parser


def run(argv=None) -> int:
    """Parse arguments and dispatch to the command handler; returns the exit code"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0

    logger.debug(f"Running {args.command} with {vars(args)}")
    try:
        return args.handler(args)
    except Exception as e:
        logger.error(f"Critical error in {args.command}: {e}", exc_info=True)
        return EXIT_FAILED


if __name__ == '__main__':
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.error("Interrupted")
        sys.exit(130)
