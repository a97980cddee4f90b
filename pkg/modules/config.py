import os
from dotenv import load_dotenv
import logging
from fractions import Fraction

# Load environment variables
load_dotenv()

# Set up logging for config
logger = logging.getLogger(__name__)


def _int_setting(name: str, default: int, minimum: int = 0) -> int:
    """Read an integer variable; malformed or too small values fall back to the default"""
    raw = os.getenv(name, "")
    if not raw.strip():
        return default
    try:
        value = int(raw.strip())
    except ValueError as e:
        logger.error(f"Error parsing {name}: {e}")
        return default
    if value < minimum:
        logger.error(f"{name}={value} is below {minimum}, using {default}")
        return default
    return value


def _delta_list(raw: str) -> list:
    deltas = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        numerator, _, denominator = part.partition("/")
        deltas.append(Fraction(int(numerator), int(denominator or "1")))
    return deltas


LOG_LEVEL = os.getenv("LOG_LEVEL", "ERROR").upper()

# Reasoning defaults
DEFAULT_SEED = _int_setting("REASONKIT_SEED", 0)
ENUMERATION_CAP = _int_setting("REASONKIT_CAP", 10000, minimum=1)
ORACLE_LIMIT = _int_setting("REASONKIT_ORACLE_LIMIT", 16, minimum=1)
SAMPLE_LIMIT = _int_setting("REASONKIT_SAMPLE_LIMIT", 100, minimum=1)
DEFAULT_FOLDS = _int_setting("REASONKIT_FOLDS", 10, minimum=2)
JOBS = _int_setting("REASONKIT_JOBS", 1, minimum=1)

deltas_str = os.getenv("REASONKIT_DELTAS", "1,95/100,9/10,3/4")
logger.debug(f"Raw REASONKIT_DELTAS from env: '{deltas_str}'")

try:
    DEFAULT_DELTAS = _delta_list(deltas_str)
    if any(not 0 < d <= 1 for d in DEFAULT_DELTAS):
        raise ValueError("every δ must lie in (0, 1]")
except (ValueError, ZeroDivisionError) as e:
    logger.error(f"Error parsing REASONKIT_DELTAS: {e}")
    DEFAULT_DELTAS = [Fraction(1), Fraction(95, 100), Fraction(9, 10), Fraction(3, 4)]

if not DEFAULT_DELTAS:
    logger.warning("REASONKIT_DELTAS is empty, probable reasons default to δ=1")
    DEFAULT_DELTAS = [Fraction(1)]

# Dataset download
try:
    DATA_TIMEOUT = float(os.getenv("DATA_TIMEOUT", "30"))
except ValueError as e:
    logger.error(f"Error parsing DATA_TIMEOUT: {e}")
    DATA_TIMEOUT = 30.0
DATA_VERIFY_SSL = os.getenv("DATA_VERIFY_SSL", "true").lower() == "true"
DATA_RETRIES = _int_setting("DATA_RETRIES", 3, minimum=1)
