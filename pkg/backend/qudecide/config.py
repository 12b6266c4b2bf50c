import os
import logging
import pathlib
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables
load_dotenv()

# Repository root (3 levels up from this file)
PROJECT_ROOT = pathlib.Path(__file__).parent.parent.parent.absolute()

# Numerical defaults
TOL_UNITARY = float(os.getenv("QUDECIDE_TOL_UNITARY", "1e-8"))
TOL_RANK = float(os.getenv("QUDECIDE_TOL_RANK", "1e-9"))
TOL_EQ = float(os.getenv("QUDECIDE_TOL_EQ", "1e-8"))
TOL_CENTER = float(os.getenv("QUDECIDE_TOL_CENTER", "1e-8"))
MAX_GROUP = int(os.getenv("QUDECIDE_MAX_GROUP", "10000"))

# Fixed numerical thresholds
TOL_AXIS = 1e-12
TOL_PHASE = 1e-9
TOL_SINGULAR = 1e-12
TOL_DEGENERATE = 1e-12
TOL_BOUNDARY = 1e-12

# Logging configuration
LOG_LEVEL = os.getenv("QUDECIDE_LOG_LEVEL", "INFO")
LOGGING_ENABLED = os.getenv("QUDECIDE_LOGGING_ENABLED", "false").lower() == "true"
LOG_DIR = os.path.join(PROJECT_ROOT, os.getenv("QUDECIDE_LOG_DIR", "logs"))
LOG_FILE = os.getenv("QUDECIDE_LOG_FILE", "qudecide.log")
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format=LOG_FORMAT
)

# Set up package logger
logger = logging.getLogger("qudecide")

if LOGGING_ENABLED:
    # Create logs directory if it doesn't exist
    log_path = pathlib.Path(LOG_DIR)
    log_path.mkdir(parents=True, exist_ok=True)

    file_handler = logging.FileHandler(os.path.join(LOG_DIR, LOG_FILE))
    file_handler.setLevel(getattr(logging, LOG_LEVEL.upper(), logging.INFO))
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(file_handler)
else:
    logger.addHandler(logging.NullHandler())


def get_thread_count(override: Optional[int] = None) -> int:
    """
    Resolve the worker thread cap.

    Args:
        override: Explicit thread count; wins over the environment when given

    Returns:
        int: A positive thread count

    Raises:
        ConfigError: If QUDECIDE_THREADS (or the override) is not a positive integer
    """
    if override is not None:
        if override < 1:
            raise ConfigError(f"thread count must be positive, got {override}")
        return override

    raw = os.getenv("QUDECIDE_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1

    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"QUDECIDE_THREADS must be a positive integer, got '{raw}'")
    if value < 1:
        raise ConfigError(f"QUDECIDE_THREADS must be a positive integer, got '{raw}'")
    return value
