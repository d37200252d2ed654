import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from .logger import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_ORDER = 256
DEFAULT_PRECISION = 24


def max_order() -> int:
    """Hard cap on series truncation orders (FOLBOUND_MAX_ORDER)."""
    return int(os.getenv("FOLBOUND_MAX_ORDER", str(DEFAULT_MAX_ORDER)))


def initial_precision() -> int:
    """First truncation order tried for inexact series divisions (FOLBOUND_PRECISION)."""
    return int(os.getenv("FOLBOUND_PRECISION", str(DEFAULT_PRECISION)))


def load_env_file(env_path: Optional[Path] = None):
    """
    Load environment variables from the .env file in the project root.

    Args:
        env_path: Explicit path of the .env file. Defaults to <project root>/.env

    Returns:
        dict: Effective folbound settings after loading
    """
    if env_path is None:
        env_path = Path(__file__).parent.parent.parent / ".env"

    if not env_path.exists():
        logger.warning(f".env file not found at {env_path}. Using default environment variables.")
    else:
        logger.info(f"Loading environment variables from {env_path}")
        load_dotenv(dotenv_path=env_path)

    env_vars = {
        "LOG_LEVEL": os.getenv("LOG_LEVEL", "INFO"),
        "FOLBOUND_LOG_FILE": os.getenv("FOLBOUND_LOG_FILE", ""),
        "FOLBOUND_MAX_ORDER": max_order(),
        "FOLBOUND_PRECISION": initial_precision(),
        "FOLBOUND_WORKERS": int(os.getenv("FOLBOUND_WORKERS", "1")),
    }

    if env_vars["FOLBOUND_PRECISION"] > env_vars["FOLBOUND_MAX_ORDER"]:
        raise ValueError(
            f"FOLBOUND_PRECISION ({env_vars['FOLBOUND_PRECISION']}) exceeds "
            f"FOLBOUND_MAX_ORDER ({env_vars['FOLBOUND_MAX_ORDER']})"
        )

    logger.debug("Settings loaded:")
    for key, value in env_vars.items():
        logger.debug(f"  {key}: {value if value != '' else 'Not set'}")

    return env_vars
