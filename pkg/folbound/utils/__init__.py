from .logger import setup_logging, get_logger, log_exception
from .env_loader import load_env_file, max_order, initial_precision

__all__ = [
    "setup_logging",
    "get_logger",
    "log_exception",
    "load_env_file",
    "max_order",
    "initial_precision",
]
