import logging
import os
import sys
from typing import Optional

CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"


def setup_logging(level=None, log_file: Optional[str] = None):
    """
    Set up logging with a console handler and an optional file handler.

    Reports go to stdout, so the console handler writes to stderr.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL) as a name or number.
              If None, uses LOG_LEVEL from environment or defaults to INFO
        log_file: Path of a log file. If None, uses FOLBOUND_LOG_FILE when set

    Returns:
        logging.Logger: The configured root logger
    """
    if level is None:
        level = os.getenv("LOG_LEVEL", "INFO")
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    # Clear existing handlers to avoid duplicates
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    console_handler.setLevel(level)
    root_logger.addHandler(console_handler)

    log_file = log_file or os.getenv("FOLBOUND_LOG_FILE")
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        file_handler.setLevel(level)
        root_logger.addHandler(file_handler)

    root_logger.debug(f"Logging initialized at level {logging.getLevelName(level)}")
    if log_file:
        root_logger.debug(f"Log file: {log_file}")

    return root_logger


def get_logger(name):
    """
    Get a logger with the specified name.

    Args:
        name: Logger name

    Returns:
        logging.Logger: Configured logger
    """
    return logging.getLogger(name)


def log_exception(logger, e, message="An error occurred"):
    """
    Log an exception, with the traceback at DEBUG level.

    Args:
        logger: Logger instance
        e: Exception object
        message: Custom message prefix

    Returns:
        str: The logged message
    """
    logger.error(f"{message}: {str(e)}")
    logger.debug("Exception traceback:", exc_info=True)
    return f"{message}: {str(e)}"
