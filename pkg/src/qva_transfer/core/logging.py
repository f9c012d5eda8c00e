"""
Logging configuration for qva-transfer.

Stdout is reserved for machine-readable JSON, so every handler installed here
writes to stderr or to a file:
- Console handler on stderr at the configured level
- Optional file handler (relative paths resolve against the working directory)
- Existing root handlers are replaced so repeated setup does not duplicate output
"""
import logging
import os
import sys
from typing import List

from ..config.models import LoggingConfig


def setup_logging(config: LoggingConfig) -> logging.Logger:
    """Configure the root logger from a LoggingConfig.

    Args:
        config: Logging configuration containing the level, format string
                and optional log file path

    Returns:
        The "qva" logger
    """
    level = getattr(logging, config.level.upper(), logging.INFO)

    log_file = config.file
    if log_file and not os.path.isabs(log_file):
        log_file = os.path.join(os.getcwd(), log_file)

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    formatter = logging.Formatter(config.format)
    for handler in handlers:
        handler.setLevel(level)
        handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)
    for handler in handlers:
        root_logger.addHandler(handler)

    return logging.getLogger("qva")
