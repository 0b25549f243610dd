"""Logger configuration for Hurwitz Correlations"""
import logging
import os
import sys
from ..config import get_config_dict

config = get_config_dict()
LOG_FILE = os.path.join("logs", config["LOG_FILE"]) if config["LOG_FILE"] else ""
LOG_LEVEL = config["LOG_LEVEL"]
ENABLE_LOGGING = config["ENABLE_LOGGING"]
LOGGER_NAME = "hurwitz_correlations"


def setup_logger() -> logging.Logger:
    """Configure logging for the application"""
    logger = logging.getLogger(LOGGER_NAME)
    if not ENABLE_LOGGING:
        logger.addHandler(logging.NullHandler())
        return logger

    logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    if logger.handlers:
        return logger

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    # stdout carries CSV/JSON output, so the console handler writes to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if LOG_FILE:
        os.makedirs(os.path.dirname(LOG_FILE), exist_ok=True)
        file_handler = logging.FileHandler(LOG_FILE)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def set_level(level: str) -> None:
    """Change the application log level at runtime."""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


# Initialize logger
logger = setup_logger()
