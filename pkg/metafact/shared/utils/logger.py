import logging
import logging.handlers
import sys
from typing import Optional

from ...config.settings import settings

_ROOT_LOGGER = "metafact"


def _formatter() -> logging.Formatter:
    if settings.is_production:
        return logging.Formatter(
            '{"timestamp": "%(asctime)s", "level": "%(levelname)s", "logger": "%(name)s", "message": "%(message)s"}'
        )
    return logging.Formatter(settings.LOG_FORMAT)


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Setup package logging. Console output goes to stderr; stdout carries JSON reports."""
    root = logging.getLogger(_ROOT_LOGGER)
    root.setLevel(getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.WARNING))

    # Clear existing handlers to avoid duplicates
    root.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(_formatter())
    root.addHandler(console_handler)

    log_file_path = settings.log_file_path
    if log_file_path:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file_path,
            maxBytes=settings.LOG_MAX_SIZE,
            backupCount=settings.LOG_BACKUP_COUNT,
        )
        file_handler.setFormatter(_formatter())
        root.addHandler(file_handler)

    root.propagate = False
    root.debug(f"Logging configured - level: {logging.getLevelName(root.level)}, file: {log_file_path}")
    return root


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger under the package namespace."""
    name = name or _ROOT_LOGGER
    if not name.startswith(_ROOT_LOGGER):
        name = f"{_ROOT_LOGGER}.{name}"
    return logging.getLogger(name)
