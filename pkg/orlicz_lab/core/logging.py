import logging
import sys
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stream handler on the package logger.

    Args:
        level: Level name; defaults to the configured ``log_level``.
    """
    global _configured
    if level is None:
        from orlicz_lab.core.config import get_settings

        level = get_settings().log_level

    root = logging.getLogger("orlicz_lab")
    root.setLevel(level.upper())
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
