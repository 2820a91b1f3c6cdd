import logging
import os

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
ENV_LEVEL = "ALCP1_LOG_LEVEL"

_configured = False


def setup_logging(level: str | None = None):
    """Configure the root 'alcp1' logger once. Later calls only adjust the level."""
    global _configured

    root = logging.getLogger("alcp1")
    level = (level or os.getenv(ENV_LEVEL, "INFO")).upper()
    root.setLevel(getattr(logging, level, logging.INFO))

    if not _configured:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True

    return root


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(f"alcp1.{name}")
