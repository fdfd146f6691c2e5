"""Package logging: a rich console handler on the ``pnn`` logger and run log files."""

import logging
from pathlib import Path
from typing import Optional

from rich.logging import RichHandler

from pnn.utils import StrOrPathLike

DATE_FORMAT = "[%Y-%m-%d %X]"
DEFAULT_LEVEL = logging.INFO
FORMAT_FILE = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
FORMAT_RICH = "%(message)s"
PACKAGE_LOGGER_NAME = "pnn"


def get_package_logger() -> logging.Logger:
    """Return the ``pnn`` logger, adding its console handler on first use."""
    package_logger = logging.getLogger(PACKAGE_LOGGER_NAME)
    if not any(isinstance(h, RichHandler) for h in package_logger.handlers):
        handler = RichHandler(show_time=False, markup=True, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter(FORMAT_RICH, datefmt=DATE_FORMAT))
        package_logger.addHandler(handler)
        if package_logger.level == logging.NOTSET:
            package_logger.setLevel(DEFAULT_LEVEL)
    return package_logger


def get_logger(
    name: Optional[str] = None, level: Optional[int] = None
) -> logging.Logger:
    """Get a logger under the ``pnn`` package logger.

    ``level`` is set on the package logger, so it applies to every pnn logger
    whose own level is unset. Records still propagate to the root logger.
    """
    package_logger = get_package_logger()
    if level is not None:
        package_logger.setLevel(level)
    if name is None or name == PACKAGE_LOGGER_NAME:
        return package_logger
    return package_logger.getChild(name)


def add_logfile(logger: logging.Logger, fpath_log: StrOrPathLike) -> logging.Logger:
    """Also write the records of a logger to a file, once per file path."""
    fpath_log = Path(fpath_log)
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler) and (
            Path(handler.baseFilename) == fpath_log.resolve()
        ):
            return logger

    if not fpath_log.parent.exists():
        logger.warning(f"Creating log directory: {fpath_log.parent}")
        fpath_log.parent.mkdir(parents=True, exist_ok=True)

    file_handler = logging.FileHandler(fpath_log)
    file_handler.setFormatter(logging.Formatter(FORMAT_FILE, datefmt=DATE_FORMAT))
    logger.addHandler(file_handler)
    logger.info(f"Writing the log to {fpath_log}")
    return logger
