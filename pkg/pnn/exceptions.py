"""Exceptions and exit codes."""

import numpy as np
from pydantic import ValidationError

EXIT_CODE_UNKNOWN = 1


class PnnError(Exception):
    """Base class for errors raised by the library."""

    exit_code = EXIT_CODE_UNKNOWN


class ConfigError(PnnError, ValueError):
    """Invalid configuration or parameter combination."""

    exit_code = 2


class DataError(PnnError, ValueError):
    """Invalid, malformed or inconsistent input data."""

    exit_code = 3


class NumericError(PnnError, ArithmeticError):
    """Numerical failure (rank loss, overflow, non-real energies, etc.)."""

    exit_code = 4


def get_exit_code(exception: BaseException) -> int:
    """Map an exception to a process exit code."""
    if isinstance(exception, PnnError):
        return exception.exit_code
    if isinstance(exception, ValidationError):
        return ConfigError.exit_code
    if isinstance(exception, OSError):
        return DataError.exit_code
    if isinstance(exception, (np.linalg.LinAlgError, ArithmeticError)):
        return NumericError.exit_code
    return EXIT_CODE_UNKNOWN
