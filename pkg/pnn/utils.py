"""Utility functions."""

from __future__ import annotations

import datetime
import json
import math
import os
from pathlib import Path
from typing import Iterable, TypeVar

import numpy as np
from pydantic import BaseModel, Field

StrOrPathLike = TypeVar("StrOrPathLike", str, os.PathLike)

# numerics
FLOAT_FORMAT = "%.12g"
LOG_FLOOR = 1e-12
TORUS_LOWER = -1.0
TORUS_UPPER = 1.0
TWO_PI = 2 * math.pi

# paths
DPATH_DATA = Path(__file__).parent / "data"
DPATH_EXAMPLES = DPATH_DATA / "examples"
FPATH_SAMPLE_CONFIG = DPATH_EXAMPLES / "sample_config.json"
DPATH_LAYOUTS = DPATH_DATA / "layouts"
FPATH_DEFAULT_LAYOUT = DPATH_LAYOUTS / "layout-default.json"

# descriptions for common fields in the Pydantic models
FIELD_DESCRIPTION_MAP = {
    "mode": "Learning mode: 'frequency' (Fourier basis) or 'moment' (power basis)",
    "n": "Dimension of the sample space",
    "dc": "Direct current of the network, i.e. the log of the partition function",
    "index": "Multi-index of the neuron, as a list of integers",
    "step": "Uniform time step between consecutive snapshots",
}


class ComplexPair(BaseModel):
    """JSON form of a complex number."""

    re: float = Field(description="Real part")
    im: float = Field(default=0.0, description="Imaginary part")

    @classmethod
    def from_complex(cls, value: complex) -> ComplexPair:
        """Build a pair from a (possibly real) number."""
        value = complex(value)
        return cls(re=value.real, im=value.imag)

    def to_complex(self) -> complex:
        """Return the number as a Python complex."""
        return complex(self.re, self.im)


def to_pairs(values: Iterable[complex]) -> list[ComplexPair]:
    """Convert an iterable of numbers to complex pairs."""
    return [ComplexPair.from_complex(value) for value in values]


def from_pairs(pairs: Iterable[ComplexPair]) -> np.ndarray:
    """Convert complex pairs to a complex array."""
    return np.array([pair.to_complex() for pair in pairs], dtype=complex)


def format_float(value: float) -> str:
    """Format a number with the fixed precision used in output files."""
    return FLOAT_FORMAT % value


def count_uniform_steps(t_start: float, t_end: float, step: float) -> int:
    """Return the number of points t_start + r * step that do not exceed t_end."""
    return math.floor((t_end - t_start) / step + 1e-9) + 1


def load_json(fpath: StrOrPathLike, **kwargs) -> dict:
    """Load a JSON file.

    Parameters
    ----------
    fpath : pnn.utils.StrOrPathLike
        Path to the JSON file
    **kwargs :
        Keyword arguments to pass to json.load

    Returns
    -------
    dict
        The JSON object.
    """
    with open(fpath, "r") as file:
        return json.load(file, **kwargs)


def save_json(obj: dict, fpath: StrOrPathLike, **kwargs):
    """Save a JSON object to a file.

    Parameters
    ----------
    obj : dict
        The JSON object
    fpath : pnn.utils.StrOrPathLike
        Path to the JSON file to write
    indent : int, optional
        Indentation level, by default 4
    **kwargs :
        Keyword arguments to pass to json.dump
    """
    if "indent" not in kwargs:
        kwargs["indent"] = 4
    fpath = Path(fpath)
    fpath.parent.mkdir(parents=True, exist_ok=True)
    with open(fpath, "w") as file:
        json.dump(obj, file, **kwargs)


def add_path_suffix(path: StrOrPathLike, suffix: str, sep="-") -> Path:
    """Add a suffix to a path, before the last file extension (if any)."""
    path = Path(path)
    return Path(path.parent, f"{path.stem}{sep}{suffix}{path.suffix}")


def add_path_timestamp(
    path: StrOrPathLike, timestamp_format="%Y%m%d_%H%M", sep="-"
) -> Path:
    """Add a timestamp to a path, before the last file extension (if any)."""
    timestamp = datetime.datetime.now().strftime(timestamp_format)
    return add_path_suffix(path=path, suffix=timestamp, sep=sep)
