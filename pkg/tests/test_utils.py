"""Tests for the utils module."""

import math
from pathlib import Path

import numpy as np
import pytest

from pnn.utils import (
    ComplexPair,
    add_path_suffix,
    add_path_timestamp,
    count_uniform_steps,
    format_float,
    from_pairs,
    load_json,
    save_json,
    to_pairs,
)

from .conftest import datetime_fixture  # noqa F401


@pytest.mark.parametrize(
    "t_start,t_end,step,expected",
    [
        (0, 2 * math.pi, 0.2, 32),
        (0, 2 * math.pi, 0.001, 6284),
        (0, 1, 0.1, 11),
        (0, 1, 0.3, 4),
        (-1, 1, 2, 2),
    ],
)
def test_count_uniform_steps(t_start, t_end, step, expected):
    assert count_uniform_steps(t_start, t_end, step) == expected


@pytest.mark.parametrize(
    "value,expected",
    [(1 / 3, "0.333333333333"), (2.0, "2"), (1e-20, "1e-20"), (math.inf, "inf")],
)
def test_format_float(value, expected):
    assert format_float(value) == expected


@pytest.mark.parametrize("value", [1 + 2j, -0.5, 3j])
def test_complex_pair(value):
    pair = ComplexPair.from_complex(value)
    assert pair.re == complex(value).real
    assert pair.im == complex(value).imag
    assert pair.to_complex() == complex(value)


def test_pairs():
    values = np.array([1j, 2, -3 - 1j])
    pairs = to_pairs(values)
    assert all(isinstance(pair, ComplexPair) for pair in pairs)
    assert np.array_equal(from_pairs(pairs), values)


def test_save_json(tmp_path: Path):
    fpath = tmp_path / "subdir" / "file.json"
    save_json({"a": [1, 2]}, fpath)
    assert fpath.exists()
    assert load_json(fpath) == {"a": [1, 2]}
    assert "    " in fpath.read_text()


@pytest.mark.parametrize(
    "path,suffix,sep,expected",
    [
        ("samples.csv", "kmd", "-", "samples-kmd.csv"),
        ("logs/learn.log", "1", "_", "logs/learn_1.log"),
        ("rate", "x", "-", "rate-x"),
    ],
)
def test_add_path_suffix(path, suffix, sep, expected):
    assert add_path_suffix(path, suffix, sep=sep) == Path(expected)


def test_add_path_timestamp(datetime_fixture):  # noqa F811
    assert add_path_timestamp("learn.log") == Path("learn-20240404_1234.log")
