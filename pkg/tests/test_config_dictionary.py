"""Tests for the dictionary configuration."""

import pytest
from pydantic import ValidationError

from pnn.config.dictionary import DictionaryConfig
from pnn.exceptions import ConfigError
from pnn.indexes import Mode


@pytest.mark.parametrize(
    "params,component_bounds,largest_component",
    [
        ({"MAX_ORDER": 3}, [], 3),
        ({"COMPONENT_BOUND": 2}, [2], 2),
        ({"COMPONENT_BOUND": [1, 5]}, [1, 5], 5),
        ({"MAX_ORDER": 3, "COMPONENT_BOUND": [1, 5]}, [1, 5], 3),
    ],
)
def test_bounds(params, component_bounds, largest_component):
    config = DictionaryConfig(**params)
    assert config.component_bounds == component_bounds
    assert config.largest_component == largest_component


@pytest.mark.parametrize(
    "params",
    [
        {},
        {"MAX_ORDER": -1},
        {"COMPONENT_BOUND": []},
        {"COMPONENT_BOUND": [1, -1]},
        {"MAX_ORDER": 2, "EXTRA": 1},
    ],
)
def test_invalid(params):
    with pytest.raises(ValidationError):
        DictionaryConfig(**params)


@pytest.mark.parametrize(
    "params,n,mode,expected",
    [
        ({"MAX_ORDER": 2}, 2, Mode.FREQUENCY, 13),
        ({"MAX_ORDER": 2}, 2, Mode.MOMENT, 6),
        ({"COMPONENT_BOUND": 1}, 3, Mode.FREQUENCY, 27),
        ({"COMPONENT_BOUND": [2, 1]}, 2, Mode.MOMENT, 6),
    ],
)
def test_build(params, n, mode, expected):
    dictionary = DictionaryConfig(**params).build(n, mode)
    assert dictionary.n == n
    assert dictionary.mode == mode
    assert len(dictionary) == expected


def test_build_dimension_mismatch():
    with pytest.raises(ConfigError, match="component bounds"):
        DictionaryConfig(COMPONENT_BOUND=[1, 2]).build(3, Mode.FREQUENCY)
