"""Utilities for tests."""

from __future__ import annotations

import datetime
import math
from pathlib import Path

import numpy as np
import pytest
import pytest_mock

from pnn.config.main import PipelineConfig
from pnn.density import DensityGrid, GridSpec
from pnn.indexes import Mode
from pnn.neurons import NeuronSet

DPATH_TEST_DATA = Path(__file__).parent / "data"

MOCKED_DATETIME = datetime.datetime(2024, 4, 4, 12, 34, 56, 789000)

# energy -3 sin(pi x1) + cos(pi x2) + 2 cos(2 pi x2) on the torus
TRIG_TERMS = {
    (1, 0): 1.5j,
    (-1, 0): -1.5j,
    (0, 1): 0.5,
    (0, -1): 0.5,
    (0, 2): 1.0,
    (0, -2): 1.0,
}
TRIG_Z = 47.9883

# energy -0.5 x1 - 2 x2 + 4 x1 x2 + 3 x2^2 on [-1, 1)^2
QUADRATIC_TERMS = {(1, 0): -0.5, (0, 1): -2.0, (1, 1): 4.0, (0, 2): 3.0}
QUADRATIC_Z = 4.2883


@pytest.fixture()
def datetime_fixture(
    mocker: pytest_mock.MockerFixture,
):
    """Mock the datetime module so that it produces predictable outputs.

    See https://stackoverflow.com/a/75591976 for mocking datetime.datetime.now
    """
    mocked_datetime = mocker.patch("pnn.utils.datetime")
    mocked_datetime.datetime.now.return_value = MOCKED_DATETIME
    yield mocked_datetime


def trig_neurons(dc: float = math.log(TRIG_Z)) -> NeuronSet:
    """Frequency neurons of a trigonometric energy in 2D."""
    return NeuronSet.from_energy_terms(Mode.FREQUENCY, 2, dc, TRIG_TERMS)


def quadratic_neurons(dc: float = math.log(QUADRATIC_Z)) -> NeuronSet:
    """Moment neurons of a quadratic energy in 2D."""
    return NeuronSet.from_energy_terms(Mode.MOMENT, 2, dc, QUADRATIC_TERMS)


def memoryless_density(x):
    """exp(-2x) / sinh(2) on [-1, 1]."""
    return np.exp(-2 * np.asarray(x, dtype=float)) / math.sinh(2)


def memoryless_grid(bins: int = 1000) -> DensityGrid:
    return DensityGrid.from_function(
        lambda points: memoryless_density(points[:, 0]), GridSpec.torus(1, bins)
    )


def arcsine_density(x):
    """Density of cos(t) for t uniform over a period."""
    return 1 / (np.pi * np.sqrt(1 - np.asarray(x, dtype=float) ** 2))


def get_config(**kwargs) -> PipelineConfig:
    """Small and fast pipeline config, with keyword overrides."""
    params = dict(
        STANDING_WAVE={"T_START": 0.0, "T_END": 2 * math.pi, "STEP": 0.2},
        KMD={"ENABLED": True, "TARGET_STEP": 0.01},
        BINS_PER_AXIS=64,
        DICTIONARY={"MAX_ORDER": 8},
        LEARN_AXES=[1],
    )
    params.update(kwargs)
    return PipelineConfig(**params)
