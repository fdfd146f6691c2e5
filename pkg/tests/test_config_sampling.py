"""Tests for the sample source and regeneration configurations."""

import math

import pytest
from pydantic import ValidationError

from pnn.config.sampling import KmdConfig, StandingWaveConfig
from pnn.kmd import DEFAULT_RANK_TOL


def test_standing_wave_defaults():
    config = StandingWaveConfig()
    assert config.T_START == 0
    assert config.T_END == pytest.approx(2 * math.pi)
    samples = config.simulate()
    assert samples.m == 32
    assert samples.step == 0.2


def test_standing_wave_simulate():
    samples = StandingWaveConfig(T_END=1.0, STEP=0.25, AMPLITUDE=0.5).simulate()
    assert samples.m == 5
    assert samples.states[0] == pytest.approx([0.0, 0.5])


@pytest.mark.parametrize(
    "params",
    [
        {"STEP": 0},
        {"T_START": 1.0, "T_END": 1.0},
        {"AMPLITUDE": -1.5},
        {"EXTRA": 1},
    ],
)
def test_standing_wave_invalid(params):
    with pytest.raises(ValidationError):
        StandingWaveConfig(**params)


def test_kmd_defaults():
    config = KmdConfig()
    assert config.ENABLED
    assert config.TARGET_STEP == 0.001
    assert config.RANK_TOL == DEFAULT_RANK_TOL


@pytest.mark.parametrize("params", [{"TARGET_STEP": 0}, {"RANK_TOL": -1e-3}])
def test_kmd_invalid(params):
    with pytest.raises(ValidationError):
        KmdConfig(**params)
