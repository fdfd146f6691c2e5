"""Tests for the pipeline configuration."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from pnn.config.main import PipelineConfig
from pnn.indexes import Mode
from pnn.utils import FPATH_SAMPLE_CONFIG

from .conftest import DPATH_TEST_DATA


def test_defaults():
    config = PipelineConfig()
    assert config.MODE == Mode.FREQUENCY
    assert config.SAMPLES is None
    assert config.KMD.ENABLED
    assert config.DICTIONARY is None
    assert not config.AUXILIARY


@pytest.mark.parametrize("n,expected", [(1, 1000), (2, 300), (3, 32), (5, 32)])
def test_get_bins_per_axis_default(n, expected):
    assert PipelineConfig().get_bins_per_axis(n) == expected


def test_get_bins_per_axis_override():
    assert PipelineConfig(BINS_PER_AXIS=50).get_bins_per_axis(2) == 50


@pytest.mark.parametrize(
    "fpath",
    [
        FPATH_SAMPLE_CONFIG,
        DPATH_TEST_DATA / "config1.json",
        DPATH_TEST_DATA / "config2.json",
    ],
)
def test_load(fpath: Path):
    assert isinstance(PipelineConfig.load(fpath), PipelineConfig)


def test_load_config1():
    config = PipelineConfig.load(DPATH_TEST_DATA / "config1.json")
    assert config.KMD.TARGET_STEP == 0.01
    assert config.DICTIONARY.MAX_ORDER == 8
    assert config.LEARN_AXES == [1]
    assert config.SIGNALS == [[0.5], [-0.25]]


@pytest.mark.parametrize("fname", ["config_invalid1.json", "config_invalid2.json"])
def test_load_invalid(fname):
    with pytest.raises(ValidationError):
        PipelineConfig.load(DPATH_TEST_DATA / fname)


@pytest.mark.parametrize(
    "params",
    [
        {"AUXILIARY": True},
        {"MODE": "moment", "DICTIONARY": {"MAX_ORDER": 25}},
        {"MODE": "moment", "DICTIONARY": {"COMPONENT_BOUND": [2, 21]}},
        {"BINS_PER_AXIS": 3},
        {"STENCIL_STEP": 0},
        {"STABILITY_SIZES": [10, 0]},
        {"MODE": "other"},
    ],
)
def test_invalid(params):
    with pytest.raises(ValidationError):
        PipelineConfig(**params)


def test_moment_dictionary_bound_intersection():
    # MAX_ORDER caps the largest component
    config = PipelineConfig(
        MODE="moment", DICTIONARY={"MAX_ORDER": 4, "COMPONENT_BOUND": 30}
    )
    assert config.DICTIONARY.largest_component == 4


def test_with_overrides():
    config = PipelineConfig(KMD={"TARGET_STEP": 0.1})
    new_config = config.with_overrides(
        {
            "KMD.RANK_TOL": 1e-8,
            "DICTIONARY.MAX_ORDER": 4,
            "MODE": None,
            "OUTPUT_DIR": Path("out"),
        }
    )
    assert new_config.KMD.TARGET_STEP == 0.1
    assert new_config.KMD.RANK_TOL == 1e-8
    assert new_config.DICTIONARY.MAX_ORDER == 4
    assert new_config.MODE == Mode.FREQUENCY
    assert new_config.OUTPUT_DIR == Path("out")
    # the original is unchanged
    assert config.DICTIONARY is None
    assert config.KMD.RANK_TOL != 1e-8


def test_with_overrides_invalid():
    with pytest.raises(ValidationError):
        PipelineConfig().with_overrides({"AUXILIARY": True})


def test_save(tmp_path: Path):
    config = PipelineConfig.load(DPATH_TEST_DATA / "config1.json")
    fpath = tmp_path / "subdir" / "config.json"
    config.save(fpath)
    assert PipelineConfig.load(fpath) == config
