"""Tests for the pipeline workflows."""

import json
import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pnn.density import DensityGrid, GridSpec
from pnn.exceptions import ConfigError, DataError
from pnn.indexes import Dictionary, Mode, build_dictionary
from pnn.kmd import DmdModel
from pnn.neurons import NeuronSet
from pnn.tabular.grids import DensityTable
from pnn.workflows.density import DensityWorkflow, EcdfWorkflow
from pnn.workflows.estimate import EstimateWorkflow, TopoWorkflow
from pnn.workflows.kmd import KmdWorkflow
from pnn.workflows.learn import LearnWorkflow, connection_alphas
from pnn.workflows.simulate import SimulateWorkflow
from pnn.workflows.table1 import Table1Workflow

from .conftest import (
    DPATH_TEST_DATA,
    get_config,
    quadratic_neurons,
    trig_neurons,
)


def read_rate_report(fpath: Path) -> dict[str, str]:
    return dict(line.split("\t") for line in fpath.read_text().splitlines())


@pytest.fixture()
def fpath_trig_neurons(tmp_path: Path) -> Path:
    fpath = tmp_path / "trig.json"
    trig_neurons().save(fpath)
    return fpath


@pytest.fixture()
def fpath_quadratic_neurons(tmp_path: Path) -> Path:
    fpath = tmp_path / "quadratic.json"
    quadratic_neurons().save(fpath)
    return fpath


def test_simulate(tmp_path: Path):
    workflow = SimulateWorkflow(tmp_path / "out", config=get_config())
    workflow.run()
    df = pd.read_csv(workflow.layout.fpath_samples)
    assert list(df.columns) == ["t", "x1", "x2"]
    assert len(df) == 32


def test_simulate_dry_run(tmp_path: Path):
    workflow = SimulateWorkflow(tmp_path / "out", dry_run=True)
    workflow.run()
    assert not workflow.layout.fpath_samples.exists()


def test_kmd(tmp_path: Path):
    workflow = KmdWorkflow(tmp_path / "out", config=get_config())
    workflow.run()
    df = pd.read_csv(workflow.layout.fpath_samples_kmd)
    assert len(df) == 629
    assert df["t"].iloc[1] == pytest.approx(0.01)
    assert isinstance(DmdModel.load(workflow.layout.fpath_dmd_model), DmdModel)


def test_kmd_from_sample_file(tmp_path: Path):
    SimulateWorkflow(tmp_path / "sim", config=get_config()).run()
    fpath_samples = tmp_path / "sim" / "samples.csv"
    config = get_config(SAMPLES=fpath_samples)
    workflow = KmdWorkflow(tmp_path / "out", config=config)
    workflow.run()
    df = pd.read_csv(workflow.layout.fpath_samples_kmd)
    # regenerated over the span of the file: 31 steps of 0.2
    assert df["t"].iloc[-1] <= 6.2 + 1e-9
    assert len(df) == 621


def test_kmd_missing_sample_file(tmp_path: Path):
    config = get_config(SAMPLES=tmp_path / "missing.csv")
    with pytest.raises(DataError, match="Sample file not found"):
        KmdWorkflow(tmp_path / "out", config=config).run()


def test_ecdf(tmp_path: Path):
    config = get_config(STABILITY_SIZES=[100, 200])
    workflow = EcdfWorkflow(tmp_path / "out", config=config)
    workflow.run()
    df_cdf = pd.read_csv(workflow.layout.fpath_cdf)
    assert list(df_cdf.columns) == ["x1", "F"]
    assert len(df_cdf) == 64
    assert df_cdf["F"].is_monotonic_increasing
    df_stability = pd.read_csv(workflow.layout.fpath_ecdf_stability)
    assert list(df_stability["m"]) == [100, 200]
    assert (df_stability["distance"] >= 0).all()


def test_ecdf_stability_too_large(tmp_path: Path):
    config = get_config(STABILITY_SIZES=[1000])
    with pytest.raises(ConfigError, match="Stability size"):
        EcdfWorkflow(tmp_path / "out", config=config).run()


def test_density(tmp_path: Path):
    workflow = DensityWorkflow(tmp_path / "out", config=get_config())
    workflow.run()
    density = DensityTable.load(workflow.layout.fpath_density).to_grid()
    assert density.grid.bins == (64,)
    assert (density.values >= 0).all()
    assert density.mass() == pytest.approx(1.0, abs=1e-2)


@pytest.mark.parametrize(
    "max_order,expected",
    [(8, [(-4,), (0,), (4,)]), (1, [(0,)]), (3, [(-1,), (0,), (1,)])],
)
def test_connection_alphas(max_order, expected):
    dictionary = build_dictionary(1, Mode.FREQUENCY, max_order=max_order)
    assert connection_alphas(dictionary) == expected


def test_connection_alphas_first_axis():
    dictionary = get_config(DICTIONARY={"COMPONENT_BOUND": 2}).DICTIONARY.build(
        2, Mode.FREQUENCY
    )
    assert connection_alphas(dictionary) == [(-1, 0), (0, 0), (1, 0)]


def test_learn_frequency(tmp_path: Path):
    workflow = LearnWorkflow(tmp_path / "out", config=get_config())
    workflow.run()
    layout = workflow.layout

    neurons = NeuronSet.load(layout.fpath_neurons)
    assert neurons.mode == Mode.FREQUENCY
    assert neurons.n == 1
    assert neurons.max_order == 8

    report = read_rate_report(layout.fpath_rate)
    assert report["mode"] == "frequency"
    assert report["samples"] == "629"
    assert float(report["frequency_learning_rate"]) > 0
    assert report["truncation_order"] == "4"
    assert float(report["dc"]) == pytest.approx(neurons.dc)

    assert len(pd.read_csv(layout.fpath_connections)) == 51
    assert len(pd.read_csv(layout.fpath_density)) == 64
    assert len(Dictionary.load(layout.fpath_dictionary)) == 17
    assert json.loads(layout.fpath_config.read_text())["BINS_PER_AXIS"] == 64


def test_learn_moment(tmp_path: Path):
    config = get_config(
        MODE="moment",
        KMD={"ENABLED": False},
        STANDING_WAVE={"STEP": 0.01},
        DICTIONARY={"MAX_ORDER": 3},
    )
    workflow = LearnWorkflow(tmp_path / "out", config=config)
    workflow.run()
    layout = workflow.layout

    neurons = NeuronSet.load(layout.fpath_neurons)
    assert neurons.mode == Mode.MOMENT
    report = read_rate_report(layout.fpath_rate)
    assert report["samples"] == "629"
    assert "frequency_learning_rate" not in report
    assert float(report["moment_learning_rate"]) == pytest.approx(100, rel=0.05)
    assert not layout.fpath_connections.exists()


def test_learn_auxiliary(tmp_path: Path):
    config = get_config(
        MODE="moment",
        AUXILIARY=True,
        KMD={"ENABLED": False},
        STANDING_WAVE={"STEP": 0.01},
        DICTIONARY={"COMPONENT_BOUND": 2},
        LEARN_AXES=None,
        STENCIL_STEP=0.05,
    )
    workflow = LearnWorkflow(tmp_path / "out", config=config)
    workflow.run()

    neurons = NeuronSet.load(workflow.layout.fpath_neurons)
    assert neurons.n == 2
    assert neurons.dc == pytest.approx(math.log(2 * math.pi))
    assert neurons[(2, 0)].real == pytest.approx(-0.5, abs=1e-2)
    assert neurons[(0, 2)].real == pytest.approx(-0.5, abs=1e-2)
    assert workflow.layout.fpath_density.exists()


def test_learn_auxiliary_wrong_dimension(tmp_path: Path):
    config = get_config(
        MODE="moment",
        AUXILIARY=True,
        KMD={"ENABLED": False},
        DICTIONARY={"COMPONENT_BOUND": 2},
    )
    with pytest.raises(ConfigError, match="auxiliary density"):
        LearnWorkflow(tmp_path / "out", config=config).run()


def test_learn_no_dictionary(tmp_path: Path):
    config = get_config(DICTIONARY=None)
    with pytest.raises(ConfigError, match="No DICTIONARY"):
        LearnWorkflow(tmp_path / "out", config=config).run()


def test_learn_dry_run(tmp_path: Path):
    workflow = LearnWorkflow(tmp_path / "out", config=get_config(), dry_run=True)
    workflow.run()
    assert not workflow.layout.fpath_neurons.exists()
    assert not workflow.dpath_root.exists()


def test_estimate(tmp_path: Path, fpath_trig_neurons: Path):
    workflow = EstimateWorkflow(
        tmp_path / "out", fpath_neurons=fpath_trig_neurons, signals=[[1 / 12, 1 / 6]]
    )
    workflow.run()
    lines = workflow.layout.fpath_estimate.read_text().splitlines()
    assert len(lines) == 1
    report = json.loads(lines[0])
    assert report["likelihood"] == pytest.approx(0.0070097, rel=1e-3)
    assert report["active_path"] == [[-1, 0], [1, 0]]
    assert report["poan"][0] == pytest.approx(math.sin(math.pi / 12))


def test_estimate_signal_file(tmp_path: Path, fpath_quadratic_neurons: Path):
    workflow = EstimateWorkflow(
        tmp_path / "out",
        fpath_neurons=fpath_quadratic_neurons,
        fpath_signals=DPATH_TEST_DATA / "signals1.csv",
    )
    workflow.run()
    lines = workflow.layout.fpath_estimate.read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0])["likelihood"] == pytest.approx(1.4683, rel=1e-3)


def test_estimate_config_signals(tmp_path: Path, fpath_quadratic_neurons: Path):
    config = get_config(SIGNALS=[[-0.8, 0.8], [0.1, 0.2], [0.0, 0.0]])
    workflow = EstimateWorkflow(
        tmp_path / "out", fpath_neurons=fpath_quadratic_neurons, config=config
    )
    workflow.run()
    assert len(workflow.layout.fpath_estimate.read_text().splitlines()) == 3


def test_estimate_dictionary_file(tmp_path: Path, fpath_trig_neurons: Path):
    fpath_dictionary = tmp_path / "dictionary.json"
    build_dictionary(2, Mode.FREQUENCY, component_bounds=[1, 0]).save(fpath_dictionary)
    workflow = EstimateWorkflow(
        tmp_path / "out",
        fpath_neurons=fpath_trig_neurons,
        fpath_dictionary=fpath_dictionary,
        signals=[[1 / 12, 1 / 6]],
    )
    workflow.run()
    report = json.loads(workflow.layout.fpath_estimate.read_text())
    assert report["active_path"] == [[-1, 0], [1, 0]]


def test_estimate_missing_neurons(tmp_path: Path):
    workflow = EstimateWorkflow(tmp_path / "out", signals=[[0.1, 0.2]])
    with pytest.raises(DataError, match="Neuron file not found"):
        workflow.run()


@pytest.mark.parametrize(
    "kwargs,exception,match",
    [
        ({}, ConfigError, "No signal given"),
        ({"fpath_signals": "missing.csv"}, DataError, "Signal file not found"),
        ({"fpath_dictionary": "missing.json"}, DataError, "Dictionary file"),
    ],
)
def test_estimate_invalid(
    tmp_path: Path, fpath_quadratic_neurons: Path, kwargs, exception, match
):
    if "fpath_dictionary" in kwargs:
        kwargs["signals"] = [[0.1, 0.2]]
    workflow = EstimateWorkflow(
        tmp_path / "out", fpath_neurons=fpath_quadratic_neurons, **kwargs
    )
    with pytest.raises(exception, match=match):
        workflow.run()


def test_topo(tmp_path: Path, fpath_quadratic_neurons: Path):
    workflow = TopoWorkflow(
        tmp_path / "out", fpath_neurons=fpath_quadratic_neurons, signals=[[-0.8, 0.8]]
    )
    workflow.run()
    df_counts = pd.read_csv(workflow.layout.fpath_topo_counts)
    assert df_counts.to_dict(orient="records") == [{"signal": 0, "k": 3, "count": 1}]
    df_moments = pd.read_csv(workflow.layout.fpath_topo_moments)
    assert list(df_moments["mean"]) == pytest.approx([0.5, 1.0])
    assert list(df_moments["variance"]) == pytest.approx([0.25, 1.0])


def test_table1(tmp_path: Path):
    config = get_config(LEARN_AXES=None)
    workflow = Table1Workflow(tmp_path / "out", config=config)
    workflow.run()
    df = pd.read_csv(workflow.layout.fpath_table1)
    assert list(df.columns) == ["x", "xdot", "p_a", "p0"]
    assert list(df["x"]) == pytest.approx([0.0, 1 / math.sqrt(2), 1.0, 2.0])
    assert df["p_a"].iloc[0] == pytest.approx(0.1592, abs=1e-4)
    assert df["p_a"].iloc[1] == pytest.approx(0.2251, abs=1e-4)
    assert np.isinf(df["p_a"].iloc[2])
    assert df["p_a"].iloc[3] == 0
    assert df["p0"].iloc[3] == 0
    assert (df["p0"] >= 0).all()


def test_table1_density_file(tmp_path: Path):
    grid = GridSpec.torus(2, 4)
    fpath_density = tmp_path / "density.csv"
    DensityTable.from_grid(DensityGrid(grid=grid, values=np.ones((4, 4)))).save(
        fpath_density
    )
    workflow = Table1Workflow(tmp_path / "out", fpath_density=fpath_density)
    workflow.run()
    df = pd.read_csv(workflow.layout.fpath_table1)
    assert list(df["p0"]) == [1.0, 1.0, 1.0, 0.0]


def test_table1_1d_density(tmp_path: Path):
    grid = GridSpec.torus(1, 8)
    workflow = Table1Workflow(tmp_path / "out")
    DensityTable.from_grid(DensityGrid(grid=grid, values=np.ones(8))).save(
        workflow.layout.fpath_density
    )
    with pytest.raises(DataError, match="2D density grid"):
        workflow.run()
