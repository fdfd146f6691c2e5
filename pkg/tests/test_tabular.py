"""Tests for the tabular classes."""

import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pnn.density import CdfGrid, DensityGrid, GridSpec
from pnn.estimation import topo_stats
from pnn.exceptions import DataError
from pnn.sampling import SampleMatrix, simulate_standing_wave
from pnn.tabular.base import coordinate_columns
from pnn.tabular.grids import CdfTable, DensityTable
from pnn.tabular.samples import SampleTable, SignalTable
from pnn.tabular.tables import (
    ConnectionTable,
    StabilityTable,
    Table1Table,
    TopoCountsTable,
    TopoMomentsTable,
    format_index,
    parse_index,
)

from .conftest import DPATH_TEST_DATA


def test_coordinate_columns():
    assert coordinate_columns(3) == ["x1", "x2", "x3"]


def test_coordinates_sorted_by_axis():
    table = SignalTable(pd.DataFrame({"x10": [0.0], "x2": [0.0], "x1": [0.0]}))
    assert table.coordinates == ["x1", "x2", "x10"]


def test_samples_roundtrip(tmp_path: Path):
    samples = simulate_standing_wave(0, 1.0, 0.25)
    fpath = tmp_path / "samples.csv"
    SampleTable.from_samples(samples).save(fpath)

    loaded = SampleTable.load(fpath).to_samples()
    assert loaded.m == 5
    assert loaded.n == 2
    assert loaded.step == pytest.approx(0.25)
    assert loaded.states == pytest.approx(samples.states)


def test_samples_single_row():
    table = SampleTable(pd.DataFrame({"t": [2.0], "x1": [0.5]}))
    samples = table.to_samples()
    assert samples.step == 1.0
    assert samples.start_time == 2.0


def test_samples_nonuniform():
    table = SampleTable.load(DPATH_TEST_DATA / "samples_nonuniform.csv")
    with pytest.raises(DataError, match="uniformly spaced"):
        table.to_samples()


@pytest.mark.parametrize(
    "data,message",
    [
        ({"t": [0.0], "y": [1.0]}, "Unexpected column"),
        ({"t": [0.0], "x1": ["abc"]}, "Error when validating"),
        ({"t": [0.0], "x1": [None]}, "Missing value"),
    ],
)
def test_samples_validate_invalid(data, message):
    with pytest.raises(DataError, match=message):
        SampleTable(pd.DataFrame(data)).validate()


def test_samples_empty():
    with pytest.raises(DataError, match="empty"):
        SampleTable().to_samples()


def test_samples_no_coordinates():
    with pytest.raises(DataError, match="no coordinate columns"):
        SampleTable(pd.DataFrame({"t": [0.0, 1.0]})).to_samples()


def test_load_empty_file(tmp_path: Path):
    fpath = tmp_path / "empty.csv"
    fpath.write_text("")
    with pytest.raises(DataError, match="Cannot read"):
        SampleTable.load(fpath)


def test_load_dtype():
    with pytest.raises(ValueError, match="dtype"):
        SampleTable.load(DPATH_TEST_DATA / "signals1.csv", dtype=float)


def test_signals_load():
    signals = SignalTable.load(DPATH_TEST_DATA / "signals1.csv").to_signals()
    assert signals == pytest.approx(np.array([[-0.8, 0.8], [0.5, 0.25]]))


def test_signals_from_signals():
    table = SignalTable.from_signals([0.5, -0.25])
    assert list(table.columns) == ["x1", "x2"]
    assert table.to_signals().shape == (1, 2)


def test_density_roundtrip(tmp_path: Path):
    grid = GridSpec.torus(2, 4)
    values = np.arange(16, dtype=float).reshape(4, 4)
    fpath = tmp_path / "density.csv"
    DensityTable.from_grid(DensityGrid(grid=grid, values=values)).save(fpath)

    df = pd.read_csv(fpath)
    assert list(df.columns) == ["x1", "x2", "p0"]
    assert len(df) == 16
    # last axis varies fastest
    assert df.loc[1, "x2"] == pytest.approx(-0.25)
    assert df.loc[1, "x1"] == pytest.approx(-0.75)

    density = DensityTable.load(fpath).to_grid()
    assert density.grid.bins == (4, 4)
    assert density.grid.lower == pytest.approx((-1.0, -1.0))
    assert density.grid.upper == pytest.approx((1.0, 1.0))
    assert density.values == pytest.approx(values)


def test_density_shuffled_rows():
    grid = GridSpec.torus(1, 8)
    values = np.linspace(0, 1, 8)
    table = DensityTable.from_grid(DensityGrid(grid=grid, values=values))
    shuffled = DensityTable(table.iloc[::-1].reset_index(drop=True))
    assert shuffled.to_grid().values == pytest.approx(values)


def test_density_missing_rows():
    grid = GridSpec.torus(2, 4)
    table = DensityTable.from_grid(DensityGrid(grid=grid, values=np.ones((4, 4))))
    with pytest.raises(DataError, match="rows"):
        DensityTable(table.iloc[:-1]).to_grid()


def test_cdf_roundtrip():
    grid = GridSpec.torus(1, 4)
    values = np.array([0.1, 0.4, 0.6, 1.0])
    table = CdfTable.from_grid(CdfGrid(grid=grid, values=values))
    assert list(table.columns) == ["x1", "F"]
    assert table.to_grid().values == pytest.approx(values)


@pytest.mark.parametrize(
    "index,expected", [((1, -2), "1;-2"), ((0,), "0"), ((3, 0, -1), "3;0;-1")]
)
def test_format_index(index, expected):
    assert format_index(index) == expected
    assert parse_index(expected) == index


def test_parse_index_invalid():
    with pytest.raises(ValueError, match="Invalid multi-index"):
        parse_index("1;a")


def test_stability_table():
    table = StabilityTable.from_rows([(100, 0.01), (200, 0.005)])
    assert list(table["m"]) == [100, 200]
    assert len(table.validate()) == 2


def test_connection_table():
    matrix = np.array([[1 + 1j, 0.5], [0.0, -2j]])
    table = ConnectionTable.from_matrix([(0,), (1,)], [(-1,), (1,)], matrix)
    assert list(table.columns) == ["alpha", "gamma", "re", "im", "abs"]
    assert len(table) == 4
    assert list(table["gamma"]) == ["-1", "1", "-1", "1"]
    assert table.loc[0, "abs"] == pytest.approx(math.sqrt(2))
    assert table.loc[3, "im"] == pytest.approx(-2.0)
    table.validate()


def test_connection_table_invalid_index():
    table = ConnectionTable.from_matrix([(0,)], [(1,)], np.array([[1.0]]))
    table.loc[0, "alpha"] = "x"
    with pytest.raises(DataError):
        table.validate()


def test_table1_table():
    table = Table1Table(
        pd.DataFrame(
            {"x": [0.0, 1.0], "xdot": [0.0, 0.0], "p_a": [0.1592, np.inf], "p0": 0.0}
        )
    )
    validated = table.validate()
    assert validated.loc[1, "p_a"] == np.inf


def test_topo_tables():
    stats = {0: topo_stats([(1, 0), (0, 2)])}
    counts = TopoCountsTable.from_stats(stats)
    assert counts.to_dict(orient="records") == [{"signal": 0, "k": 3, "count": 1}]

    moments = TopoMomentsTable.from_stats(stats)
    assert list(moments["component"]) == [1, 2]
    assert list(moments["mean"]) == pytest.approx([0.5, 1.0])
    assert list(moments["variance"]) == pytest.approx([0.25, 1.0])


def test_topo_tables_empty():
    stats = {0: topo_stats([(1, 0)])}
    assert len(TopoCountsTable.from_stats(stats)) == 0
    assert len(TopoMomentsTable.from_stats(stats)) == 0


def test_sample_matrix_table_times():
    samples = SampleMatrix(states=np.zeros((3, 1)), step=0.5, start_time=1.0)
    table = SampleTable.from_samples(samples)
    assert list(table["t"]) == pytest.approx([1.0, 1.5, 2.0])
