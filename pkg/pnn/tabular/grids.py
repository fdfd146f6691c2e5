"""Classes for values tabulated on tensor grids."""

from __future__ import annotations

import numpy as np
import pandas as pd
from pydantic import Field
from typing_extensions import Self

from pnn.density import CdfGrid, DensityGrid, GridSpec
from pnn.exceptions import DataError
from pnn.tabular.base import BaseTabular, CoordinateModel, coordinate_columns


class CdfModel(CoordinateModel):
    """A CDF value at a cell center."""

    F: float = Field(description="Distribution function value")


class DensityModel(CoordinateModel):
    """A density value at a cell center."""

    p0: float = Field(description="Density value")


class BaseGridTable(BaseTabular):
    """Grid values, one row per cell center (lexicographic, last axis fastest)."""

    col_value: str

    @classmethod
    def from_values(cls, grid: GridSpec, values: np.ndarray) -> Self:
        df = pd.DataFrame(grid.mesh_points(), columns=coordinate_columns(grid.n))
        df[cls.col_value] = np.asarray(values, dtype=float).ravel()
        return cls(df)

    def to_values(self) -> tuple[GridSpec, np.ndarray]:
        """Recover the grid and the values as an array of grid shape."""
        columns = self.coordinates
        if len(columns) == 0:
            raise DataError(f"The {self.label} has no coordinate columns (x1, ...)")
        ordered = self.sort_values(by=columns, ignore_index=True)
        axes = [np.unique(ordered[col].to_numpy(dtype=float)) for col in columns]
        grid = GridSpec.from_axes(axes)
        if len(ordered) != np.prod(grid.shape):
            raise DataError(
                f"The {self.label} has {len(ordered)} rows"
                f", expected {int(np.prod(grid.shape))} for grid shape {grid.shape}"
            )
        values = ordered[self.col_value].to_numpy(dtype=float).reshape(grid.shape)
        return grid, values


class CdfTable(BaseGridTable):
    """Smoothed CDF on a grid (columns x1,...,xn,F)."""

    col_value = "F"

    label = "CDF table"
    model = CdfModel

    _metadata = BaseTabular._metadata + ["col_value", "label", "model"]

    @classmethod
    def from_grid(cls, cdf_grid: CdfGrid) -> Self:
        return cls.from_values(cdf_grid.grid, cdf_grid.values)

    def to_grid(self) -> CdfGrid:
        grid, values = self.to_values()
        return CdfGrid(grid=grid, values=values)


class DensityTable(BaseGridTable):
    """Density on a grid (columns x1,...,xn,p0)."""

    col_value = "p0"

    label = "density table"
    model = DensityModel

    _metadata = BaseTabular._metadata + ["col_value", "label", "model"]

    @classmethod
    def from_grid(cls, density: DensityGrid) -> Self:
        return cls.from_values(density.grid, density.values)

    def to_grid(self) -> DensityGrid:
        grid, values = self.to_values()
        return DensityGrid(grid=grid, values=values)
