"""Empirical distribution functions and finite-difference densities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline, make_lsq_spline

from pnn.exceptions import ConfigError, DataError, NumericError
from pnn.logger import get_logger
from pnn.utils import LOG_FLOOR, TORUS_LOWER, TORUS_UPPER

MIN_BINS = 4
KNOT_SPACING = 10  # cells between interior knots of the n-D smoothing splines
AUXILIARY_CONSTANT = 1 / (2 * math.pi)
NORMALIZATION_TOL = 1e-6
_CHUNK_SIZE = 1024


def _as_points(points, n: Optional[int] = None) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1) if n in (None, 1) else points.reshape(1, -1)
    if n is not None and points.shape[1] != n:
        raise DataError(
            f"Expected points of dimension {n}, got shape {points.shape}"
        )
    return points


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid of cells over a box, evaluated at cell centers."""

    bins: tuple[int, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        bins = tuple(int(b) for b in self.bins)
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if not (len(bins) == len(lower) == len(upper)) or len(bins) == 0:
            raise ConfigError(
                f"Inconsistent grid specification: {bins}, {lower}, {upper}"
            )
        if any(b < 1 for b in bins):
            raise ConfigError(f"Bins per axis must be positive, got {bins}")
        if any(hi <= lo for lo, hi in zip(lower, upper)):
            raise ConfigError(f"Empty grid box: {lower} to {upper}")
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def torus(cls, n: int, bins: int | Sequence[int]) -> GridSpec:
        """Grid over the torus [-1, 1)^n."""
        if isinstance(bins, (int, np.integer)):
            bins = [int(bins)] * n
        return cls(bins=tuple(bins), lower=(TORUS_LOWER,) * n, upper=(TORUS_UPPER,) * n)

    @property
    def n(self) -> int:
        return len(self.bins)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.bins

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(
            (hi - lo) / b for lo, hi, b in zip(self.lower, self.upper, self.bins)
        )

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def centers(self, axis: int) -> np.ndarray:
        """Cell centers along one axis."""
        h = self.spacing[axis]
        return self.lower[axis] + h * (np.arange(self.bins[axis]) + 0.5)

    @property
    def axes(self) -> list[np.ndarray]:
        return [self.centers(axis) for axis in range(self.n)]

    def mesh_points(self) -> np.ndarray:
        """All cell centers, shape (prod(bins), n), last axis fastest."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.column_stack([axis.ravel() for axis in mesh])

    def nearest_index(self, point: Sequence[float]) -> Optional[tuple[int, ...]]:
        """Index of the cell containing a point, or None outside the box."""
        point = np.asarray(point, dtype=float).ravel()
        if point.size != self.n:
            raise DataError(f"Expected a point of dimension {self.n}, got {point}")
        index = []
        for axis, value in enumerate(point):
            if value < self.lower[axis] or value > self.upper[axis]:
                return None
            position = int((value - self.lower[axis]) // self.spacing[axis])
            index.append(min(position, self.bins[axis] - 1))
        return tuple(index)

    @classmethod
    def from_axes(cls, axes: Sequence[np.ndarray]) -> GridSpec:
        """Recover a grid from its (uniform) cell centers."""
        bins, lower, upper = [], [], []
        for centers in axes:
            centers = np.asarray(centers, dtype=float)
            if centers.size < 2:
                raise DataError("Each grid axis needs at least 2 cell centers")
            h = np.diff(centers)
            if not np.allclose(h, h[0], rtol=1e-6, atol=1e-9) or h[0] <= 0:
                raise DataError("Grid cell centers must be uniformly spaced")
            bins.append(centers.size)
            lower.append(centers[0] - h[0] / 2)
            upper.append(centers[-1] + h[0] / 2)
        return cls(bins=tuple(bins), lower=tuple(lower), upper=tuple(upper))


@dataclass(frozen=True)
class EmpiricalCdf:
    """Multivariate empirical distribution function of retained samples."""

    samples: np.ndarray

    def __post_init__(self):
        samples = _as_points(self.samples)
        if samples.shape[0] == 0:
            raise DataError("Cannot build an empirical CDF from an empty sample set")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    def __call__(self, points) -> np.ndarray:
        """Fraction of samples that are componentwise <= each point."""
        points = _as_points(points, n=self.n)
        values = np.empty(points.shape[0])
        for start in range(0, points.shape[0], _CHUNK_SIZE):
            chunk = points[start : start + _CHUNK_SIZE]
            below = np.all(self.samples[None, :, :] <= chunk[:, None, :], axis=-1)
            values[start : start + _CHUNK_SIZE] = below.mean(axis=1)
        return values

    def evaluate_grid(self, grid: GridSpec) -> np.ndarray:
        """Evaluate at every cell center of a grid, returning an array of grid shape."""
        if grid.n != self.n:
            raise DataError(
                f"Grid dimension {grid.n} does not match the samples ({self.n})"
            )
        # a sample counts at every node that is componentwise >= the sample
        first_node = [
            np.searchsorted(grid.centers(axis), self.samples[:, axis], side="left")
            for axis in range(self.n)
        ]
        counts = np.zeros(tuple(b + 1 for b in grid.bins))
        np.add.at(counts, tuple(first_node), 1)
        for axis in range(self.n):
            counts = np.cumsum(counts, axis=axis)
        return counts[tuple(slice(0, b) for b in grid.bins)] / self.m


@dataclass(frozen=True)
class CdfGrid:
    """Distribution function values at the cell centers of a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise DataError(
                f"CDF values have shape {values.shape}, expected {self.grid.shape}"
            )
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class DensityGrid:
    """Non-negative density values at the cell centers of a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise DataError(
                f"Density values have shape {values.shape}, expected {self.grid.shape}"
            )
        if np.any(np.isnan(values)):
            raise DataError("Density values contain NaN")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(
        cls, density: Callable[[np.ndarray], np.ndarray], grid: GridSpec
    ) -> DensityGrid:
        """Tabulate a density given as a function of (N, n) points."""
        values = np.asarray(density(grid.mesh_points()), dtype=float)
        return cls(grid=grid, values=values.reshape(grid.shape))

    def mass(self) -> float:
        """Midpoint-rule integral of the density."""
        return float(self.values.sum() * self.grid.cell_volume)

    def log_reciprocal(self, floor: float = LOG_FLOOR) -> np.ndarray:
        """ln(1/p) on the grid, with densities clamped below at ``floor``."""
        return -np.log(np.maximum(self.values, floor))

    def value_at(self, point: Sequence[float]) -> float:
        """Value of the cell containing a point (0 outside the grid box)."""
        index = self.grid.nearest_index(point)
        if index is None:
            return 0.0
        return float(self.values[index])


def empirical_cdf(samples) -> EmpiricalCdf:
    """Build the empirical distribution function of a sample set."""
    return EmpiricalCdf(samples=samples)


def l1_distance(cdf_a: EmpiricalCdf, cdf_b: EmpiricalCdf, grid: GridSpec) -> float:
    """Midpoint Riemann sum of |F_a - F_b| over the grid box."""
    if cdf_a.n != cdf_b.n:
        raise DataError(
            f"Cannot compare CDFs of dimensions {cdf_a.n} and {cdf_b.n}"
        )
    difference = np.abs(cdf_a.evaluate_grid(grid) - cdf_b.evaluate_grid(grid))
    return float(difference.sum() * grid.cell_volume)


def _strided_subsample(samples: np.ndarray, size: int) -> np.ndarray:
    return samples[(np.arange(size) * samples.shape[0]) // size]


def ecdf_stability(
    samples, sizes: Sequence[int], grid: GridSpec
) -> list[tuple[int, float]]:
    """L1 distances between CDFs of strided subsamples of sizes m and 2m."""
    samples = _as_points(samples)
    rows = []
    for size in sizes:
        if size < 1 or 2 * size > samples.shape[0]:
            raise ConfigError(
                f"Stability size {size} needs between 2 and {samples.shape[0]}"
                " samples (2 * size)"
            )
        distance = l1_distance(
            empirical_cdf(_strided_subsample(samples, size)),
            empirical_cdf(_strided_subsample(samples, 2 * size)),
            grid,
        )
        rows.append((int(size), distance))
    return rows


def _check_bins(n: int, bins_per_axis: int | Sequence[int]) -> tuple[int, ...]:
    if isinstance(bins_per_axis, (int, np.integer)):
        bins_per_axis = [int(bins_per_axis)] * n
    bins_per_axis = tuple(int(b) for b in bins_per_axis)
    if len(bins_per_axis) != n:
        raise ConfigError(f"Expected {n} bin counts, got {bins_per_axis}")
    if any(b < MIN_BINS for b in bins_per_axis):
        raise ConfigError(
            f"At least {MIN_BINS} bins per axis are needed, got {bins_per_axis}"
        )
    return bins_per_axis


def _smooth_cdf_1d(values: np.ndarray, centers: np.ndarray, bins: int) -> np.ndarray:
    """Natural cubic spline through grouped step midpoints of a 1D ECDF."""
    x = np.sort(values)
    m = x.size
    if m == 1:
        return (centers >= x[0]).astype(float)
    if x[0] == x[-1]:
        raise DataError(f"Degenerate samples: all {m} values equal {x[0]}")

    # step midpoints, averaged over equal-count groups of neighbouring samples
    heights = (np.arange(1, m + 1) - 0.5) / m
    n_groups = min(bins, max(2, round(math.sqrt(m) / 2)))
    groups = np.array_split(np.arange(m), n_groups)
    knots_x = np.concatenate([[x[0]], [x[g].mean() for g in groups], [x[-1]]])
    knots_y = np.concatenate([[0.0], [heights[g].mean() for g in groups], [1.0]])

    unique_x, inverse = np.unique(knots_x, return_inverse=True)
    unique_y = np.bincount(inverse, weights=knots_y) / np.bincount(inverse)
    spline = CubicSpline(unique_x, unique_y, bc_type="natural")

    smoothed = spline(centers)
    smoothed[centers < x[0]] = 0.0
    smoothed[centers >= x[-1]] = 1.0
    return smoothed


def _smooth_axis(values: np.ndarray, centers: np.ndarray, axis: int) -> np.ndarray:
    """Least-squares cubic spline smoothing along one grid axis."""
    k = 3
    interior = centers[KNOT_SPACING:-KNOT_SPACING:KNOT_SPACING]
    knots = np.concatenate([[centers[0]] * (k + 1), interior, [centers[-1]] * (k + 1)])
    # fit along axis 0 (scipy's make_lsq_spline rejects axis != 0 here)
    spline = make_lsq_spline(centers, np.moveaxis(values, axis, 0), knots, k=k)
    return np.moveaxis(spline(centers), 0, axis)


def cdf_to_grid(cdf: EmpiricalCdf, bins_per_axis: int | Sequence[int]) -> CdfGrid:
    """Smooth an empirical CDF onto a tensor grid over the torus.

    In 1D a natural cubic spline is fitted through the step midpoints; in
    higher dimensions the raw CDF on the grid is smoothed by separable
    least-squares spline passes. The result is clamped to [0, 1] and made
    non-decreasing along every axis.
    """
    bins = _check_bins(cdf.n, bins_per_axis)
    grid = GridSpec.torus(cdf.n, bins)

    for axis in range(cdf.n):
        column = cdf.samples[:, axis]
        if cdf.m > 1 and column.min() == column.max():
            raise DataError(
                f"Degenerate samples along axis {axis + 1}: all values equal"
                f" {column[0]}"
            )

    if cdf.n == 1:
        values = _smooth_cdf_1d(cdf.samples[:, 0], grid.centers(0), bins[0])
    else:
        values = cdf.evaluate_grid(grid)
        for axis in range(cdf.n):
            values = _smooth_axis(values, grid.centers(axis), axis)

    values = np.clip(values, 0.0, 1.0)
    for axis in range(cdf.n):
        values = np.maximum.accumulate(values, axis=axis)
    return CdfGrid(grid=grid, values=values)


def density_from_cdf(
    cdf_grid: CdfGrid, logger: Optional[logging.Logger] = None
) -> DensityGrid:
    """Mixed partial derivative of a CDF grid by finite differences.

    Central differences are used at interior cells and one-sided differences at
    the boundaries. Negative values are clamped to 0 and the result is
    renormalized to unit mass.
    """
    if logger is None:
        logger = get_logger("density_from_cdf")

    grid = cdf_grid.grid
    values = cdf_grid.values
    for axis, h in enumerate(grid.spacing):
        values = np.gradient(values, h, axis=axis)

    n_negative = int(np.sum(values < 0))
    if n_negative > 0:
        logger.debug(f"Clamping {n_negative} negative density values to 0")
    values = np.maximum(values, 0.0)

    mass = values.sum() * grid.cell_volume
    if not np.isfinite(mass) or mass <= 0:
        raise NumericError(f"Density has non-positive or infinite mass: {mass}")
    return DensityGrid(grid=grid, values=values / mass)


def auxiliary_density(x, xdot):
    """Bowl-shaped stand-in C (1 - x^2 - xdot^2)^(-1/2) on the unit disk.

    Returns +inf on the unit circle and 0 outside; C = 1 / (2 pi) gives unit mass.
    """
    x = np.asarray(x, dtype=float)
    xdot = np.asarray(xdot, dtype=float)
    radius2 = x**2 + xdot**2
    with np.errstate(divide="ignore", invalid="ignore"):
        inside = AUXILIARY_CONSTANT / np.sqrt(1.0 - radius2)
    values = np.where(radius2 < 1, inside, np.where(radius2 == 1, np.inf, 0.0))
    return values if values.ndim else float(values)


def auxiliary_log_reciprocal(points) -> np.ndarray:
    """ln(1 / p_a) at (N, 2) points inside the unit disk."""
    points = _as_points(points, n=2)
    radius2 = np.sum(points**2, axis=1)
    if np.any(radius2 >= 1):
        raise DataError("ln(1/p_a) is only finite inside the unit disk")
    return -math.log(AUXILIARY_CONSTANT) + 0.5 * np.log1p(-radius2)
