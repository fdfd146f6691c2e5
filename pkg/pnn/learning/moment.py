"""Moment learning: Taylor neurons of ln(1/p) at the origin."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import make_interp_spline

from pnn.density import DensityGrid
from pnn.exceptions import ConfigError, DataError
from pnn.indexes import Dictionary, Mode, MultiIndex
from pnn.logger import get_logger
from pnn.neurons import NeuronSet
from pnn.utils import LOG_FLOOR

DEFAULT_STENCIL_STEP = 0.05
DEFAULT_VALUE_NOISE = 1e-13
MAX_COMPONENT = 20
MAX_STEP_DOUBLINGS = 4
MOMENT_ATOL = 1e-6
MOMENT_RTOL = 0.1
_LATTICE_TOL = 1e-9

GridFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DerivativeEstimate:
    """A central difference quotient and a bound on its error."""

    value: float
    error: float
    step_scale: int


def _per_axis(value: float | Sequence[float], n: int, name: str) -> tuple[float, ...]:
    if isinstance(value, (int, float, np.number)):
        value = [float(value)] * n
    value = tuple(float(v) for v in value)
    if len(value) != n:
        raise ConfigError(f"Expected {n} values for the {name}, got {value}")
    return value


def _stencil_fits(
    alpha: MultiIndex, spacing: Sequence[float], reach: Sequence[float]
) -> bool:
    return all(
        a * h / 2 <= r * (1 + _LATTICE_TOL) for a, h, r in zip(alpha, spacing, reach)
    )


def _stencil(
    alpha: MultiIndex, spacing: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    offsets, weights = [], []
    for a, h in zip(alpha, spacing):
        i = np.arange(a + 1)
        offsets.append((a / 2 - i) * h)
        weights.append(
            np.array([(-1) ** k * math.comb(a, k) for k in i], dtype=float) / h**a
        )
    mesh = np.meshgrid(*offsets, indexing="ij")
    points = np.column_stack([axis.ravel() for axis in mesh])
    stencil = weights[0]
    for axis_weights in weights[1:]:
        stencil = np.multiply.outer(stencil, axis_weights)
    return points, stencil.ravel()


def _apply_stencil(
    f: GridFunction,
    alpha: MultiIndex,
    spacing: Sequence[float],
    value_noise: float,
) -> tuple[float, float]:
    """Difference quotient and a bound on its rounding error.

    ``value_noise`` is the error of each value of f relative to the largest one.
    """
    points, stencil = _stencil(alpha, spacing)
    values = np.asarray(f(points), dtype=float).ravel()
    terms = stencil * values
    roundoff = (stencil.size + 8) * np.finfo(float).eps * np.abs(terms).sum()
    roundoff += value_noise * np.abs(values).max() * np.abs(stencil).sum()
    return float(terms.sum()), float(roundoff)


def _check_stencil(
    alpha: Sequence[int],
    spacing: float | Sequence[float],
    reach: Optional[float | Sequence[float]],
) -> tuple[MultiIndex, tuple[float, ...], Optional[tuple[float, ...]]]:
    alpha = MultiIndex(alpha)
    if min(alpha) < 0:
        raise ConfigError(f"Derivative orders must be non-negative, got {alpha}")
    n = alpha.n
    spacing = _per_axis(spacing, n, "stencil spacing")
    if any(h <= 0 for h in spacing):
        raise ConfigError(f"Stencil spacing must be positive, got {spacing}")
    if reach is not None:
        reach = _per_axis(reach, n, "stencil reach")
        for axis, (a, h) in enumerate(zip(alpha, spacing)):
            if a * h / 2 > reach[axis] * (1 + _LATTICE_TOL):
                raise ConfigError(
                    f"Stencil of order {a} with step {h} exceeds the grid along"
                    f" axis {axis + 1} (reach {reach[axis]})"
                )
    return alpha, spacing, reach


def central_difference(
    f: GridFunction,
    alpha: Sequence[int],
    spacing: float | Sequence[float],
    reach: Optional[float | Sequence[float]] = None,
) -> float:
    """Tensor-product central difference quotient of order alpha at the origin.

    Along axis j the stencil has nodes (alpha_j / 2 - i) h_j for i = 0..alpha_j
    with weights (-1)^i C(alpha_j, i) / h_j^alpha_j.

    Parameters
    ----------
    f : Callable
        Function of an (N, n) array of points returning N values
    alpha : Sequence[int]
        Non-negative derivative orders
    spacing : float or Sequence[float]
        Stencil step h_j, one per axis or shared
    reach : float or Sequence[float], optional
        Largest distance from the origin at which f may be evaluated, per axis

    Raises
    ------
    pnn.exceptions.ConfigError
        If the stencil does not fit within ``reach``.
    """
    alpha, spacing, reach = _check_stencil(alpha, spacing, reach)
    points, stencil = _stencil(alpha, spacing)
    values = np.asarray(f(points), dtype=float).ravel()
    return float(np.dot(stencil, values))


def estimate_derivative(
    f: GridFunction,
    alpha: Sequence[int],
    spacing: float | Sequence[float],
    reach: Optional[float | Sequence[float]] = None,
    value_noise: float = DEFAULT_VALUE_NOISE,
) -> DerivativeEstimate:
    """Central difference quotient at the step with the smallest error bound.

    The steps tried are ``spacing * 2^k`` for k = 0..MAX_STEP_DOUBLINGS - 1, as
    long as the doubled stencil fits within ``reach``. The error at step h is
    bounded by the change of the quotient from h to 2h plus the rounding errors
    of both. The bound holds when the Taylor terms of f beyond order alpha share
    one sign. It is infinite when no doubled stencil fits.

    Raises
    ------
    pnn.exceptions.ConfigError
        If the stencil at ``spacing`` does not fit within ``reach``.
    """
    alpha, spacing, reach = _check_stencil(alpha, spacing, reach)
    fine = _apply_stencil(f, alpha, spacing, value_noise)
    best = DerivativeEstimate(value=fine[0], error=math.inf, step_scale=1)
    for k in range(1, MAX_STEP_DOUBLINGS + 1):
        coarse_spacing = tuple(h * 2**k for h in spacing)
        if reach is not None and not _stencil_fits(alpha, coarse_spacing, reach):
            break
        coarse = _apply_stencil(f, alpha, coarse_spacing, value_noise)
        error = abs(coarse[0] - fine[0]) + 2 * fine[1] + coarse[1]
        if error < best.error:
            best = DerivativeEstimate(
                value=fine[0], error=error, step_scale=2 ** (k - 1)
            )
        fine = coarse
    return best


@dataclass(frozen=True)
class StencilLattice:
    """Values of a function on the lattice of half stencil steps around the origin.

    Node k along axis j sits at k * half_steps[j] for |k| <= radius[j].
    """

    half_steps: tuple[float, ...]
    radius: tuple[int, ...]
    values: np.ndarray

    @property
    def reach(self) -> tuple[float, ...]:
        return tuple(k * h for k, h in zip(self.radius, self.half_steps))

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        half_steps = np.array(self.half_steps)
        positions = points / half_steps
        nodes = np.rint(positions).astype(int)
        if np.any(np.abs(positions - nodes) > 1e-6):
            raise DataError("Stencil points must lie on the lattice")
        if np.any(np.abs(nodes) > np.array(self.radius)):
            raise ConfigError("Stencil points fall outside the resampled grid")
        return self.values[tuple((nodes + np.array(self.radius)).T)]


def resample_to_lattice(
    density: DensityGrid, stencil_step: float | Sequence[float]
) -> StencilLattice:
    """Resample ln(1/p0) from a density grid onto a stencil lattice at the origin.

    Cubic interpolating splines are applied axis by axis.
    """
    grid = density.grid
    steps = _per_axis(stencil_step, grid.n, "stencil step")
    half_steps, radius = [], []
    for axis in range(grid.n):
        centers = grid.centers(axis)
        if centers.size < 4:
            raise DataError(
                f"Need at least 4 cells along axis {axis + 1}, got {centers.size}"
            )
        if not centers[0] <= 0 <= centers[-1]:
            raise DataError(
                f"The origin lies outside the grid along axis {axis + 1}"
                f" ([{grid.lower[axis]}, {grid.upper[axis]}])"
            )
        half = max(steps[axis], grid.spacing[axis]) / 2
        half_steps.append(half)
        reach = min(-centers[0], centers[-1])
        radius.append(int(math.floor(reach / half + _LATTICE_TOL)))

    values = density.log_reciprocal()
    for axis in range(grid.n):
        nodes = half_steps[axis] * np.arange(-radius[axis], radius[axis] + 1)
        spline = make_interp_spline(grid.centers(axis), values, k=3, axis=axis)
        values = spline(nodes)
    return StencilLattice(
        half_steps=tuple(half_steps), radius=tuple(radius), values=values
    )


def _check_dictionary(dictionary: Dictionary):
    if dictionary.mode != Mode.MOMENT:
        raise ConfigError(
            f"Expected a moment-mode dictionary, got {dictionary.mode.value}"
        )
    if dictionary.max_component > MAX_COMPONENT:
        raise ConfigError(
            f"Moment indexes are limited to components <= {MAX_COMPONENT}"
            f", got {dictionary.max_component}"
        )


def learn_moment_function(
    log_reciprocal: GridFunction,
    dictionary: Dictionary,
    stencil_step: float | Sequence[float] = DEFAULT_STENCIL_STEP,
    reach: Optional[float | Sequence[float]] = None,
    rtol: float = MOMENT_RTOL,
    atol: float = MOMENT_ATOL,
    value_noise: float = DEFAULT_VALUE_NOISE,
    logger: Optional[logging.Logger] = None,
) -> NeuronSet:
    """Taylor neurons y_alpha = D^alpha ln(1/p)(0) / alpha! of a callable ln(1/p).

    Each derivative comes from :func:`estimate_derivative`. A neuron whose error
    bound exceeds ``rtol * |y_alpha| + atol`` is dropped with a warning, which
    leaves its coefficient at 0.
    """
    if logger is None:
        logger = get_logger("learn_moment_function")
    _check_dictionary(dictionary)
    n = dictionary.n
    origin = np.zeros((1, n))
    coefficients = {}
    dropped = []
    for index in dictionary:
        if index.is_zero:
            coefficients[index] = float(np.ravel(log_reciprocal(origin))[0])
            continue
        factorial = math.prod(math.factorial(a) for a in index)
        estimate = estimate_derivative(
            log_reciprocal, index, stencil_step, reach=reach, value_noise=value_noise
        )
        value = estimate.value / factorial
        error = estimate.error / factorial
        if not error <= rtol * abs(value) + atol:
            logger.debug(
                f"Dropping neuron {tuple(index)}: {value:.6g} +/- {error:.3g}"
            )
            dropped.append(index)
            continue
        coefficients[index] = value

    if dropped:
        n_neurons = sum(1 for index in dictionary if not index.is_zero)
        logger.warning(
            f"Dropped {len(dropped)} of {n_neurons} moment neurons whose difference"
            f" quotients are not accurate to {rtol:g} (lowest order"
            f" {min(index.order for index in dropped)})"
        )
    return NeuronSet(mode=Mode.MOMENT, n=n, coefficients=coefficients)


def learn_moment_grid(
    density: DensityGrid,
    dictionary: Dictionary,
    stencil_step: float = DEFAULT_STENCIL_STEP,
    logger: Optional[logging.Logger] = None,
) -> NeuronSet:
    """Moment learning from a density grid.

    ln(1/p0) is resampled onto a uniform lattice around the origin whose step is
    the larger of ``stencil_step`` and the grid spacing; the direct current is
    the resampled value at the origin.
    """
    if logger is None:
        logger = get_logger("learn_moment_grid")
    _check_dictionary(dictionary)
    if density.grid.n != dictionary.n:
        raise DataError(
            f"Density dimension {density.grid.n} does not match the dictionary"
            f" ({dictionary.n})"
        )

    n_nonpositive = int(np.sum(density.values <= 0))
    if n_nonpositive > 0:
        logger.warning(
            f"{n_nonpositive} density cells are non-positive"
            f" and were clamped to {LOG_FLOOR}"
        )

    lattice = resample_to_lattice(density, stencil_step)
    logger.debug(
        f"Stencil lattice: half steps {lattice.half_steps}, reach {lattice.reach}"
    )
    steps = tuple(2 * h for h in lattice.half_steps)
    return learn_moment_function(
        lattice, dictionary, steps, reach=lattice.reach, logger=logger
    )


@dataclass(frozen=True)
class SpacingVectors:
    """Spacing vectors h_k between ordered samples."""

    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if vectors.shape[0] == 0:
            raise DataError("At least two samples are needed for spacing vectors")
        object.__setattr__(self, "vectors", vectors)

    @staticmethod
    def _check_samples(samples) -> np.ndarray:
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 1:
            samples = samples.reshape(-1, 1)
        if samples.shape[0] < 2:
            raise DataError(
                f"At least two samples are needed for spacing vectors"
                f", got {samples.shape[0]}"
            )
        for axis in range(samples.shape[1]):
            column = samples[:, axis]
            if not column.min() < 0 <= column.max():
                raise DataError(
                    f"Samples along axis {axis + 1} do not cover the origin"
                    f" (range [{column.min()}, {column.max()}])"
                )
        return samples

    @classmethod
    def from_samples(cls, samples) -> SpacingVectors:
        """Gaps between consecutive sorted coordinates, axis by axis."""
        samples = cls._check_samples(samples)
        return cls(vectors=np.diff(np.sort(samples, axis=0), axis=0))

    @classmethod
    def from_trajectory(cls, samples) -> SpacingVectors:
        """Differences between consecutive states of a time-ordered trajectory."""
        samples = cls._check_samples(samples)
        return cls(vectors=np.diff(samples, axis=0))

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1)


def moment_learning_rate(spacing: SpacingVectors) -> float:
    """Reciprocal of the longest nonzero spacing vector."""
    norms = spacing.norms
    norms = norms[norms > 0]
    if norms.size == 0:
        raise DataError("All samples coincide: no nonzero spacing")
    return 1.0 / float(norms.max())
