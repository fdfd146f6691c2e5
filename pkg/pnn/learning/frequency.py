"""Frequency learning: Fourier neurons of ln(1/p) on the torus [-1, 1)^n."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from pnn.density import DensityGrid, GridSpec
from pnn.exceptions import ConfigError, DataError, NumericError
from pnn.indexes import (
    Dictionary,
    Mode,
    MultiIndex,
    axis_kernel,
    check_torus,
    index_array,
    project_grid,
)
from pnn.logger import get_logger
from pnn.neurons import NeuronSet
from pnn.utils import LOG_FLOOR, TORUS_LOWER, TORUS_UPPER

WEIGHT_SUM_TOL = 1e-9
ZERO_VARIANCE_TOL = 1e-15
MAX_LOG_PARTITION = 700.0
_CHUNK_SIZE = 512
_ROW_BUDGET = 4_000_000


def _check_mode(dictionary: Dictionary, mode: Mode):
    if dictionary.mode != mode:
        raise ConfigError(
            f"Expected a {mode.value}-mode dictionary, got {dictionary.mode.value}"
        )


def as_samples(samples) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples.reshape(-1, 1)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise DataError(
            f"Expected a non-empty (m, n) sample array, got {samples.shape}"
        )
    return samples


@dataclass(frozen=True)
class SampleWeights:
    """Per-sample volumes that partition the torus, summing to 2^n."""

    volumes: np.ndarray
    n: int

    def __post_init__(self):
        volumes = np.asarray(self.volumes, dtype=float).ravel()
        if volumes.size == 0:
            raise DataError("Sample weights cannot be empty")
        if not np.all(np.isfinite(volumes)) or np.any(volumes <= 0):
            raise DataError("Sample volumes must be positive and finite")
        total = 2.0**self.n
        if abs(volumes.sum() - total) > WEIGHT_SUM_TOL * total:
            raise DataError(
                f"Sample volumes must sum to {total}, got {volumes.sum()}"
            )
        volumes.setflags(write=False)
        object.__setattr__(self, "volumes", volumes)

    @property
    def m(self) -> int:
        return self.volumes.size

    @classmethod
    def uniform(cls, m: int, n: int) -> SampleWeights:
        """Equal volumes 2^n / m."""
        if m < 1:
            raise DataError(f"Need at least one sample, got {m}")
        return cls(volumes=np.full(m, 2.0**n / m), n=n)

    @classmethod
    def voronoi(cls, samples) -> SampleWeights:
        """Products of per-axis Voronoi lengths, renormalized to total 2^n.

        Along each axis the distinct sample values split [-1, 1] at the midpoints
        between neighbours; samples sharing a value share its length.
        """
        samples = as_samples(samples)
        if np.any(samples < TORUS_LOWER) or np.any(samples > TORUS_UPPER):
            raise DataError("Samples must lie in [-1, 1] to build Voronoi weights")

        m, n = samples.shape
        volumes = np.ones(m)
        for axis in range(n):
            unique, inverse, counts = np.unique(
                samples[:, axis], return_inverse=True, return_counts=True
            )
            edges = np.concatenate(
                [[TORUS_LOWER], (unique[1:] + unique[:-1]) / 2, [TORUS_UPPER]]
            )
            lengths = np.diff(edges) / counts
            volumes *= lengths[inverse]
        return cls(volumes=volumes * (2.0**n / volumes.sum()), n=n)


def check_weights(samples: np.ndarray, weights: SampleWeights):
    if weights.m != samples.shape[0]:
        raise DataError(
            f"Got {samples.shape[0]} samples but {weights.m} sample volumes"
        )
    if weights.n != samples.shape[1]:
        raise DataError(
            f"Sample volumes are for dimension {weights.n}"
            f", samples have dimension {samples.shape[1]}"
        )


def weighted_basis_sums(
    samples: np.ndarray, values: np.ndarray, indexes: np.ndarray
) -> np.ndarray:
    """Sum over samples of conj(omega_alpha(x_k)) * values_k, for each index."""
    indexes = np.atleast_2d(np.asarray(indexes, dtype=int))
    n = samples.shape[1]
    # per-axis factors exp(-i pi a x) for every component value in use
    offsets = indexes.min(axis=0)
    kernels = [
        axis_kernel(
            samples[:, axis],
            np.arange(offsets[axis], indexes[:, axis].max() + 1),
            Mode.FREQUENCY,
        ).conj()
        for axis in range(n)
    ]
    sums = np.empty(indexes.shape[0], dtype=complex)
    for start in range(0, indexes.shape[0], _CHUNK_SIZE):
        chunk = indexes[start : start + _CHUNK_SIZE] - offsets
        factors = kernels[0][:, chunk[:, 0]]
        for axis in range(1, n):
            factors = factors * kernels[axis][:, chunk[:, axis]]
        sums[start : start + _CHUNK_SIZE] = values @ factors
    return sums


def learn_frequency_grid(
    density: DensityGrid,
    dictionary: Dictionary,
    logger: Optional[logging.Logger] = None,
) -> NeuronSet:
    """Fourier coefficients of ln(1/p0) by the midpoint rule on a density grid."""
    if logger is None:
        logger = get_logger("learn_frequency_grid")
    _check_mode(dictionary, Mode.FREQUENCY)
    grid = density.grid
    if grid.n != dictionary.n:
        raise DataError(
            f"Density dimension {grid.n} does not match the dictionary ({dictionary.n})"
        )

    n_nonpositive = int(np.sum(density.values <= 0))
    if n_nonpositive > 0:
        logger.warning(
            f"{n_nonpositive} density cells are non-positive"
            f" and were clamped to {LOG_FLOOR}"
        )

    log_reciprocal = density.log_reciprocal()
    sums = project_grid(
        log_reciprocal,
        grid.axes,
        dictionary.index_array,
        Mode.FREQUENCY,
        conjugate=True,
    )
    coefficients = sums * grid.cell_volume / 2.0**grid.n
    return NeuronSet(
        mode=Mode.FREQUENCY,
        n=grid.n,
        coefficients=dict(zip(dictionary.indexes, coefficients)),
    )


def learn_frequency_samples(
    samples,
    weights: SampleWeights,
    log_density_values,
    dictionary: Dictionary,
) -> NeuronSet:
    """Discrete neurons (1/2^n) sum_k conj(omega_alpha(x_k)) ln(1/p0(x_k)) Delta_k.

    ``log_density_values`` holds ln(1/p0) at each sample.
    """
    _check_mode(dictionary, Mode.FREQUENCY)
    samples = check_torus(as_samples(samples))
    check_weights(samples, weights)
    log_density_values = np.asarray(log_density_values, dtype=float).ravel()
    if log_density_values.size != samples.shape[0]:
        raise DataError(
            f"Got {samples.shape[0]} samples but {log_density_values.size}"
            " log-density values"
        )
    if samples.shape[1] != dictionary.n:
        raise DataError(
            f"Sample dimension {samples.shape[1]} does not match the dictionary"
            f" ({dictionary.n})"
        )

    sums = weighted_basis_sums(
        samples, log_density_values * weights.volumes, dictionary.index_array
    )
    return NeuronSet(
        mode=Mode.FREQUENCY,
        n=dictionary.n,
        coefficients=dict(zip(dictionary.indexes, sums / 2.0**dictionary.n)),
    )


def _connections(
    samples: np.ndarray, weights: SampleWeights, differences: np.ndarray
) -> np.ndarray:
    return weighted_basis_sums(samples, weights.volumes, differences) / 2.0 ** (
        samples.shape[1]
    )


def connection_upsilon(
    samples,
    weights: SampleWeights,
    alpha: Sequence[int],
    gamma: Sequence[int],
) -> complex:
    """Connection (1/2^n) sum_k conj(omega_{alpha - gamma}(x_k)) Delta_k."""
    samples = as_samples(samples)
    check_weights(samples, weights)
    difference = MultiIndex(alpha) - MultiIndex(gamma)
    if difference.n != samples.shape[1]:
        raise DataError(
            f"Index dimension {difference.n} does not match the samples"
            f" ({samples.shape[1]})"
        )
    return complex(_connections(samples, weights, index_array([difference]))[0])


def connection_matrix(
    samples,
    weights: SampleWeights,
    alphas: Sequence[Sequence[int]],
    dictionary: Dictionary,
) -> np.ndarray:
    """Connections for each alpha (rows) and each dictionary index gamma (columns)."""
    samples = as_samples(samples)
    check_weights(samples, weights)
    alphas = index_array(alphas, n=dictionary.n)
    gammas = dictionary.index_array
    differences = (alphas[:, None, :] - gammas[None, :, :]).reshape(-1, dictionary.n)
    unique, inverse = np.unique(differences, axis=0, return_inverse=True)
    values = _connections(samples, weights, unique)
    return values[inverse.ravel()].reshape(len(alphas), len(gammas))


def frequency_learning_rate(
    samples,
    weights: SampleWeights,
    dictionary: Dictionary,
    logger: Optional[logging.Logger] = None,
) -> float:
    """Reciprocal of the largest connection variance over the dictionary.

    For each alpha the variance is taken over gamma in the dictionary, as the
    mean of |Upsilon|^2 minus the squared modulus of the mean. Returns
    ``math.inf`` when every variance vanishes.
    """
    if logger is None:
        logger = get_logger("frequency_learning_rate")
    _check_mode(dictionary, Mode.FREQUENCY)
    if len(dictionary) < 2:
        raise ConfigError("The learning rate needs a dictionary with nonzero indexes")

    samples = as_samples(samples)
    check_weights(samples, weights)
    indexes = dictionary.index_array
    n_indexes = len(indexes)

    # connections depend on alpha - gamma only: tabulate them on the difference box
    span = indexes.max(axis=0) - indexes.min(axis=0)
    ranges = [np.arange(-s, s + 1) for s in span]
    box = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(
        -1, dictionary.n
    )
    table = _connections(samples, weights, box).reshape(
        tuple(2 * s + 1 for s in span)
    )

    max_variance = 0.0
    chunk_size = max(1, _ROW_BUDGET // n_indexes)
    for start in range(0, n_indexes, chunk_size):
        differences = (
            indexes[start : start + chunk_size, None, :] - indexes[None, :, :] + span
        )
        upsilon = table[tuple(np.moveaxis(differences, -1, 0))]
        variances = np.mean(np.abs(upsilon) ** 2, axis=1) - np.abs(
            np.mean(upsilon, axis=1)
        ) ** 2
        max_variance = max(max_variance, float(variances.max()))
    logger.debug(f"Largest connection variance: {max_variance}")
    if max_variance <= ZERO_VARIANCE_TOL:
        logger.warning("All connection variances vanish: learning rate is infinite")
        return math.inf
    return 1.0 / max_variance


def log_partition_function(
    neurons: NeuronSet, bins_per_axis: int | Sequence[int]
) -> float:
    """ln Z by the midpoint rule over the torus, evaluated in the log domain."""
    grid = GridSpec.torus(neurons.n, bins_per_axis)
    energy = neurons.energy_grid(grid)
    return float(logsumexp(-energy) + math.log(grid.cell_volume))


def partition_function(neurons: NeuronSet, bins_per_axis: int | Sequence[int]) -> float:
    """Z = integral of exp(-E(x; y)) over the torus [-1, 1)^n."""
    log_z = log_partition_function(neurons, bins_per_axis)
    if log_z > MAX_LOG_PARTITION:
        raise NumericError(f"Partition function overflows: ln Z = {log_z}")
    return math.exp(log_z)


def truncate_energy(neurons: NeuronSet, max_order: int) -> tuple[NeuronSet, float]:
    """Truncate to total order ``max_order`` and bound the L1 error of exp(-E).

    The bound is (exp(sum of |y_alpha| over the dropped neurons) - 1) * exp(dc),
    where dc stands for ln Z.
    """
    if max_order < 0:
        raise ConfigError(f"Truncation order must be non-negative, got {max_order}")
    tail = neurons.l1_tail(max_order)
    return neurons.truncated(max_order), math.expm1(tail) * math.exp(neurons.dc)
