"""Numerical checks on learned neurons."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from pnn.density import DensityGrid, GridSpec
from pnn.indexes import Dictionary, MultiIndex, project_grid
from pnn.learning.frequency import (
    SampleWeights,
    as_samples,
    check_weights,
    connection_matrix,
    log_partition_function,
)
from pnn.neurons import NeuronSet

__all__ = [
    "connection_residuals",
    "energy_bounds",
    "log_partition_function",
    "network_density",
    "stationarity_residuals",
]


def network_density(neurons: NeuronSet, grid: GridSpec) -> DensityGrid:
    """Network probability exp(-E(x; y) - dc) tabulated on a grid."""
    energy = neurons.energy_grid(grid)
    return DensityGrid(grid=grid, values=np.exp(-energy - neurons.dc))


def stationarity_residuals(
    density: DensityGrid, neurons: NeuronSet, dictionary: Dictionary
) -> dict[MultiIndex, float]:
    """|E_p0(basis_alpha) - E_p(basis_alpha)| per index, by grid quadrature."""
    grid = density.grid
    model = network_density(neurons, grid)
    indexes = dictionary.index_array
    governing = project_grid(density.values, grid.axes, indexes, dictionary.mode)
    network = project_grid(model.values, grid.axes, indexes, dictionary.mode)
    residuals = np.abs(governing - network) * grid.cell_volume
    return dict(zip(dictionary.indexes, residuals.tolist()))


def energy_bounds(density: DensityGrid, neurons: NeuronSet) -> tuple[float, float]:
    """Smallest and largest value of ln(1/p0) - dc over the grid."""
    shifted = density.log_reciprocal() - neurons.dc
    return float(shifted.min()), float(shifted.max())


def connection_residuals(
    samples,
    weights: SampleWeights,
    neurons: NeuronSet,
    dictionary: Dictionary,
    alphas: Optional[Sequence[Sequence[int]]] = None,
) -> dict[MultiIndex, float]:
    """|sum_gamma Upsilon_alpha(gamma) y_gamma - y_alpha|, gamma over the dictionary."""
    samples = as_samples(samples)
    check_weights(samples, weights)
    alphas = dictionary.indexes if alphas is None else [MultiIndex(a) for a in alphas]
    upsilon = connection_matrix(samples, weights, alphas, dictionary)
    learned = np.array([neurons[gamma] for gamma in dictionary.indexes])
    combined = upsilon @ learned
    residuals = np.abs(combined - np.array([neurons[alpha] for alpha in alphas]))
    return dict(zip(alphas, residuals.tolist()))
