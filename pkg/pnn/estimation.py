"""Estimation with learned neurons: likelihoods, active paths and their topology."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pnn.exceptions import ConfigError, NumericError
from pnn.indexes import Dictionary, Mode, MultiIndex, basis_values, check_torus
from pnn.neurons import NeuronSet, check_dimension


def _signal(neurons: NeuronSet, x: Sequence[float]) -> np.ndarray:
    x = check_dimension(neurons, x)
    if neurons.mode == Mode.FREQUENCY:
        check_torus(x)
    return x


def energy_at(neurons: NeuronSet, x: Sequence[float]) -> float:
    """Energy E(x; y) at a single signal, without the DC term."""
    return float(neurons.energy(_signal(neurons, x).reshape(1, -1))[0])


def likelihood(neurons: NeuronSet, x: Sequence[float]) -> float:
    """Network probability exp(-E(x; y) - dc) of a signal."""
    return math.exp(-energy_at(neurons, x) - neurons.dc)


def _projections(
    neurons: NeuronSet, x: np.ndarray, indexes: Sequence[MultiIndex]
) -> np.ndarray:
    """Cell entries times evaluation vector entries at x.

    Frequency cells hold y_alpha and moment cells hold -y_alpha.
    """
    if len(indexes) == 0:
        return np.zeros(0, dtype=complex)
    basis = basis_values(x.reshape(1, -1), np.array(indexes), neurons.mode)[0]
    coefficients = np.array([neurons[index] for index in indexes], dtype=complex)
    if neurons.mode == Mode.MOMENT:
        coefficients = -coefficients
    return coefficients * basis


@dataclass(frozen=True)
class ActivePath:
    """Active indexes of a signal, in ascending index order."""

    signal: tuple[float, ...]
    mode: Mode
    indexes: tuple[MultiIndex, ...]
    projections: tuple[complex, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.indexes)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indexes)

    def cells(self) -> dict[int, list[MultiIndex]]:
        """Active indexes grouped by total order."""
        cells: dict[int, list[MultiIndex]] = {}
        for index in self.indexes:
            cells.setdefault(index.order, []).append(index)
        return cells


def active_path(
    neurons: NeuronSet, x: Sequence[float], dictionary: Optional[Dictionary] = None
) -> ActivePath:
    """Indexes whose projection has a strictly negative real part.

    The zero index never takes part. With a dictionary, the path is restricted
    to the indexes it contains.
    """
    x = _signal(neurons, x)
    if dictionary is not None:
        if dictionary.mode != neurons.mode:
            raise ConfigError(
                f"Dictionary mode {dictionary.mode.value} does not match the"
                f" neurons ({neurons.mode.value})"
            )
        if dictionary.n != neurons.n:
            raise ConfigError(
                f"Dictionary dimension {dictionary.n} does not match the neurons"
                f" ({neurons.n})"
            )
        neurons = neurons.restricted(dictionary)
    candidates = list(neurons.neurons)
    projections = _projections(neurons, x, candidates)
    active = [
        (index, value)
        for index, value in zip(candidates, projections)
        if value.real < 0
    ]
    return ActivePath(
        signal=tuple(float(v) for v in x),
        mode=neurons.mode,
        indexes=tuple(index for index, _ in active),
        projections=tuple(complex(value) for _, value in active),
    )


def poan(neurons: NeuronSet, x: Sequence[float], path: ActivePath) -> list[float]:
    """Probability of active neurons for each index of a path.

    Frequency mode gives -Re(v) / |v| for each projection v; moment mode gives 1.
    """
    if neurons.mode == Mode.MOMENT:
        return [1.0] * len(path)
    x = _signal(neurons, x)
    projections = _projections(neurons, x, list(path.indexes))
    values = []
    for index, value in zip(path.indexes, projections):
        modulus = abs(value)
        if modulus == 0:
            raise NumericError(f"Active index {tuple(index)} has a zero projection")
        values.append(-value.real / modulus)
    return values


@dataclass(frozen=True)
class TopoStats:
    """Pair counts N(k) at l1 distance k, with per-component moments of the pairs."""

    counts: dict[int, int]
    means: dict[int, tuple[float, ...]]
    variances: dict[int, tuple[float, ...]]

    def count(self, k: int) -> int:
        return self.counts.get(k, 0)

    def to_dict(self) -> dict:
        return {
            "counts": {str(k): v for k, v in self.counts.items()},
            "means": {str(k): list(v) for k, v in self.means.items()},
            "variances": {str(k): list(v) for k, v in self.variances.items()},
        }


def l1_distance(alpha: Sequence[int], beta: Sequence[int]) -> int:
    return int(sum(abs(a - b) for a, b in zip(alpha, beta)))


def topo_stats(path: ActivePath | Sequence[Sequence[int]]) -> TopoStats:
    """Count unordered pairs of distinct active indexes at each l1 distance.

    For each realized distance k, means and population variances are taken per
    component over both ends of every pair at distance k.
    """
    indexes = sorted(set(MultiIndex(index) for index in path))
    endpoints: dict[int, list[MultiIndex]] = {}
    counts: dict[int, int] = {}
    for alpha, beta in itertools.combinations(indexes, 2):
        k = l1_distance(alpha, beta)
        counts[k] = counts.get(k, 0) + 1
        endpoints.setdefault(k, []).extend([alpha, beta])

    means, variances = {}, {}
    for k in sorted(endpoints):
        components = np.array(endpoints[k], dtype=float)
        means[k] = tuple(components.mean(axis=0).tolist())
        variances[k] = tuple(components.var(axis=0).tolist())
    return TopoStats(
        counts=dict(sorted(counts.items())), means=means, variances=variances
    )


class EstimationReport(BaseModel):
    """One estimation result, written as a JSON line."""

    model_config = ConfigDict(extra="forbid")

    signal: list[float] = Field(description="Signal x")
    likelihood: float = Field(description="Network probability p(x|y)")
    active_path: list[list[int]] = Field(description="Active indexes on the dictionary")
    poan: list[float] = Field(description="Probability of each active neuron")
    topo: dict = Field(description="Pair counts, means and variances per distance")


def estimate(
    neurons: NeuronSet, x: Sequence[float], dictionary: Optional[Dictionary] = None
) -> EstimationReport:
    """Run the full estimation of a signal."""
    path = active_path(neurons, x, dictionary)
    return EstimationReport(
        signal=list(path.signal),
        likelihood=likelihood(neurons, x),
        active_path=[list(index) for index in path.indexes],
        poan=poan(neurons, x, path),
        topo=topo_stats(path).to_dict(),
    )
