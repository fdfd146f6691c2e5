"""Learned neuron sets and their JSON files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from pnn.density import GridSpec
from pnn.exceptions import DataError, NumericError
from pnn.indexes import (
    Dictionary,
    Mode,
    MultiIndex,
    basis_values,
    check_torus,
    index_array,
    synthesize_grid,
)
from pnn.utils import FIELD_DESCRIPTION_MAP, StrOrPathLike, load_json

IMAGINARY_TOL = 1e-9


class NeuronEntry(BaseModel):
    """One neuron in a neuron file."""

    model_config = ConfigDict(extra="forbid")

    index: list[int] = Field(description=FIELD_DESCRIPTION_MAP["index"])
    re: float = Field(description="Real part of the coefficient")
    im: float = Field(default=0.0, description="Imaginary part of the coefficient")


class NeuronFile(BaseModel):
    """JSON schema of a learned neuron set. The zero index is stored as ``dc``."""

    model_config = ConfigDict(extra="forbid")

    mode: Mode = Field(description=FIELD_DESCRIPTION_MAP["mode"])
    n: int = Field(description=FIELD_DESCRIPTION_MAP["n"])
    dc: float = Field(description=FIELD_DESCRIPTION_MAP["dc"])
    neurons: list[NeuronEntry] = Field(
        default=[], description="Nonzero-index neurons, in ascending index order"
    )


@dataclass(frozen=True)
class NeuronSet:
    """Coefficients of ln(1/p) in the Fourier or power basis.

    The zero index is kept in ``coefficients`` and holds the direct current.
    """

    mode: Mode
    n: int
    coefficients: Mapping[MultiIndex, complex]

    def __post_init__(self):
        mode = Mode(self.mode)
        coefficients = {}
        for index, value in self.coefficients.items():
            index = MultiIndex(index)
            if index.n != self.n:
                raise DataError(
                    f"Neuron index {tuple(index)} does not have dimension {self.n}"
                )
            value = complex(value)
            if mode == Mode.MOMENT:
                if min(index) < 0:
                    raise DataError(
                        f"Moment neurons cannot have negative components: {index}"
                    )
                if abs(value.imag) > IMAGINARY_TOL * max(1.0, abs(value.real)):
                    raise DataError(
                        f"Moment neuron {tuple(index)} has an imaginary part: {value}"
                    )
                value = complex(value.real, 0.0)
            coefficients[index] = value
        coefficients.setdefault(MultiIndex.zero(self.n), 0j)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(
            self, "coefficients", dict(sorted(coefficients.items()))
        )

    @classmethod
    def from_energy_terms(
        cls,
        mode: Mode,
        n: int,
        dc: float,
        terms: Mapping[Sequence[int], complex],
    ) -> NeuronSet:
        """Build a neuron set from the terms of an energy function and its dc."""
        coefficients = {MultiIndex(index): value for index, value in terms.items()}
        coefficients[MultiIndex.zero(n)] = dc
        return cls(mode=mode, n=n, coefficients=coefficients)

    @property
    def dc(self) -> float:
        """Direct current, the zero-index coefficient."""
        return self.coefficients[MultiIndex.zero(self.n)].real

    @property
    def neurons(self) -> dict[MultiIndex, complex]:
        """Coefficients of the nonzero indexes."""
        return {
            index: value
            for index, value in self.coefficients.items()
            if not index.is_zero
        }

    @property
    def max_order(self) -> int:
        return max(index.order for index in self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, index: Sequence[int]) -> complex:
        return self.coefficients.get(MultiIndex(index), 0j)

    def index_array(self) -> np.ndarray:
        """Nonzero indexes as an integer array of shape (K, n)."""
        return index_array(self.neurons, n=self.n)

    def coefficient_array(self) -> np.ndarray:
        """Nonzero-index coefficients, aligned with ``index_array``."""
        return np.array(list(self.neurons.values()), dtype=complex)

    def is_conjugate_symmetric(self, tol: float = 1e-10) -> bool:
        """Whether y_{-alpha} = conj(y_alpha) for every stored index."""
        for index, value in self.coefficients.items():
            if abs(self[-index] - np.conj(value)) > tol:
                return False
        return True

    def _real_energy(self, values: np.ndarray) -> np.ndarray:
        if values.size:
            residue = np.abs(values.imag).max()
            if residue > IMAGINARY_TOL * max(1.0, np.abs(values.real).max()):
                raise NumericError(
                    f"Energy has an imaginary residue of {residue:.3g}"
                    "; the neuron set is not conjugate-symmetric"
                )
        return values.real

    def energy(self, points) -> np.ndarray:
        """Energy E(x; y) at (N, n) points, excluding the DC term."""
        points = np.asarray(points, dtype=float).reshape(-1, self.n)
        if self.mode == Mode.FREQUENCY:
            check_torus(points)
        if len(self.neurons) == 0:
            return np.zeros(points.shape[0])
        values = basis_values(points, self.index_array(), self.mode)
        return self._real_energy(values @ self.coefficient_array())

    def energy_grid(self, grid: GridSpec) -> np.ndarray:
        """Energy at every cell center of a grid, as an array of grid shape."""
        if grid.n != self.n:
            raise DataError(
                f"Grid dimension {grid.n} does not match the neurons ({self.n})"
            )
        values = synthesize_grid(
            self.coefficient_array(), self.index_array(), grid.axes, self.mode
        )
        return self._real_energy(np.asarray(values))

    def truncated(self, max_order: int) -> NeuronSet:
        """Keep the neurons with total order at most ``max_order``."""
        return NeuronSet(
            mode=self.mode,
            n=self.n,
            coefficients={
                index: value
                for index, value in self.coefficients.items()
                if index.order <= max_order
            },
        )

    def l1_tail(self, max_order: int) -> float:
        """Sum of |y_alpha| over the neurons with total order above ``max_order``."""
        return float(
            sum(
                abs(value)
                for index, value in self.coefficients.items()
                if index.order > max_order
            )
        )

    def restricted(self, dictionary: Dictionary) -> NeuronSet:
        """Keep the neurons whose index is in a dictionary."""
        return NeuronSet(
            mode=self.mode,
            n=self.n,
            coefficients={
                index: value
                for index, value in self.coefficients.items()
                if index in dictionary
            },
        )

    def to_file_model(self) -> NeuronFile:
        return NeuronFile(
            mode=self.mode,
            n=self.n,
            dc=self.dc,
            neurons=[
                NeuronEntry(index=list(index), re=value.real, im=value.imag)
                for index, value in self.neurons.items()
            ],
        )

    @classmethod
    def from_file_model(cls, data: NeuronFile) -> NeuronSet:
        terms = {}
        for entry in data.neurons:
            index = MultiIndex(entry.index)
            if index.is_zero:
                raise DataError("The zero index must be stored as 'dc'")
            if index in terms:
                raise DataError(f"Duplicate neuron index {entry.index}")
            terms[index] = complex(entry.re, entry.im)
        return cls.from_energy_terms(data.mode, data.n, data.dc, terms)

    def save(self, fpath: StrOrPathLike, **kwargs):
        """Save the neuron set to a JSON file."""
        fpath = Path(fpath)
        if "indent" not in kwargs:
            kwargs["indent"] = 4
        fpath.parent.mkdir(parents=True, exist_ok=True)
        with open(fpath, "w") as file:
            file.write(self.to_file_model().model_dump_json(**kwargs))

    @classmethod
    def load(cls, fpath: StrOrPathLike) -> NeuronSet:
        try:
            return cls.from_file_model(NeuronFile(**load_json(fpath)))
        except ValidationError as exception:
            raise DataError(f"Invalid neuron file {fpath}: {exception}")

    def __str__(self) -> str:
        return (
            f"NeuronSet(mode={self.mode.value}, n={self.n}, dc={self.dc:.6g}"
            f", neurons={len(self.neurons)})"
        )


def check_dimension(neurons: NeuronSet, x: Sequence[float]) -> np.ndarray:
    """Return a signal as a float array after checking its dimension."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != neurons.n:
        raise DataError(
            f"Signal has dimension {x.size} but the neurons have dimension {neurons.n}"
        )
    return x

