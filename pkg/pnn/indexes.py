"""Multi-indexes, cells, dictionaries and evaluation vectors."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Iterator, Optional, Sequence

import numpy as np

from pnn.exceptions import ConfigError, DataError
from pnn.utils import TORUS_LOWER, TORUS_UPPER, StrOrPathLike, load_json, save_json


class Mode(str, Enum):
    """Basis used to expand the energy function."""

    FREQUENCY = "frequency"
    MOMENT = "moment"


class Ordering(Enum):
    """Result of comparing two multi-indexes."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


class MultiIndex(tuple):
    """An n-tuple of integers indexing a neuron.

    Comparison operators implement the neuron ordering: first by total order
    ``|alpha| = sum(|alpha_i|)``, then by the component at the largest position
    where the two indexes differ. Equality and hashing are those of the tuple.
    """

    def __new__(cls, components: Iterable[int]) -> MultiIndex:
        components = tuple(components)
        if len(components) == 0:
            raise ConfigError("A multi-index needs at least one component")
        for component in components:
            if int(component) != component:
                raise ConfigError(
                    f"Multi-index components must be integers, got {components}"
                )
        return super().__new__(cls, (int(component) for component in components))

    @classmethod
    def zero(cls, n: int) -> MultiIndex:
        """Return the zero index (DC position) of dimension n."""
        return cls((0,) * n)

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return len(self)

    @property
    def order(self) -> int:
        """Total order |alpha|."""
        return sum(abs(component) for component in self)

    @property
    def is_zero(self) -> bool:
        return not any(self)

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Key reproducing the neuron ordering with plain tuple comparison."""
        return (self.order, tuple(reversed(self)))

    def _check_dimension(self, other: Any) -> MultiIndex:
        if not isinstance(other, MultiIndex):
            other = MultiIndex(other)
        if len(other) != len(self):
            raise DataError(
                f"Cannot compare multi-indexes of different dimensions: {self}, {other}"
            )
        return other

    def __lt__(self, other) -> bool:
        return self.sort_key < self._check_dimension(other).sort_key

    def __le__(self, other) -> bool:
        return self.sort_key <= self._check_dimension(other).sort_key

    def __gt__(self, other) -> bool:
        return self.sort_key > self._check_dimension(other).sort_key

    def __ge__(self, other) -> bool:
        return self.sort_key >= self._check_dimension(other).sort_key

    def __add__(self, other) -> MultiIndex:
        other = self._check_dimension(other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other) -> MultiIndex:
        other = self._check_dimension(other)
        return MultiIndex(a - b for a, b in zip(self, other))

    def __neg__(self) -> MultiIndex:
        return MultiIndex(-a for a in self)

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


def compare(alpha: Sequence[int], beta: Sequence[int]) -> Ordering:
    """Compare two multi-indexes under the neuron ordering.

    Raises
    ------
    pnn.exceptions.DataError
        If the indexes do not have the same dimension.
    """
    alpha = MultiIndex(alpha)
    beta = alpha._check_dimension(beta)
    if alpha == beta:
        return Ordering.EQUAL
    return Ordering.LESS if alpha < beta else Ordering.GREATER


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield all ways to write k as an ordered sum of n non-negative integers."""
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def _signed_variants(components: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Yield all sign assignments of the nonzero components."""
    choices = [(c, -c) if c != 0 else (0,) for c in components]
    yield from itertools.product(*choices)


def cell_size(n: int, k: int, mode: Mode) -> int:
    """Number of multi-indexes of total order k in dimension n."""
    mode = Mode(mode)
    if mode == Mode.MOMENT:
        return math.comb(n + k - 1, k)
    if k == 0:
        return 1
    return sum(
        math.comb(n, j) * math.comb(k - 1, j - 1) * 2**j
        for j in range(1, min(n, k) + 1)
    )


@dataclass(frozen=True)
class Cell:
    """All multi-indexes of a given total order, in ascending order."""

    n: int
    order: int
    mode: Mode
    indexes: tuple[MultiIndex, ...]

    def __len__(self) -> int:
        return len(self.indexes)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indexes)


def enumerate_cell(n: int, k: int, mode: Mode) -> Cell:
    """Enumerate the k-th cell of dimension n."""
    mode = Mode(mode)
    if n < 1:
        raise ConfigError(f"Dimension must be at least 1, got {n}")
    if k < 0:
        raise ConfigError(f"Cell order must be non-negative, got {k}")

    indexes = set()
    for composition in _compositions(n, k):
        if mode == Mode.MOMENT:
            indexes.add(MultiIndex(composition))
        else:
            indexes.update(MultiIndex(v) for v in _signed_variants(composition))
    return Cell(n=n, order=k, mode=mode, indexes=tuple(sorted(indexes)))


def _normalize_component_bounds(
    n: int, component_bounds: Optional[int | Sequence[int]]
) -> Optional[tuple[int, ...]]:
    if component_bounds is None:
        return None
    if isinstance(component_bounds, (int, np.integer)):
        component_bounds = [int(component_bounds)] * n
    component_bounds = tuple(int(bound) for bound in component_bounds)
    if len(component_bounds) != n:
        raise ConfigError(
            f"Expected {n} component bounds, got {len(component_bounds)}"
            f": {component_bounds}"
        )
    if any(bound < 0 for bound in component_bounds):
        raise ConfigError(
            f"Component bounds must be non-negative, got {component_bounds}"
        )
    return component_bounds


@dataclass(frozen=True)
class Dictionary:
    """A finite, sorted set of multi-indexes that always contains zero."""

    n: int
    mode: Mode
    indexes: tuple[MultiIndex, ...]
    max_order: Optional[int] = None
    component_bounds: Optional[tuple[int, ...]] = None
    _index_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        indexes = set(MultiIndex(index) for index in self.indexes)
        if any(len(index) != self.n for index in indexes):
            raise DataError(f"All dictionary indexes must have dimension {self.n}")
        indexes = tuple(sorted(indexes))
        if self.mode == Mode.MOMENT and any(min(index) < 0 for index in indexes):
            raise DataError("Moment dictionaries cannot contain negative components")
        zero = MultiIndex.zero(self.n)
        if zero not in indexes:
            indexes = tuple(sorted(indexes + (zero,)))
        object.__setattr__(self, "indexes", indexes)
        object.__setattr__(self, "_index_set", frozenset(indexes))

    def __len__(self) -> int:
        return len(self.indexes)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indexes)

    def __contains__(self, index) -> bool:
        return tuple(index) in self._index_set

    @property
    def nonzero_indexes(self) -> tuple[MultiIndex, ...]:
        return tuple(index for index in self.indexes if not index.is_zero)

    @cached_property
    def index_array(self) -> np.ndarray:
        """Indexes as an integer array of shape (len, n)."""
        return index_array(self.indexes, n=self.n)

    @property
    def max_component(self) -> int:
        """Largest absolute component over the dictionary."""
        return int(np.abs(self.index_array).max())

    def cells(self) -> dict[int, list[MultiIndex]]:
        """Group the indexes by total order."""
        cells: dict[int, list[MultiIndex]] = {}
        for index in self.indexes:
            cells.setdefault(index.order, []).append(index)
        return cells

    def to_dict(self) -> dict:
        """JSON form: {"n", "mode", "indexes"}."""
        return {
            "n": self.n,
            "mode": self.mode.value,
            "indexes": [list(index) for index in self.indexes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Dictionary:
        try:
            return cls(
                n=int(data["n"]),
                mode=Mode(data["mode"]),
                indexes=tuple(MultiIndex(index) for index in data["indexes"]),
            )
        except (KeyError, TypeError, ValueError) as exception:
            if isinstance(exception, DataError):
                raise
            raise DataError(f"Invalid dictionary data: {exception}")

    def save(self, fpath: StrOrPathLike):
        save_json(self.to_dict(), fpath)

    @classmethod
    def load(cls, fpath: StrOrPathLike) -> Dictionary:
        return cls.from_dict(load_json(fpath))


def build_dictionary(
    n: int,
    mode: Mode,
    max_order: Optional[int] = None,
    component_bounds: Optional[int | Sequence[int]] = None,
) -> Dictionary:
    """Materialize a dictionary from a total-order and/or per-component bound.

    In frequency mode a component bound ``b`` means ``|alpha_j| <= b``; in moment
    mode it means ``0 <= alpha_j <= b``. When both bounds are given, the
    dictionary is their intersection.

    Raises
    ------
    pnn.exceptions.ConfigError
        If neither bound is given or a bound is negative.
    """
    mode = Mode(mode)
    if n < 1:
        raise ConfigError(f"Dimension must be at least 1, got {n}")
    if max_order is None and component_bounds is None:
        raise ConfigError(
            "Empty dictionary specification: give a maximum order"
            " and/or component bounds"
        )
    if max_order is not None and max_order < 0:
        raise ConfigError(f"Maximum order must be non-negative, got {max_order}")
    bounds = _normalize_component_bounds(n, component_bounds)

    indexes: list[MultiIndex] = []
    if max_order is not None:
        for k in range(max_order + 1):
            indexes.extend(enumerate_cell(n, k, mode))
        if bounds is not None:
            indexes = [
                index
                for index in indexes
                if all(abs(a) <= b for a, b in zip(index, bounds))
            ]
    else:
        if mode == Mode.MOMENT:
            ranges = [range(0, b + 1) for b in bounds]
        else:
            ranges = [range(-b, b + 1) for b in bounds]
        indexes = [MultiIndex(components) for components in itertools.product(*ranges)]

    return Dictionary(
        n=n,
        mode=mode,
        indexes=tuple(indexes),
        max_order=max_order,
        component_bounds=bounds,
    )


def index_array(
    indexes: Iterable[Sequence[int]], n: Optional[int] = None
) -> np.ndarray:
    """Stack multi-indexes into an integer array of shape (len, n)."""
    array = np.array([tuple(index) for index in indexes], dtype=int)
    if array.size == 0:
        return np.zeros((0, 0 if n is None else n), dtype=int)
    return array


def check_torus(points: np.ndarray) -> np.ndarray:
    """Check that points lie in the torus [-1, 1)^n."""
    points = np.asarray(points, dtype=float)
    if np.any(points < TORUS_LOWER) or np.any(points >= TORUS_UPPER):
        raise DataError(
            "Frequency-mode points must lie in the torus [-1, 1)^n"
            f", got values in [{points.min()}, {points.max()}]"
        )
    return points


def basis_values(points: np.ndarray, indexes: np.ndarray, mode: Mode) -> np.ndarray:
    """Evaluate basis functions at points.

    Parameters
    ----------
    points : np.ndarray
        Array of shape (N, n).
    indexes : np.ndarray
        Integer array of shape (K, n).
    mode : Mode
        ``frequency`` gives exp(i pi alpha.x), ``moment`` gives x**alpha.

    Returns
    -------
    np.ndarray
        Array of shape (N, K), complex in frequency mode and real in moment mode.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    indexes = np.atleast_2d(np.asarray(indexes, dtype=int))
    if Mode(mode) == Mode.FREQUENCY:
        return np.exp(1j * np.pi * (points @ indexes.T))
    # 0**0 == 1 in numpy, so the zero index evaluates to ones
    return np.prod(points[:, None, :] ** indexes[None, :, :], axis=-1)


def axis_kernel(
    coordinates: np.ndarray, components: np.ndarray, mode: Mode
) -> np.ndarray:
    """One-axis basis factors, shape (len(coordinates), len(components))."""
    coordinates = np.asarray(coordinates, dtype=float)
    components = np.asarray(components, dtype=int)
    if Mode(mode) == Mode.FREQUENCY:
        return np.exp(1j * np.pi * np.outer(coordinates, components))
    return coordinates[:, None] ** components[None, :]


def contract_axes(tensor: np.ndarray, kernels: Sequence[np.ndarray]) -> np.ndarray:
    """Contract the leading axis of ``tensor`` with each kernel in turn.

    Every step consumes the first remaining axis and appends the kernel's
    second axis, so after one kernel per axis the axes come out in order.
    """
    for kernel in kernels:
        tensor = np.tensordot(tensor, kernel, axes=([0], [0]))
    return tensor


def _component_ranges(indexes: np.ndarray) -> list[np.ndarray]:
    return [
        np.arange(indexes[:, axis].min(), indexes[:, axis].max() + 1)
        for axis in range(indexes.shape[1])
    ]


def project_grid(
    values: np.ndarray,
    axes: Sequence[np.ndarray],
    indexes: np.ndarray,
    mode: Mode,
    conjugate: bool = False,
) -> np.ndarray:
    """Sum of grid values times basis values over all cells, per index.

    Parameters
    ----------
    values : np.ndarray
        Grid values with one array axis per coordinate axis
    axes : Sequence[np.ndarray]
        Cell centers along each axis
    indexes : np.ndarray
        Integer array of shape (K, n)
    mode : Mode
        Basis family
    conjugate : bool, optional
        Use the complex conjugate basis, by default False

    Returns
    -------
    np.ndarray
        Array of shape (K,)
    """
    indexes = np.atleast_2d(np.asarray(indexes, dtype=int))
    ranges = _component_ranges(indexes)
    kernels = []
    for coordinates, components in zip(axes, ranges):
        kernel = axis_kernel(coordinates, components, mode)
        kernels.append(np.conj(kernel) if conjugate else kernel)
    projected = contract_axes(np.asarray(values), kernels)
    offsets = np.array([components[0] for components in ranges])
    return projected[tuple((indexes - offsets).T)]


def synthesize_grid(
    coefficients: np.ndarray,
    indexes: np.ndarray,
    axes: Sequence[np.ndarray],
    mode: Mode,
) -> np.ndarray:
    """Evaluate sum_alpha c_alpha basis_alpha(x) at every grid cell center."""
    indexes = np.atleast_2d(np.asarray(indexes, dtype=int))
    shape = tuple(coordinates.size for coordinates in axes)
    if indexes.size == 0:
        return np.zeros(shape, dtype=complex)
    ranges = _component_ranges(indexes)
    offsets = np.array([components[0] for components in ranges])
    tensor = np.zeros(tuple(components.size for components in ranges), dtype=complex)
    np.add.at(tensor, tuple((indexes - offsets).T), coefficients)
    kernels = [
        axis_kernel(coordinates, components, mode).T
        for coordinates, components in zip(axes, ranges)
    ]
    return contract_axes(tensor, kernels)


def evaluation_vector(
    x: Sequence[float], cell: Cell | Iterable[Sequence[int]], mode: Mode
) -> np.ndarray:
    """Basis values of a signal, ordered like the cell."""
    mode = Mode(mode)
    x = np.asarray(x, dtype=float).reshape(1, -1)
    indexes = index_array(cell, n=x.shape[1])
    if indexes.size and indexes.shape[1] != x.shape[1]:
        raise DataError(
            f"Signal has dimension {x.shape[1]} but the cell has dimension"
            f" {indexes.shape[1]}"
        )
    if mode == Mode.FREQUENCY:
        check_torus(x)
    return basis_values(x, indexes, mode)[0]
