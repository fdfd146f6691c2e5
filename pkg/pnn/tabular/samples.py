"""Classes for sample and signal files."""

from __future__ import annotations

import numpy as np
import pandas as pd
from pydantic import Field
from typing_extensions import Self

from pnn.exceptions import DataError
from pnn.sampling import SampleMatrix
from pnn.tabular.base import BaseTabular, CoordinateModel, coordinate_columns

STEP_RTOL = 1e-6


class SampleModel(CoordinateModel):
    """A state sampled at time t."""

    t: float = Field(description="Time of the sample")


class SignalModel(CoordinateModel):
    """A signal to estimate."""


class SampleTable(BaseTabular):
    """Samples on a uniform time grid (columns t,x1,...,xn)."""

    col_t = "t"

    label = "sample table"
    model = SampleModel

    _metadata = BaseTabular._metadata + ["col_t", "label", "model"]

    @classmethod
    def from_samples(cls, samples: SampleMatrix) -> Self:
        """Tabulate a sample matrix."""
        df = pd.DataFrame(samples.states, columns=coordinate_columns(samples.n))
        df.insert(0, cls.col_t, samples.times)
        return cls(df)

    def to_samples(self) -> SampleMatrix:
        """Convert to a sample matrix.

        The step is the (uniform) difference between consecutive times; a single
        row gets a unit step.
        """
        if len(self) == 0:
            raise DataError("The sample table is empty")
        if len(self.coordinates) == 0:
            raise DataError("The sample table has no coordinate columns (x1, ...)")
        times = self[self.col_t].to_numpy(dtype=float)
        states = self[self.coordinates].to_numpy(dtype=float)
        if times.size == 1:
            return SampleMatrix(states=states, step=1.0, start_time=times[0])

        steps = np.diff(times)
        if not np.allclose(steps, steps[0], rtol=STEP_RTOL, atol=0) or steps[0] <= 0:
            raise DataError("Sample times must be increasing and uniformly spaced")
        return SampleMatrix(states=states, step=steps.mean(), start_time=times[0])


class SignalTable(BaseTabular):
    """Signals, one per row (columns x1,...,xn)."""

    label = "signal table"
    model = SignalModel

    _metadata = BaseTabular._metadata + ["label", "model"]

    @classmethod
    def from_signals(cls, signals) -> Self:
        signals = np.atleast_2d(np.asarray(signals, dtype=float))
        return cls(pd.DataFrame(signals, columns=coordinate_columns(signals.shape[1])))

    def to_signals(self) -> np.ndarray:
        """Signals as an (N, n) array."""
        if len(self.coordinates) == 0:
            raise DataError("The signal table has no coordinate columns (x1, ...)")
        return self[self.coordinates].to_numpy(dtype=float)
