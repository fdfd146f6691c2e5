"""Sample matrices, the standing-wave generator and snapshot matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pnn.exceptions import ConfigError, DataError
from pnn.utils import count_uniform_steps


@dataclass(frozen=True)
class SampleMatrix:
    """States sampled on a uniform time grid.

    ``states`` has shape (m, n): one row per time point ``start_time + r * step``.
    """

    states: np.ndarray
    step: float
    start_time: float = 0.0

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states.reshape(-1, 1)
        if states.ndim != 2 or states.shape[0] < 1 or states.shape[1] < 1:
            raise DataError(
                f"States must be a non-empty (m, n) array, got shape {states.shape}"
            )
        if not np.all(np.isfinite(states)):
            raise DataError("States must be finite")
        if not self.step > 0:
            raise ConfigError(f"Step must be positive, got {self.step}")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "start_time", float(self.start_time))

    @property
    def m(self) -> int:
        """Number of samples."""
        return self.states.shape[0]

    @property
    def n(self) -> int:
        """State dimension."""
        return self.states.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.start_time + self.step * np.arange(self.m)

    def select_axes(self, axes: Optional[Sequence[int]]) -> SampleMatrix:
        """Keep only some state components (1-based, as in the x1..xn columns)."""
        if axes is None:
            return self
        axes = list(axes)
        if len(axes) == 0 or any(axis < 1 or axis > self.n for axis in axes):
            raise ConfigError(
                f"Axes must be between 1 and {self.n}, got {axes}"
            )
        return SampleMatrix(
            states=self.states[:, [axis - 1 for axis in axes]],
            step=self.step,
            start_time=self.start_time,
        )


def simulate_standing_wave(
    t_start: float, t_end: float, step: float, amplitude: float = 1.0
) -> SampleMatrix:
    """Sample the normalized standing wave x'' + x = 0.

    States are ``(A sin t, A cos t)`` at ``t = t_start + r * step`` for every
    r such that t does not exceed ``t_end``.
    """
    if not step > 0:
        raise ConfigError(f"Step must be positive, got {step}")
    if not t_end > t_start:
        raise ConfigError(
            f"End time must be greater than start time, got [{t_start}, {t_end}]"
        )
    if abs(amplitude) > 1:
        raise ConfigError(f"Amplitude must be in [-1, 1], got {amplitude}")

    times = t_start + step * np.arange(count_uniform_steps(t_start, t_end, step))
    states = amplitude * np.column_stack([np.sin(times), np.cos(times)])
    return SampleMatrix(states=states, step=step, start_time=t_start)


def build_snapshots(samples: SampleMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Build the shifted snapshot pair (Y, Y') of shape n x (m - 1) each."""
    if samples.m < 2:
        raise DataError(
            f"At least 2 samples are needed to build snapshots, got {samples.m}"
        )
    states = samples.states.T
    return states[:, :-1].copy(), states[:, 1:].copy()
