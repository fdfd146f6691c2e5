"""Dynamic mode decomposition of snapshot matrices.

The fit follows the exact DMD algorithm: a truncated SVD of the first snapshot
matrix projects the shifted snapshots onto a low-rank operator whose eigenpairs
give the DMD eigenvalues and modes. Continuous exponents use the principal
branch of the logarithm. The observable ensemble is the identity, so
reconstructed observables are the states themselves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from pnn.exceptions import ConfigError, DataError, NumericError
from pnn.logger import get_logger
from pnn.sampling import SampleMatrix
from pnn.utils import (
    FIELD_DESCRIPTION_MAP,
    ComplexPair,
    StrOrPathLike,
    count_uniform_steps,
    from_pairs,
    load_json,
    to_pairs,
)

DEFAULT_RANK_TOL = 1e-10
ZERO_EIGENVALUE_TOL = 1e-13
IMAGINARY_RESIDUE_TOL = 1e-9


class DmdModelFile(BaseModel):
    """JSON schema of a fitted DMD model."""

    model_config = ConfigDict(extra="forbid")

    rank: int = Field(description="Number of retained singular directions")
    n: int = Field(description=FIELD_DESCRIPTION_MAP["n"])
    step: float = Field(description=FIELD_DESCRIPTION_MAP["step"])
    start_time: float = Field(description="Time of the first training snapshot")
    singular_values: list[float] = Field(description="Retained singular values")
    eigenvalues: list[ComplexPair] = Field(description="DMD eigenvalues")
    exponents: list[ComplexPair] = Field(
        description="Continuous exponents ln(eigenvalue) / step"
    )
    amplitudes: list[ComplexPair] = Field(description="Mode amplitudes")
    modes: list[list[ComplexPair]] = Field(
        description="DMD modes as an n x rank matrix (row-major)"
    )


@dataclass(frozen=True)
class DmdModel:
    """A fitted dynamic mode decomposition."""

    eigenvalues: np.ndarray
    modes: np.ndarray
    amplitudes: np.ndarray
    step: float
    start_time: float = 0.0
    singular_values: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        """Number of retained modes."""
        return len(self.eigenvalues)

    @property
    def n(self) -> int:
        return self.modes.shape[0]

    @property
    def exponents(self) -> np.ndarray:
        """Continuous exponents ln(lambda_k) / step (principal branch)."""
        return np.log(self.eigenvalues.astype(complex)) / self.step

    def evaluate(self, times: np.ndarray) -> np.ndarray:
        """Complex states Phi exp(Omega (t - t0)) B at the given times, shape (T, n)."""
        tau = np.asarray(times, dtype=float) - self.start_time
        dynamics = np.exp(np.outer(tau, self.exponents)) * self.amplitudes
        return dynamics @ self.modes.T

    def to_file_model(self) -> DmdModelFile:
        return DmdModelFile(
            rank=self.rank,
            n=self.n,
            step=self.step,
            start_time=self.start_time,
            singular_values=(
                []
                if self.singular_values is None
                else [float(s) for s in self.singular_values]
            ),
            eigenvalues=to_pairs(self.eigenvalues),
            exponents=to_pairs(self.exponents),
            amplitudes=to_pairs(self.amplitudes),
            modes=[to_pairs(row) for row in self.modes],
        )

    def save(self, fpath: StrOrPathLike, **kwargs):
        """Save the model to a JSON file."""
        fpath = Path(fpath)
        if "indent" not in kwargs:
            kwargs["indent"] = 4
        fpath.parent.mkdir(parents=True, exist_ok=True)
        with open(fpath, "w") as file:
            file.write(self.to_file_model().model_dump_json(**kwargs))

    @classmethod
    def load(cls, fpath: StrOrPathLike) -> DmdModel:
        """Load a model saved with ``save``."""
        try:
            data = DmdModelFile(**load_json(fpath))
        except ValidationError as exception:
            raise DataError(f"Invalid DMD model file {fpath}: {exception}")
        modes = np.array([from_pairs(row) for row in data.modes], dtype=complex)
        return cls(
            eigenvalues=from_pairs(data.eigenvalues),
            modes=modes.reshape(data.n, data.rank),
            amplitudes=from_pairs(data.amplitudes),
            step=data.step,
            start_time=data.start_time,
            singular_values=np.array(data.singular_values, dtype=float),
        )


def dmd_fit(
    snapshots: np.ndarray,
    snapshots_shifted: np.ndarray,
    step: float,
    rank_tol: float = DEFAULT_RANK_TOL,
    start_time: float = 0.0,
    logger: Optional[logging.Logger] = None,
) -> DmdModel:
    """Fit a DMD model to the snapshot pair (Y, Y').

    Parameters
    ----------
    snapshots : np.ndarray
        Matrix Y of shape (n, m - 1), states 0..m-2 as columns
    snapshots_shifted : np.ndarray
        Matrix Y' of the same shape, states 1..m-1 as columns
    step : float
        Time step between consecutive snapshots
    rank_tol : float, optional
        Relative singular-value cutoff, by default 1e-10
    start_time : float, optional
        Time of the first snapshot, by default 0
    logger : logging.Logger, optional
        Logger for dropped modes, by default None

    Returns
    -------
    DmdModel
    """
    if logger is None:
        logger = get_logger("dmd_fit")

    snapshots = np.asarray(snapshots)
    snapshots_shifted = np.asarray(snapshots_shifted)
    if snapshots.ndim != 2 or snapshots.shape != snapshots_shifted.shape:
        raise DataError(
            "Snapshot matrices must be 2D with matching shapes"
            f", got {snapshots.shape} and {snapshots_shifted.shape}"
        )
    if not step > 0:
        raise ConfigError(f"Step must be positive, got {step}")

    u, s, vh = np.linalg.svd(snapshots, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise NumericError("Snapshot matrix has rank zero")

    rank = int(np.sum(s >= rank_tol * s[0]))
    u_r = u[:, :rank]
    s_r = s[:rank]
    v_r = vh[:rank].conj().T
    logger.debug(f"Retained rank {rank} of {s.size} (singular values: {s})")

    s_inverse = np.diag(1.0 / s_r)
    a_tilde = u_r.conj().T @ snapshots_shifted @ v_r @ s_inverse
    eigenvalues, w = np.linalg.eig(a_tilde)
    modes = snapshots_shifted @ v_r @ s_inverse @ w

    nonzero = np.abs(eigenvalues) > ZERO_EIGENVALUE_TOL * max(
        1.0, np.abs(eigenvalues).max()
    )
    if not np.all(nonzero):
        logger.warning(
            f"Dropping {np.sum(~nonzero)} mode(s) with zero eigenvalue"
            " (continuous exponent undefined)"
        )
        eigenvalues = eigenvalues[nonzero]
        modes = modes[:, nonzero]
    if eigenvalues.size == 0:
        raise NumericError("All DMD eigenvalues are zero")

    negative_real = np.isclose(eigenvalues.imag, 0) & (eigenvalues.real < 0)
    if np.any(negative_real):
        logger.warning(
            "Eigenvalues on the negative real axis use the principal logarithm"
            f" (imaginary exponent pi/step): {eigenvalues[negative_real]}"
        )

    amplitudes = np.linalg.lstsq(modes, snapshots[:, 0], rcond=None)[0]

    return DmdModel(
        eigenvalues=eigenvalues.astype(complex),
        modes=modes.astype(complex),
        amplitudes=amplitudes.astype(complex),
        step=float(step),
        start_time=float(start_time),
        singular_values=s_r,
    )


def _real_states(
    model: DmdModel, times: np.ndarray, logger: logging.Logger
) -> np.ndarray:
    states = model.evaluate(times)
    residue = np.abs(states.imag).max() if states.size else 0.0
    scale = max(1.0, np.abs(states.real).max()) if states.size else 1.0
    if residue > IMAGINARY_RESIDUE_TOL * scale:
        logger.warning(
            f"Reconstructed states have an imaginary residue of {residue:.3g}"
        )
    return states.real


def dmd_reconstruct(
    model: DmdModel, steps: int, logger: Optional[logging.Logger] = None
) -> SampleMatrix:
    """Reconstruct the first ``steps`` states on the training time grid."""
    if logger is None:
        logger = get_logger("dmd_reconstruct")
    if steps < 1:
        raise ConfigError(f"Number of steps must be at least 1, got {steps}")
    times = model.start_time + model.step * np.arange(steps)
    return SampleMatrix(
        states=_real_states(model, times, logger),
        step=model.step,
        start_time=model.start_time,
    )


def dmd_regenerate(
    model: DmdModel,
    t_start: float,
    t_end: float,
    step: float,
    logger: Optional[logging.Logger] = None,
) -> SampleMatrix:
    """Regenerate states on an arbitrary uniform time grid."""
    if logger is None:
        logger = get_logger("dmd_regenerate")
    if not step > 0:
        raise ConfigError(f"Step must be positive, got {step}")
    if not t_end > t_start:
        raise ConfigError(
            f"End time must be greater than start time, got [{t_start}, {t_end}]"
        )
    times = t_start + step * np.arange(count_uniform_steps(t_start, t_end, step))
    logger.debug(f"Regenerating {times.size} states with step {step}")
    return SampleMatrix(
        states=_real_states(model, times, logger), step=step, start_time=t_start
    )


def dmd_spectrum(model: DmdModel) -> list[tuple[complex, complex]]:
    """Eigenvalues and continuous exponents, sorted by imaginary exponent."""
    pairs = list(zip(model.eigenvalues.tolist(), model.exponents.tolist()))
    return sorted(pairs, key=lambda pair: (pair[1].imag, pair[1].real))
