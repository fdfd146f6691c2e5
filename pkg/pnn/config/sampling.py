"""Sample source and dynamic mode decomposition configuration."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from pnn.kmd import DEFAULT_RANK_TOL
from pnn.sampling import SampleMatrix, simulate_standing_wave


class StandingWaveConfig(BaseModel):
    """Model for the standing-wave sample generator."""

    T_START: float = Field(default=0.0, description="Start time")
    T_END: float = Field(default=2 * math.pi, description="End time (inclusive)")
    STEP: float = Field(default=0.2, description="Time step between samples")
    AMPLITUDE: float = Field(
        default=1.0, description="Amplitude of the wave, between -1 and 1"
    )

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_fields(self) -> Self:
        """Check the time grid and the amplitude."""
        if not self.STEP > 0:
            raise ValueError(f"Step must be positive, got {self.STEP}")
        if not self.T_END > self.T_START:
            raise ValueError(
                "End time must be greater than start time"
                f", got [{self.T_START}, {self.T_END}]"
            )
        if abs(self.AMPLITUDE) > 1:
            raise ValueError(f"Amplitude must be in [-1, 1], got {self.AMPLITUDE}")
        return self

    def simulate(self) -> SampleMatrix:
        """Generate the samples."""
        return simulate_standing_wave(
            self.T_START, self.T_END, self.STEP, amplitude=self.AMPLITUDE
        )


class KmdConfig(BaseModel):
    """Model for sample regeneration by dynamic mode decomposition."""

    ENABLED: bool = Field(
        default=True, description="Whether to regenerate samples before learning"
    )
    TARGET_STEP: float = Field(
        default=0.001, description="Time step of the regenerated samples"
    )
    RANK_TOL: float = Field(
        default=DEFAULT_RANK_TOL,
        description="Relative cutoff on singular values of the snapshot matrix",
    )

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_fields(self) -> Self:
        """Check that the step and the cutoff are positive."""
        if not self.TARGET_STEP > 0:
            raise ValueError(f"Target step must be positive, got {self.TARGET_STEP}")
        if not self.RANK_TOL > 0:
            raise ValueError(f"Rank tolerance must be positive, got {self.RANK_TOL}")
        return self
