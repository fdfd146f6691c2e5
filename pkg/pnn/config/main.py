"""Pipeline configuration."""

from __future__ import annotations

import copy
from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from pnn.config.dictionary import DictionaryConfig
from pnn.config.sampling import KmdConfig, StandingWaveConfig
from pnn.indexes import Mode
from pnn.learning.moment import DEFAULT_STENCIL_STEP, MAX_COMPONENT
from pnn.utils import FIELD_DESCRIPTION_MAP, StrOrPathLike, load_json

DEFAULT_BINS_PER_AXIS = {1: 1000, 2: 300}
DEFAULT_BINS_HIGHER = 32


class PipelineConfig(BaseModel):
    """Model for the learning and estimation pipelines."""

    MODE: Mode = Field(
        default=Mode.FREQUENCY, description=FIELD_DESCRIPTION_MAP["mode"]
    )
    SAMPLES: Optional[Path] = Field(
        default=None,
        description=(
            "Path to a sample CSV file (columns t,x1,...,xn)"
            ". If not given, samples are generated from STANDING_WAVE"
        ),
    )
    STANDING_WAVE: StandingWaveConfig = Field(
        default=StandingWaveConfig(), description="Standing-wave sample generator"
    )
    KMD: KmdConfig = Field(
        default=KmdConfig(), description="Sample regeneration before learning"
    )
    BINS_PER_AXIS: Optional[int] = Field(
        default=None,
        description=(
            "Number of grid bins per axis"
            " (default: 1000 in 1D, 300 in 2D and 32 otherwise)"
        ),
    )
    DICTIONARY: Optional[DictionaryConfig] = Field(
        default=None, description="Dictionary of multi-indexes"
    )
    LEARN_AXES: Optional[list[int]] = Field(
        default=None,
        description="State components to learn from (1-based, default: all)",
    )
    AUXILIARY: bool = Field(
        default=False,
        description=(
            "Learn moment neurons from the auxiliary density"
            " C (1 - x^2 - xdot^2)^(-1/2) instead of the density grid"
        ),
    )
    STENCIL_STEP: float = Field(
        default=DEFAULT_STENCIL_STEP,
        description="Step of the central difference stencils (moment mode)",
    )
    STABILITY_SIZES: list[int] = Field(
        default=[],
        description="Sample sizes m at which to compare CDFs of m and 2m samples",
    )
    SIGNALS: Optional[list[list[float]]] = Field(
        default=None, description="Signals to estimate"
    )
    OUTPUT_DIR: Optional[Path] = Field(
        default=None, description="Directory for all output files"
    )

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_fields(self) -> Self:
        """Check mode-dependent settings."""
        if self.AUXILIARY and self.MODE != Mode.MOMENT:
            raise ValueError("AUXILIARY requires MODE to be 'moment'")
        if (
            self.MODE == Mode.MOMENT
            and self.DICTIONARY is not None
            and self.DICTIONARY.largest_component > MAX_COMPONENT
        ):
            raise ValueError(
                f"Moment dictionaries are limited to components <= {MAX_COMPONENT}"
            )
        if self.BINS_PER_AXIS is not None and self.BINS_PER_AXIS < 4:
            raise ValueError(
                f"BINS_PER_AXIS must be at least 4, got {self.BINS_PER_AXIS}"
            )
        if not self.STENCIL_STEP > 0:
            raise ValueError(f"STENCIL_STEP must be positive, got {self.STENCIL_STEP}")
        if any(size < 1 for size in self.STABILITY_SIZES):
            raise ValueError(
                f"STABILITY_SIZES must be positive, got {self.STABILITY_SIZES}"
            )
        return self

    def get_bins_per_axis(self, n: int) -> int:
        """Number of bins per axis for a given dimension."""
        if self.BINS_PER_AXIS is not None:
            return self.BINS_PER_AXIS
        return DEFAULT_BINS_PER_AXIS.get(n, DEFAULT_BINS_HIGHER)

    def with_overrides(self, overrides: Mapping[str, Any]) -> Self:
        """Return a new config with dotted-key overrides applied.

        Keys such as ``"KMD.TARGET_STEP"`` address nested fields. ``None`` values
        are skipped.
        """
        data = copy.deepcopy(self.model_dump(mode="json", exclude_none=True))
        for key, value in overrides.items():
            if value is None:
                continue
            *parents, name = key.split(".")
            target = data
            for parent in parents:
                if target.get(parent) is None:
                    target[parent] = {}
                target = target[parent]
            target[name] = value
        return self.__class__(**data)

    def save(self, fpath: StrOrPathLike, **kwargs):
        """Save the config to a JSON file.

        Parameters
        ----------
        fpath : pnn.utils.StrOrPathLike
            Path to the JSON file to write
        """
        fpath = Path(fpath)
        if "indent" not in kwargs:
            kwargs["indent"] = 4
        fpath.parent.mkdir(parents=True, exist_ok=True)
        with open(fpath, "w") as file:
            file.write(self.model_dump_json(**kwargs))

    @classmethod
    def load(cls, path: StrOrPathLike) -> Self:
        """Load a pipeline configuration."""
        return cls(**load_json(path))
