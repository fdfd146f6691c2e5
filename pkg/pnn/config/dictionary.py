"""Dictionary configuration."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from pnn.indexes import Dictionary, Mode, build_dictionary


class DictionaryConfig(BaseModel):
    """Model for a dictionary bound specification."""

    MAX_ORDER: Optional[int] = Field(
        default=None, description="Largest total order |alpha|"
    )
    COMPONENT_BOUND: Optional[int | list[int]] = Field(
        default=None,
        description=(
            "Largest absolute component, shared or one per axis"
            " (moment mode: components between 0 and the bound)"
        ),
    )

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_bounds(self) -> Self:
        """Check that at least one non-negative bound is given."""
        if self.MAX_ORDER is None and self.COMPONENT_BOUND is None:
            raise ValueError(
                "At least one of MAX_ORDER and COMPONENT_BOUND is required"
            )
        if self.MAX_ORDER is not None and self.MAX_ORDER < 0:
            raise ValueError(f"MAX_ORDER must be non-negative, got {self.MAX_ORDER}")
        if self.COMPONENT_BOUND == []:
            raise ValueError("COMPONENT_BOUND cannot be an empty list")
        if min(self.component_bounds, default=0) < 0:
            raise ValueError(
                f"COMPONENT_BOUND must be non-negative, got {self.COMPONENT_BOUND}"
            )
        return self

    @property
    def component_bounds(self) -> list[int]:
        """Component bounds as a list (empty if not given)."""
        if self.COMPONENT_BOUND is None:
            return []
        if isinstance(self.COMPONENT_BOUND, int):
            return [self.COMPONENT_BOUND]
        return list(self.COMPONENT_BOUND)

    @property
    def largest_component(self) -> int:
        """Upper bound on any single component of the dictionary."""
        if self.COMPONENT_BOUND is None:
            return self.MAX_ORDER
        largest = max(self.component_bounds)
        return largest if self.MAX_ORDER is None else min(largest, self.MAX_ORDER)

    def build(self, n: int, mode: Mode) -> Dictionary:
        """Materialize the dictionary for a dimension and a mode."""
        return build_dictionary(
            n,
            mode,
            max_order=self.MAX_ORDER,
            component_bounds=self.COMPONENT_BOUND,
        )
