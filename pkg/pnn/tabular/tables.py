"""Report tables emitted by the pipelines."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from pydantic import Field, field_validator
from typing_extensions import Self

from pnn.estimation import TopoStats
from pnn.indexes import MultiIndex
from pnn.tabular.base import BaseTabular, BaseTabularModel

INDEX_SEP = ";"


def format_index(index: Sequence[int]) -> str:
    """Format a multi-index as a single CSV cell, e.g. "1;-2"."""
    return INDEX_SEP.join(str(int(a)) for a in index)


def parse_index(value: str) -> MultiIndex:
    """Inverse of format_index."""
    try:
        return MultiIndex(int(a) for a in str(value).split(INDEX_SEP))
    except ValueError:
        raise ValueError(f"Invalid multi-index: {value}")


class StabilityModel(BaseTabularModel):
    """L1 distance between the CDFs of m and 2m samples."""

    m: int = Field(description="Size of the smaller subsample")
    distance: float = Field(description="L1 distance between the two CDFs")


class ConnectionModel(BaseTabularModel):
    """One connection Upsilon_alpha(gamma)."""

    alpha: str = Field(description="Row index alpha, components joined by ';'")
    gamma: str = Field(description="Column index gamma, components joined by ';'")
    re: float = Field(description="Real part")
    im: float = Field(description="Imaginary part")
    abs: float = Field(description="Modulus")

    @field_validator("alpha", "gamma")
    @classmethod
    def check_index(cls, value: str) -> str:
        parse_index(value)
        return value


class LikelihoodModel(BaseTabularModel):
    """Auxiliary and learned likelihoods at a point (x, xdot)."""

    x: float = Field(description="Position")
    xdot: float = Field(description="Velocity")
    p_a: float = Field(description="Auxiliary density, infinite on the unit circle")
    p0: float = Field(description="Density grid value at the nearest cell")


class TopoCountsModel(BaseTabularModel):
    """Number of active pairs at an l1 distance."""

    signal: int = Field(description="Row of the signal in the input (0-based)")
    k: int = Field(description="l1 distance")
    count: int = Field(description="Number of unordered pairs")


class TopoMomentsModel(BaseTabularModel):
    """Per-component moments of the active pairs at an l1 distance."""

    signal: int = Field(description="Row of the signal in the input (0-based)")
    k: int = Field(description="l1 distance")
    component: int = Field(description="Index component (1-based)")
    mean: float = Field(description="Mean of the component over the pair endpoints")
    variance: float = Field(description="Population variance of the component")


class StabilityTable(BaseTabular):
    """ECDF stability report (columns m,distance)."""

    label = "stability table"
    model = StabilityModel

    _metadata = BaseTabular._metadata + ["label", "model"]

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[int, float]]) -> Self:
        return cls(pd.DataFrame(list(rows), columns=["m", "distance"]))


class ConnectionTable(BaseTabular):
    """Connection moduli |Upsilon_alpha(gamma)| (columns alpha,gamma,re,im,abs)."""

    label = "connection table"
    model = ConnectionModel

    _metadata = BaseTabular._metadata + ["label", "model"]

    @classmethod
    def from_matrix(
        cls,
        alphas: Sequence[Sequence[int]],
        gammas: Sequence[Sequence[int]],
        matrix: np.ndarray,
    ) -> Self:
        """Tabulate a connection matrix with rows ``alphas`` and columns ``gammas``."""
        records = []
        for alpha, row in zip(alphas, matrix):
            for gamma, value in zip(gammas, row):
                records.append(
                    {
                        "alpha": format_index(alpha),
                        "gamma": format_index(gamma),
                        "re": value.real,
                        "im": value.imag,
                        "abs": abs(value),
                    }
                )
        return cls(pd.DataFrame(records, columns=list(ConnectionModel.model_fields)))


class Table1Table(BaseTabular):
    """Likelihood table (columns x,xdot,p_a,p0)."""

    label = "likelihood table"
    model = LikelihoodModel

    _metadata = BaseTabular._metadata + ["label", "model"]


class TopoCountsTable(BaseTabular):
    """Pair counts per signal (columns signal,k,count)."""

    label = "topological count table"
    model = TopoCountsModel

    _metadata = BaseTabular._metadata + ["label", "model"]

    @classmethod
    def from_stats(cls, stats: Mapping[int, TopoStats]) -> Self:
        records = [
            {"signal": signal, "k": k, "count": count}
            for signal, stat in stats.items()
            for k, count in stat.counts.items()
        ]
        return cls(pd.DataFrame(records, columns=list(TopoCountsModel.model_fields)))


class TopoMomentsTable(BaseTabular):
    """Pair moments per signal (columns signal,k,component,mean,variance)."""

    label = "topological moment table"
    model = TopoMomentsModel

    _metadata = BaseTabular._metadata + ["label", "model"]

    @classmethod
    def from_stats(cls, stats: Mapping[int, TopoStats]) -> Self:
        records = []
        for signal, stat in stats.items():
            for k in stat.means:
                for axis, (mean, variance) in enumerate(
                    zip(stat.means[k], stat.variances[k]), start=1
                ):
                    records.append(
                        {
                            "signal": signal,
                            "k": k,
                            "component": axis,
                            "mean": mean,
                            "variance": variance,
                        }
                    )
        return cls(pd.DataFrame(records, columns=list(TopoMomentsModel.model_fields)))
