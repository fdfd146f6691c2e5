"""Output directory layout."""

from functools import cached_property
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from pnn.base import Base
from pnn.exceptions import ConfigError
from pnn.utils import FPATH_DEFAULT_LAYOUT, StrOrPathLike, load_json


class PathInfo(BaseModel):
    """Relative path and description for a directory or file."""

    _is_directory: bool

    path: Path = Field(description="Relative path to the file or directory")
    description: Optional[str] = Field(
        default=None,
        description="Description of the function of the file or directory",
    )


class DpathInfo(PathInfo):
    """Relative path and description for a directory."""

    _is_directory = True


class FpathInfo(PathInfo):
    """Relative path and description for a file."""

    _is_directory = False


class LayoutConfig(BaseModel):
    """Relative paths for the output layout."""

    model_config = ConfigDict(extra="forbid")

    dpath_logs: DpathInfo = Field(description="Directory for logs generated by pnn")

    fpath_samples: FpathInfo = Field(description="Path to the sample matrix")
    fpath_samples_kmd: FpathInfo = Field(
        description="Path to the samples regenerated by dynamic mode decomposition"
    )
    fpath_dmd_model: FpathInfo = Field(description="Path to the fitted DMD model")
    fpath_cdf: FpathInfo = Field(description="Path to the smoothed CDF grid")
    fpath_ecdf_stability: FpathInfo = Field(
        description="Path to the CDF stability report"
    )
    fpath_density: FpathInfo = Field(description="Path to the density grid")
    fpath_dictionary: FpathInfo = Field(description="Path to the dictionary")
    fpath_neurons: FpathInfo = Field(description="Path to the learned neurons")
    fpath_rate: FpathInfo = Field(description="Path to the learning rate report")
    fpath_connections: FpathInfo = Field(
        description="Path to the connection function table"
    )
    fpath_config: FpathInfo = Field(description="Path to the configuration file")
    fpath_estimate: FpathInfo = Field(description="Path to the estimation reports")
    fpath_table1: FpathInfo = Field(description="Path to the likelihood table")
    fpath_topo_counts: FpathInfo = Field(description="Path to the pair count table")
    fpath_topo_moments: FpathInfo = Field(
        description="Path to the pair moment table"
    )

    @cached_property
    def path_labels(self) -> list[str]:
        """Return a list of all path labels defined in the layout."""
        return list(self.model_dump().keys())

    def get_path_info(self, path_label: str) -> PathInfo:
        """Return the PathInfo object associated with the given path label."""
        return getattr(self, path_label)


class OutputLayout(Base):
    """File/directory structure below an output directory."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        fpath_layout: Optional[StrOrPathLike] = None,
    ):
        """Initialize the object.

        Parameters
        ----------
        dpath_root : pnn.utils.StrOrPathLike
            Path to the output directory.
        fpath_layout : Optional[pnn.utils.StrOrPathLike], optional
            Path to the layout config to use, by default None.
            If None, the default layout will be used.

        Raises
        ------
        pnn.exceptions.ConfigError
            If ``fpath_layout`` does not exist or is invalid.
        """
        if fpath_layout is None:
            fpath_layout = FPATH_DEFAULT_LAYOUT

        fpath_layout = Path(fpath_layout)
        if not fpath_layout.exists():
            raise ConfigError(f"Layout config file not found: {fpath_layout}")

        try:
            config = LayoutConfig(**load_json(fpath_layout))
        except ValidationError as exception:
            raise ConfigError(f"Invalid layout config {fpath_layout}: {exception}")

        self.dpath_root = Path(dpath_root)
        self.fpath_layout = fpath_layout
        self.config = config

        # for type hinting
        self.dpath_logs: Path
        self.fpath_samples: Path
        self.fpath_samples_kmd: Path
        self.fpath_dmd_model: Path
        self.fpath_cdf: Path
        self.fpath_ecdf_stability: Path
        self.fpath_density: Path
        self.fpath_dictionary: Path
        self.fpath_neurons: Path
        self.fpath_rate: Path
        self.fpath_connections: Path
        self.fpath_config: Path
        self.fpath_estimate: Path
        self.fpath_table1: Path
        self.fpath_topo_counts: Path
        self.fpath_topo_moments: Path

    def get_full_path(self, path: StrOrPathLike) -> Path:
        """Build a full path from a relative path."""
        return self.dpath_root / path

    def __getattribute__(self, name: str) -> Any:
        try:
            return super().__getattribute__(name)
        except AttributeError as exception:
            if name in self.config.path_labels:
                return self.get_full_path(self.config.get_path_info(name).path)
            else:
                raise exception
