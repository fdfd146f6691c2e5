"""Workflow utilities."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Protocol

from pnn.base import Base
from pnn.config.main import PipelineConfig
from pnn.layout import OutputLayout
from pnn.logger import get_logger
from pnn.tabular.base import BaseTabular
from pnn.utils import StrOrPathLike, add_path_timestamp

LOG_SUFFIX = ".log"


class Saveable(Protocol):
    def save(self, fpath: StrOrPathLike): ...


class BaseWorkflow(Base, ABC):
    """Base class with logging and file utilities."""

    log_prefix_stage = "[STAGE]"

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        name: str,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run=False,
    ):
        """Initialize the workflow instance.

        Parameters
        ----------
        dpath_root : pnn.utils.StrOrPathLike
            Path to the output directory.
        name : str
            Name of the workflow, used for logging.
        config : pnn.config.PipelineConfig, optional
            Pipeline settings, by default the built-in defaults
        fpath_layout : pnn.utils.StrOrPathLike, optional
            Path to a custom layout file, by default None
        logger : logging.Logger, optional
            Logger, by default None
        dry_run : bool, optional
            If True, compute results but do not write any file, by default False
        """
        if logger is None:
            logger = get_logger(name=name)
        if config is None:
            config = PipelineConfig()

        self.dpath_root = Path(dpath_root)
        self.name = name
        self.config = config
        self.fpath_layout = fpath_layout
        self.logger = logger
        self.dry_run = dry_run

        self.layout = OutputLayout(dpath_root=dpath_root, fpath_layout=fpath_layout)

    def __str__(self) -> str:
        return self._str_helper(names=["dpath_root", "name", "dry_run"])

    def generate_fpath_log(
        self,
        dnames_parent: Optional[str | list[str]] = None,
        fname_stem: Optional[str] = None,
    ) -> Path:
        """Generate a log file path."""
        if dnames_parent is None:
            dnames_parent = []
        if isinstance(dnames_parent, str):
            dnames_parent = [dnames_parent]
        if fname_stem is None:
            fname_stem = self.name
        dpath_log = self.layout.dpath_logs / self.name
        for dname in dnames_parent:
            dpath_log = dpath_log / dname
        return dpath_log / add_path_timestamp(f"{fname_stem}{LOG_SUFFIX}")

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Log the start of a pipeline stage and report its failure, if any."""
        self.logger.info(f"{self.log_prefix_stage} {name}")
        try:
            yield
        except Exception as exception:
            self.logger.error(f"Stage '{name}' failed: {exception}")
            raise

    def _should_write(self, fpath: Path) -> bool:
        if self.dry_run:
            self.logger.info(f"Not writing to {fpath} since this is a dry run")
            return False
        return True

    def save_tabular_file(self, tabular: BaseTabular, fpath: Path):
        """Save a tabular file."""
        if self._should_write(fpath):
            tabular.save(fpath)
            self.logger.info(f"Saved to {fpath}")

    def save_file(self, obj: Saveable, fpath: Path):
        """Save an object that knows how to write itself (neurons, models, ...)."""
        if self._should_write(fpath):
            obj.save(fpath)
            self.logger.info(f"Saved to {fpath}")

    def save_lines(self, lines: list[str], fpath: Path):
        """Write lines of text."""
        if self._should_write(fpath):
            fpath.parent.mkdir(parents=True, exist_ok=True)
            fpath.write_text("".join(f"{line}\n" for line in lines))
            self.logger.info(f"Saved to {fpath}")

    def run_setup(self, **kwargs):
        """Run the setup part of the workflow."""
        self.logger.info(f"========== BEGIN {self.name.upper()} WORKFLOW ==========")
        self.logger.info(self)
        if self.dry_run:
            self.logger.info("Doing a dry run")
        self.mkdir(self.dpath_root)

    @abstractmethod
    def run_main(self, **kwargs):
        """Run the main part of the workflow."""
        pass

    def run_cleanup(self, **kwargs):
        """Run the cleanup part of the workflow."""
        self.logger.info(f"========== END {self.name.upper()} WORKFLOW ==========")

    def run(self, **kwargs):
        """Run the workflow."""
        self.run_setup(**kwargs)
        self.run_main(**kwargs)
        self.run_cleanup(**kwargs)

    def mkdir(self, dpath, log_level=logging.INFO, **kwargs):
        """
        Create a directory (by default including parents).

        Do nothing if the directory already exists.
        """
        kwargs_to_use = {"parents": True, "exist_ok": True}
        kwargs_to_use.update(kwargs)

        dpath = Path(dpath)

        if not dpath.exists():
            self.logger.log(level=log_level, msg=f"Creating directory {dpath}")
            if not self.dry_run:
                dpath.mkdir(**kwargs_to_use)
        elif not dpath.is_dir():
            raise FileExistsError(
                f"Path already exists but is not a directory: {dpath}"
            )
