"""Workflow for the likelihood table of the standing wave."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Optional

import pandas as pd

from pnn.config.main import PipelineConfig
from pnn.density import DensityGrid, auxiliary_density
from pnn.exceptions import DataError
from pnn.tabular.grids import DensityTable
from pnn.tabular.tables import Table1Table
from pnn.utils import StrOrPathLike
from pnn.workflows.pipeline import BasePipelineWorkflow

TABLE1_POSITIONS = (0.0, 1 / math.sqrt(2), 1.0, 2.0)


class Table1Workflow(BasePipelineWorkflow):
    """Compare the auxiliary density p_a and the density grid p0 along xdot = 0.

    The density grid is read from the density file if it exists, otherwise it is
    estimated from the samples (all state components).
    """

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        fpath_density: Optional[StrOrPathLike] = None,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run: bool = False,
    ):
        super().__init__(
            dpath_root=dpath_root,
            name="table1",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )
        self.fpath_density = fpath_density

    def get_density(self) -> DensityGrid:
        if self.fpath_density is None:
            fpath_density = self.layout.fpath_density
        else:
            fpath_density = Path(self.fpath_density)

        if fpath_density.exists():
            self.logger.info(f"Loading the density grid from {fpath_density}")
            density = DensityTable.load(fpath_density).to_grid()
        else:
            self.logger.info(f"No density file at {fpath_density}, estimating one")
            samples = self.regenerated_samples()
            density = self.estimate_density(self.smooth_cdf(samples))

        if density.grid.n != 2:
            raise DataError(
                f"The likelihood table needs a 2D density grid, got {density.grid.n}D"
            )
        return density

    def run_main(self, **kwargs):
        density = self.get_density()
        with self.stage("likelihoods"):
            records = [
                {
                    "x": x,
                    "xdot": 0.0,
                    "p_a": auxiliary_density(x, 0.0),
                    "p0": density.value_at((x, 0.0)),
                }
                for x in TABLE1_POSITIONS
            ]
        table = Table1Table(pd.DataFrame(records))
        self.logger.info(f"Likelihoods:\n{table.to_string(index=False)}")
        self.save_tabular_file(table, self.layout.fpath_table1)
