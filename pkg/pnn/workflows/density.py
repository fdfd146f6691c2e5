"""Workflows for the empirical CDF and the density grid."""

import logging
from typing import Optional

from pnn.config.main import PipelineConfig
from pnn.density import ecdf_stability
from pnn.tabular.grids import CdfTable, DensityTable
from pnn.tabular.tables import StabilityTable
from pnn.utils import StrOrPathLike
from pnn.workflows.pipeline import BasePipelineWorkflow


class EcdfWorkflow(BasePipelineWorkflow):
    """Smooth the empirical CDF of the samples onto a grid."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run: bool = False,
    ):
        super().__init__(
            dpath_root=dpath_root,
            name="ecdf",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        """Write the CDF grid and, if sizes are configured, the stability report."""
        samples = self.learning_samples()
        cdf_grid = self.smooth_cdf(samples)
        self.save_tabular_file(CdfTable.from_grid(cdf_grid), self.layout.fpath_cdf)

        if len(self.config.STABILITY_SIZES) > 0:
            with self.stage("CDF stability"):
                rows = ecdf_stability(
                    samples.states, self.config.STABILITY_SIZES, cdf_grid.grid
                )
            for size, distance in rows:
                self.logger.info(f"m={size}: L1 distance {distance:.6g}")
            self.save_tabular_file(
                StabilityTable.from_rows(rows), self.layout.fpath_ecdf_stability
            )


class DensityWorkflow(BasePipelineWorkflow):
    """Estimate the governing density on a grid."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run: bool = False,
    ):
        super().__init__(
            dpath_root=dpath_root,
            name="density",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        samples = self.learning_samples()
        density = self.estimate_density(self.smooth_cdf(samples))
        self.logger.info(f"Density mass: {density.mass():.12g}")
        self.save_tabular_file(
            DensityTable.from_grid(density), self.layout.fpath_density
        )
