"""Workflow for generating standing-wave samples."""

import logging
from typing import Optional

from pnn.config.main import PipelineConfig
from pnn.tabular.samples import SampleTable
from pnn.utils import StrOrPathLike
from pnn.workflows.pipeline import BasePipelineWorkflow


class SimulateWorkflow(BasePipelineWorkflow):
    """Write samples of the standing wave x'' + x = 0."""

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
            name="simulate",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        """Generate and save the samples."""
        with self.stage("simulate"):
            samples = self.config.STANDING_WAVE.simulate()
        self.logger.info(f"Generated {samples.m} samples of dimension {samples.n}")
        self.save_tabular_file(
            SampleTable.from_samples(samples), self.layout.fpath_samples
        )
