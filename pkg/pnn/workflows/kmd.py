"""Workflow for regenerating samples by dynamic mode decomposition."""

import logging
from typing import Optional

from pnn.config.main import PipelineConfig
from pnn.kmd import dmd_spectrum
from pnn.tabular.samples import SampleTable
from pnn.utils import StrOrPathLike
from pnn.workflows.pipeline import BasePipelineWorkflow


class KmdWorkflow(BasePipelineWorkflow):
    """Fit a DMD model to the samples and regenerate them at the target step."""

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
            name="kmd",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        """Fit, regenerate and save."""
        with self.stage("load samples"):
            samples = self.load_samples()
        with self.stage("regenerate samples"):
            model, regenerated = self.fit_and_regenerate(samples)

        for eigenvalue, exponent in dmd_spectrum(model):
            self.logger.debug(f"Eigenvalue {eigenvalue:.12g}, exponent {exponent:.12g}")

        self.save_file(model, self.layout.fpath_dmd_model)
        self.save_tabular_file(
            SampleTable.from_samples(regenerated), self.layout.fpath_samples_kmd
        )
