"""Base class for workflows that run stages of the learning pipeline."""

from __future__ import annotations

from abc import ABC
from functools import cached_property
from pathlib import Path
from typing import Optional

import numpy as np

from pnn.density import (
    CdfGrid,
    DensityGrid,
    cdf_to_grid,
    density_from_cdf,
    empirical_cdf,
)
from pnn.exceptions import ConfigError, DataError
from pnn.indexes import Dictionary
from pnn.kmd import DmdModel, dmd_fit, dmd_regenerate
from pnn.neurons import NeuronSet
from pnn.sampling import SampleMatrix, build_snapshots
from pnn.tabular.samples import SampleTable, SignalTable
from pnn.utils import StrOrPathLike
from pnn.workflows.base import BaseWorkflow


class BasePipelineWorkflow(BaseWorkflow, ABC):
    """A workflow that loads samples and runs some of the learning stages."""

    def load_samples(self) -> SampleMatrix:
        """Read the sample file, or generate standing-wave samples."""
        fpath_samples = self.config.SAMPLES
        if fpath_samples is None:
            samples = self.config.STANDING_WAVE.simulate()
            self.logger.info(
                f"Generated {samples.m} standing-wave samples with step {samples.step}"
            )
            return samples

        if not fpath_samples.exists():
            raise DataError(f"Sample file not found: {fpath_samples}")
        samples = SampleTable.load(fpath_samples).to_samples()
        self.logger.info(
            f"Loaded {samples.m} samples of dimension {samples.n} from {fpath_samples}"
        )
        return samples

    def get_regeneration_interval(self, samples: SampleMatrix) -> tuple[float, float]:
        """Time interval of the regenerated samples.

        Generated samples are regenerated over the whole generator interval, and
        samples from a file over their own time span.
        """
        if self.config.SAMPLES is None:
            return self.config.STANDING_WAVE.T_START, self.config.STANDING_WAVE.T_END
        return samples.times[0], samples.times[-1]

    def fit_and_regenerate(
        self, samples: SampleMatrix
    ) -> tuple[DmdModel, SampleMatrix]:
        """Fit a DMD model and regenerate the samples at the target step."""
        kmd = self.config.KMD
        snapshots, snapshots_shifted = build_snapshots(samples)
        model = dmd_fit(
            snapshots,
            snapshots_shifted,
            samples.step,
            rank_tol=kmd.RANK_TOL,
            start_time=samples.start_time,
            logger=self.logger,
        )
        self.logger.info(f"Fitted a DMD model of rank {model.rank}")
        t_start, t_end = self.get_regeneration_interval(samples)
        regenerated = dmd_regenerate(
            model, t_start, t_end, kmd.TARGET_STEP, logger=self.logger
        )
        self.logger.info(
            f"Regenerated {regenerated.m} samples with step {regenerated.step}"
        )
        return model, regenerated

    def regenerated_samples(self) -> SampleMatrix:
        """Samples after optional regeneration."""
        with self.stage("load samples"):
            samples = self.load_samples()
        if self.config.KMD.ENABLED:
            with self.stage("regenerate samples"):
                _, samples = self.fit_and_regenerate(samples)
        else:
            self.logger.info("Sample regeneration is disabled")
        return samples

    def learning_samples(self) -> SampleMatrix:
        """Samples after optional regeneration, restricted to the learning axes."""
        return self.regenerated_samples().select_axes(self.config.LEARN_AXES)

    def smooth_cdf(self, samples: SampleMatrix) -> CdfGrid:
        with self.stage("empirical CDF"):
            cdf = empirical_cdf(samples.states)
            bins = self.config.get_bins_per_axis(samples.n)
            self.logger.info(
                f"Smoothing the CDF of {cdf.m} samples on {bins} bins per axis"
            )
            return cdf_to_grid(cdf, bins)

    def estimate_density(self, cdf_grid: CdfGrid) -> DensityGrid:
        with self.stage("density"):
            return density_from_cdf(cdf_grid, logger=self.logger)

    def get_dictionary(self, n: int) -> Dictionary:
        """Build the configured dictionary for dimension n."""
        if self.config.DICTIONARY is None:
            raise ConfigError("No DICTIONARY specified in the config")
        dictionary = self.config.DICTIONARY.build(n, self.config.MODE)
        self.logger.info(
            f"Built a {dictionary.mode.value} dictionary of {len(dictionary)} indexes"
        )
        return dictionary


class BaseSignalWorkflow(BaseWorkflow, ABC):
    """A workflow that evaluates learned neurons at signals."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        name: str,
        fpath_neurons: Optional[StrOrPathLike] = None,
        fpath_dictionary: Optional[StrOrPathLike] = None,
        signals: Optional[list[list[float]]] = None,
        fpath_signals: Optional[StrOrPathLike] = None,
        **kwargs,
    ):
        super().__init__(dpath_root=dpath_root, name=name, **kwargs)
        self.fpath_neurons = fpath_neurons
        self.fpath_dictionary = fpath_dictionary
        self.signals = signals
        self.fpath_signals = fpath_signals

    def __str__(self) -> str:
        return self._str_helper(
            names=["dpath_root", "name", "fpath_neurons", "fpath_signals", "dry_run"]
        )

    @cached_property
    def neurons(self) -> NeuronSet:
        """Load the learned neurons."""
        if self.fpath_neurons is None:
            fpath_neurons = self.layout.fpath_neurons
        else:
            fpath_neurons = Path(self.fpath_neurons)
        if not fpath_neurons.exists():
            raise DataError(f"Neuron file not found: {fpath_neurons}")
        self.logger.info(f"Loading neurons from {fpath_neurons}")
        return NeuronSet.load(fpath_neurons)

    @cached_property
    def dictionary(self) -> Optional[Dictionary]:
        """Dictionary restricting the active paths, if any.

        A dictionary file takes precedence over the DICTIONARY config field.
        Without either, the active path runs over all learned neurons.
        """
        if self.fpath_dictionary is not None:
            fpath_dictionary = Path(self.fpath_dictionary)
            if not fpath_dictionary.exists():
                raise DataError(f"Dictionary file not found: {fpath_dictionary}")
            return Dictionary.load(fpath_dictionary)
        if self.config.DICTIONARY is not None:
            return self.config.DICTIONARY.build(self.neurons.n, self.neurons.mode)
        return None

    def get_signals(self) -> np.ndarray:
        """Signals from the command line, else a signal file, else the config."""
        if self.signals is not None:
            signals = np.atleast_2d(np.asarray(self.signals, dtype=float))
        elif self.fpath_signals is not None:
            fpath_signals = Path(self.fpath_signals)
            if not fpath_signals.exists():
                raise DataError(f"Signal file not found: {fpath_signals}")
            signals = SignalTable.load(fpath_signals).to_signals()
        elif self.config.SIGNALS is not None:
            signals = np.atleast_2d(np.asarray(self.config.SIGNALS, dtype=float))
        else:
            raise ConfigError(
                "No signal given: use --signal, --signals or the SIGNALS config field"
            )
        if signals.size == 0:
            raise ConfigError("No signal given")
        self.logger.info(f"Got {len(signals)} signal(s)")
        return signals
