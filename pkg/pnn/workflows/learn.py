"""Workflow for the learning pipeline."""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from pnn.config.main import PipelineConfig
from pnn.density import auxiliary_log_reciprocal
from pnn.exceptions import ConfigError
from pnn.indexes import Dictionary, Mode, MultiIndex
from pnn.learning.diagnostics import energy_bounds
from pnn.learning.frequency import (
    SampleWeights,
    connection_matrix,
    frequency_learning_rate,
    learn_frequency_grid,
    truncate_energy,
)
from pnn.learning.moment import (
    SpacingVectors,
    learn_moment_function,
    learn_moment_grid,
    moment_learning_rate,
)
from pnn.neurons import NeuronSet
from pnn.sampling import SampleMatrix
from pnn.tabular.grids import DensityTable
from pnn.tabular.tables import ConnectionTable
from pnn.utils import TORUS_LOWER, TORUS_UPPER, StrOrPathLike, format_float
from pnn.workflows.pipeline import BasePipelineWorkflow

AUXILIARY_DIMENSION = 2
AUXILIARY_REACH = 0.99


def connection_alphas(dictionary: Dictionary) -> list[MultiIndex]:
    """Rows of the connection table: -A/2, 0 and A/2 along the first axis."""
    half = dictionary.max_component // 2
    alphas = []
    for a in sorted({-half, 0, half}):
        components = [0] * dictionary.n
        components[0] = a
        alphas.append(MultiIndex(components))
    return alphas


class LearnWorkflow(BasePipelineWorkflow):
    """Learn neurons from samples and report the learning rate."""

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
            name="learn",
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def learn(self, density, dictionary: Dictionary) -> NeuronSet:
        """Learn the neurons from the density grid, or from the auxiliary density."""
        with self.stage("learn"):
            if self.config.AUXILIARY:
                if dictionary.n != AUXILIARY_DIMENSION:
                    raise ConfigError(
                        "The auxiliary density needs samples of dimension"
                        f" {AUXILIARY_DIMENSION}, got {dictionary.n}"
                    )
                self.logger.info("Learning from the auxiliary density")
                reach = AUXILIARY_REACH / math.sqrt(dictionary.n)
                neurons = learn_moment_function(
                    auxiliary_log_reciprocal,
                    dictionary,
                    self.config.STENCIL_STEP,
                    reach=reach,
                    logger=self.logger,
                )
            elif self.config.MODE == Mode.FREQUENCY:
                neurons = learn_frequency_grid(density, dictionary, logger=self.logger)
            else:
                neurons = learn_moment_grid(
                    density,
                    dictionary,
                    stencil_step=self.config.STENCIL_STEP,
                    logger=self.logger,
                )
        self.logger.info(f"Learned {neurons}")
        return neurons

    def clamp_to_box(self, samples: SampleMatrix) -> np.ndarray:
        """States clamped to [-1, 1], removing roundoff from the regeneration."""
        states = samples.states
        n_outside = int(np.sum((states < TORUS_LOWER) | (states > TORUS_UPPER)))
        if n_outside > 0:
            self.logger.debug(f"Clamping {n_outside} sample values to [-1, 1]")
        return np.clip(states, TORUS_LOWER, TORUS_UPPER)

    def run_main(self, **kwargs):
        """Run every stage and save the results."""
        samples = self.learning_samples()
        dictionary = self.get_dictionary(samples.n)
        density = self.estimate_density(self.smooth_cdf(samples))
        neurons = self.learn(density, dictionary)

        connections = None
        with self.stage("learning rate"):
            if self.config.MODE == Mode.FREQUENCY:
                states = self.clamp_to_box(samples)
                weights = SampleWeights.voronoi(states)
                rate_key = "frequency_learning_rate"
                rate = frequency_learning_rate(
                    states, weights, dictionary, logger=self.logger
                )
                alphas = connection_alphas(dictionary)
                connections = ConnectionTable.from_matrix(
                    alphas,
                    dictionary.indexes,
                    connection_matrix(states, weights, alphas, dictionary),
                )
            else:
                rate_key = "moment_learning_rate"
                rate = moment_learning_rate(
                    SpacingVectors.from_trajectory(samples.states)
                )
        self.logger.info(f"Learning rate: {rate:.12g}")

        with self.stage("truncation bound"):
            truncation_order = neurons.max_order // 2
            try:
                _, bound = truncate_energy(neurons, truncation_order)
            except OverflowError:
                self.logger.warning("Truncation bound overflows")
                bound = math.inf

        if not self.config.AUXILIARY:
            low, high = energy_bounds(density, neurons)
            self.logger.debug(f"ln(1/p0) - dc ranges over [{low:.6g}, {high:.6g}]")

        report = [
            f"mode\t{self.config.MODE.value}",
            f"samples\t{samples.m}",
            f"{rate_key}\t{format_float(rate)}",
            f"dc\t{format_float(neurons.dc)}",
            f"truncation_order\t{truncation_order}",
            f"truncation_bound\t{format_float(bound)}",
        ]

        self.save_file(neurons, self.layout.fpath_neurons)
        self.save_tabular_file(
            DensityTable.from_grid(density), self.layout.fpath_density
        )
        self.save_lines(report, self.layout.fpath_rate)
        if connections is not None:
            self.save_tabular_file(connections, self.layout.fpath_connections)
        self.save_file(dictionary, self.layout.fpath_dictionary)
        self.save_file(self.config, self.layout.fpath_config)
