"""Workflows for estimating signals with learned neurons."""

import logging
from typing import Optional

from pnn.config.main import PipelineConfig
from pnn.estimation import active_path, estimate, topo_stats
from pnn.tabular.tables import TopoCountsTable, TopoMomentsTable
from pnn.utils import StrOrPathLike
from pnn.workflows.pipeline import BaseSignalWorkflow


class EstimateWorkflow(BaseSignalWorkflow):
    """Write one estimation report per signal."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        fpath_neurons: Optional[StrOrPathLike] = None,
        fpath_dictionary: Optional[StrOrPathLike] = None,
        signals: Optional[list[list[float]]] = None,
        fpath_signals: Optional[StrOrPathLike] = None,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run: bool = False,
    ):
        super().__init__(
            dpath_root=dpath_root,
            name="estimate",
            fpath_neurons=fpath_neurons,
            fpath_dictionary=fpath_dictionary,
            signals=signals,
            fpath_signals=fpath_signals,
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        """Estimate every signal and write the reports as JSON lines."""
        signals = self.get_signals()
        lines = []
        with self.stage("estimate"):
            for signal in signals:
                report = estimate(self.neurons, signal, self.dictionary)
                self.logger.info(
                    f"Signal {report.signal}: likelihood {report.likelihood:.6g}"
                    f", {len(report.active_path)} active neuron(s)"
                )
                lines.append(report.model_dump_json())
        self.save_lines(lines, self.layout.fpath_estimate)


class TopoWorkflow(BaseSignalWorkflow):
    """Tabulate the topological statistics of the active paths of signals."""

    def __init__(
        self,
        dpath_root: StrOrPathLike,
        fpath_neurons: Optional[StrOrPathLike] = None,
        fpath_dictionary: Optional[StrOrPathLike] = None,
        signals: Optional[list[list[float]]] = None,
        fpath_signals: Optional[StrOrPathLike] = None,
        config: Optional[PipelineConfig] = None,
        fpath_layout: Optional[StrOrPathLike] = None,
        logger: Optional[logging.Logger] = None,
        dry_run: bool = False,
    ):
        super().__init__(
            dpath_root=dpath_root,
            name="topo",
            fpath_neurons=fpath_neurons,
            fpath_dictionary=fpath_dictionary,
            signals=signals,
            fpath_signals=fpath_signals,
            config=config,
            fpath_layout=fpath_layout,
            logger=logger,
            dry_run=dry_run,
        )

    def run_main(self, **kwargs):
        signals = self.get_signals()
        stats = {}
        with self.stage("topological statistics"):
            for i_signal, signal in enumerate(signals):
                path = active_path(self.neurons, signal, self.dictionary)
                stats[i_signal] = topo_stats(path)
                self.logger.debug(
                    f"Signal {i_signal}: pair counts {stats[i_signal].counts}"
                )
        self.save_tabular_file(
            TopoCountsTable.from_stats(stats), self.layout.fpath_topo_counts
        )
        self.save_tabular_file(
            TopoMomentsTable.from_stats(stats), self.layout.fpath_topo_moments
        )
