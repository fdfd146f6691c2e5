"""Command-line interface."""

import json
import sys
from argparse import Namespace
from pathlib import Path
from typing import Optional, Sequence

from rich_argparse import RichHelpFormatter

from pnn.cli.parser import (
    COMMAND_DENSITY,
    COMMAND_ECDF,
    COMMAND_ESTIMATE,
    COMMAND_KMD,
    COMMAND_LEARN,
    COMMAND_SIMULATE,
    COMMAND_TABLE1,
    COMMAND_TOPO,
    get_global_parser,
)
from pnn.config.main import PipelineConfig
from pnn.exceptions import ConfigError, get_exit_code
from pnn.logger import add_logfile, get_logger
from pnn.workflows.density import DensityWorkflow, EcdfWorkflow
from pnn.workflows.estimate import EstimateWorkflow, TopoWorkflow
from pnn.workflows.kmd import KmdWorkflow
from pnn.workflows.learn import LearnWorkflow
from pnn.workflows.simulate import SimulateWorkflow
from pnn.workflows.table1 import Table1Workflow

PIPELINE_WORKFLOWS = {
    COMMAND_SIMULATE: SimulateWorkflow,
    COMMAND_KMD: KmdWorkflow,
    COMMAND_ECDF: EcdfWorkflow,
    COMMAND_DENSITY: DensityWorkflow,
    COMMAND_LEARN: LearnWorkflow,
}
SIGNAL_WORKFLOWS = {
    COMMAND_ESTIMATE: EstimateWorkflow,
    COMMAND_TOPO: TopoWorkflow,
}


def load_config(fpath_config: Optional[Path]) -> PipelineConfig:
    """Load the config file, or return the defaults if there is none."""
    if fpath_config is None:
        return PipelineConfig()
    if not fpath_config.exists():
        raise ConfigError(f"Config file not found: {fpath_config}")
    try:
        return PipelineConfig.load(fpath_config)
    except json.JSONDecodeError as exception:
        raise ConfigError(f"Config file {fpath_config} is not valid JSON: {exception}")


def get_config_overrides(args: Namespace) -> dict:
    """Map command-line options to dotted config keys (None means not given)."""
    options = vars(args)
    component_bound = options.get("component_bound")
    if component_bound is not None and len(component_bound) == 1:
        component_bound = component_bound[0]
    return {
        "STANDING_WAVE.T_START": options.get("t_start"),
        "STANDING_WAVE.T_END": options.get("t_end"),
        "STANDING_WAVE.STEP": options.get("step"),
        "STANDING_WAVE.AMPLITUDE": options.get("amplitude"),
        "SAMPLES": options.get("samples"),
        "KMD.ENABLED": False if options.get("no_kmd") else None,
        "KMD.TARGET_STEP": options.get("target_step"),
        "KMD.RANK_TOL": options.get("rank_tol"),
        "LEARN_AXES": options.get("learn_axes"),
        "BINS_PER_AXIS": options.get("bins"),
        "STABILITY_SIZES": options.get("stability_sizes"),
        "MODE": options.get("mode"),
        "DICTIONARY.MAX_ORDER": options.get("max_order"),
        "DICTIONARY.COMPONENT_BOUND": component_bound,
        "AUXILIARY": True if options.get("auxiliary") else None,
        "STENCIL_STEP": options.get("stencil_step"),
        "OUTPUT_DIR": options.get("dpath_root"),
    }


def cli(argv: Sequence[str] = None) -> None:
    """Entrypoint to the command-line interface."""
    if argv is None:
        argv = sys.argv
    parser = get_global_parser(formatter_class=RichHelpFormatter)
    args = parser.parse_args(argv[1:])

    # common arguments
    command = args.command
    fpath_layout = args.fpath_layout
    logger = get_logger(name=command, level=args.verbosity)
    dry_run = args.dry_run

    try:
        config = load_config(args.fpath_config).with_overrides(
            get_config_overrides(args)
        )
        dpath_root = config.OUTPUT_DIR
        if dpath_root is None:
            raise ConfigError(
                "No output directory: use --output-dir or the OUTPUT_DIR config field"
            )

        # to pass to all workflows
        workflow_kwargs = dict(
            config=config, fpath_layout=fpath_layout, logger=logger, dry_run=dry_run
        )

        if command in PIPELINE_WORKFLOWS:
            workflow = PIPELINE_WORKFLOWS[command](
                dpath_root=dpath_root,
                **workflow_kwargs,
            )
        elif command in SIGNAL_WORKFLOWS:
            workflow = SIGNAL_WORKFLOWS[command](
                dpath_root=dpath_root,
                fpath_neurons=args.fpath_neurons,
                fpath_dictionary=args.fpath_dictionary,
                signals=None if args.signal is None else [args.signal],
                fpath_signals=args.fpath_signals,
                **workflow_kwargs,
            )
        elif command == COMMAND_TABLE1:
            workflow = Table1Workflow(
                dpath_root=dpath_root,
                fpath_density=args.fpath_density,
                **workflow_kwargs,
            )
        else:
            raise ValueError(f"Unsupported command: {command}")

        # no log file in dry runs since nothing is written
        if not dry_run:
            add_logfile(logger, workflow.generate_fpath_log())

        # run the workflow
        workflow.run()

    except Exception as exception:
        logger.exception("Error when creating/running a workflow")
        sys.exit(get_exit_code(exception))
