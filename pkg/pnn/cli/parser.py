"""Parsers for the CLI."""

import logging
from argparse import ArgumentParser, HelpFormatter, _ActionsContainer, _SubParsersAction
from pathlib import Path

from pnn.indexes import Mode

PROGRAM_NAME = "pnn"
COMMAND_SIMULATE = "simulate"
COMMAND_KMD = "kmd"
COMMAND_ECDF = "ecdf"
COMMAND_DENSITY = "density"
COMMAND_LEARN = "learn"
COMMAND_ESTIMATE = "estimate"
COMMAND_TABLE1 = "table1"
COMMAND_TOPO = "topo"

DEFAULT_VERBOSITY = "2"  # info
VERBOSITY_TO_LOG_LEVEL_MAP = {
    "0": logging.ERROR,
    "1": logging.WARNING,
    "2": logging.INFO,
    "3": logging.DEBUG,
}


def add_arg_config(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --config argument to the parser."""
    parser.add_argument(
        "--config",
        dest="fpath_config",
        type=Path,
        required=False,
        help=(
            "Path to a pipeline config file (JSON)."
            " Command-line options take precedence over the file."
        ),
    )
    return parser


def add_arg_output_dir(parser: _ActionsContainer) -> _ActionsContainer:
    """Add an --output-dir argument to the parser."""
    parser.add_argument(
        "--output-dir",
        dest="dpath_root",
        type=Path,
        required=False,
        help="Directory for all output files (default: OUTPUT_DIR in the config).",
    )
    return parser


def add_args_standing_wave(parser: _ActionsContainer) -> _ActionsContainer:
    """Add standing-wave generator arguments to the parser."""
    parser.add_argument("--t-start", type=float, help="Start time.")
    parser.add_argument("--t-end", type=float, help="End time (inclusive).")
    parser.add_argument("--step", type=float, help="Time step between samples.")
    parser.add_argument("--amplitude", type=float, help="Amplitude, in [-1, 1].")
    return parser


def add_arg_samples(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --samples argument to the parser."""
    parser.add_argument(
        "--samples",
        type=Path,
        required=False,
        help=(
            "Path to a sample CSV file (columns t,x1,...,xn)"
            ". If not given, standing-wave samples are generated."
        ),
    )
    return parser


def add_args_kmd(parser: _ActionsContainer) -> _ActionsContainer:
    """Add regeneration arguments to the parser."""
    parser.add_argument(
        "--target-step",
        type=float,
        help="Time step of the regenerated samples.",
    )
    parser.add_argument(
        "--rank-tol",
        type=float,
        help="Relative cutoff on the singular values of the snapshot matrix.",
    )
    return parser


def add_args_learning_samples(parser: _ActionsContainer) -> _ActionsContainer:
    """Add arguments for the samples used to estimate the density."""
    parser = add_arg_samples(parser)
    parser = add_args_kmd(parser)
    parser.add_argument(
        "--no-kmd",
        action="store_true",
        help="Do not regenerate the samples before estimating the density.",
    )
    parser.add_argument(
        "--learn-axes",
        type=int,
        nargs="+",
        help="State components to learn from (1-based, default: all).",
    )
    parser.add_argument(
        "--bins",
        type=int,
        help="Number of grid bins per axis (default: 1000 in 1D, 300 in 2D, 32).",
    )
    return parser


def add_args_dictionary(parser: _ActionsContainer) -> _ActionsContainer:
    """Add dictionary arguments to the parser."""
    parser.add_argument(
        "--max-order",
        type=int,
        help="Largest total order |alpha| in the dictionary.",
    )
    parser.add_argument(
        "--component-bound",
        type=int,
        nargs="+",
        help="Largest |alpha_i|, for all axes or one value per axis.",
    )
    return parser


def add_args_signals(parser: _ActionsContainer) -> _ActionsContainer:
    """Add neuron and signal arguments to the parser."""
    parser.add_argument(
        "--neurons",
        dest="fpath_neurons",
        type=Path,
        help="Path to a neuron file (default: neurons.json in the output directory).",
    )
    parser.add_argument(
        "--dictionary",
        dest="fpath_dictionary",
        type=Path,
        help=(
            "Path to a dictionary file restricting the active paths"
            " (default: DICTIONARY in the config, else all learned neurons)."
        ),
    )
    signals = parser.add_mutually_exclusive_group()
    signals.add_argument(
        "--signal",
        type=float,
        nargs="+",
        help="Components of a single signal.",
    )
    signals.add_argument(
        "--signals",
        dest="fpath_signals",
        type=Path,
        help="Path to a signal CSV file (columns x1,...,xn), one signal per row.",
    )
    return parser


def add_arg_layout(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --layout argument to the parser."""
    parser.add_argument(
        "--layout",
        dest="fpath_layout",
        type=Path,
        required=False,
        help=(
            "Path to a custom layout specification file"
            ", to be used instead of the default layout."
        ),
    )
    return parser


def add_arg_dry_run(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --dry-run argument to the parser."""
    parser.add_argument(
        "--dry-run",
        action="store_true",
        help="Compute the results but do not write any file.",
    )
    return parser


def add_arg_help(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --help argument to the parser."""
    parser.add_argument(
        "-h",
        "--help",
        action="help",
        help="Show this help message and exit.",
    )
    return parser


def add_arg_verbosity(parser: _ActionsContainer) -> _ActionsContainer:
    """Add a --verbosity argument to the parser."""

    def _verbosity_to_log_level(verbosity: str):
        try:
            return VERBOSITY_TO_LOG_LEVEL_MAP[verbosity]
        except KeyError:
            parser.error(
                f"Invalid verbosity level: {verbosity}."
                f" Valid levels are {list(VERBOSITY_TO_LOG_LEVEL_MAP.keys())}."
            )

    parser.add_argument(
        "--verbosity",
        type=_verbosity_to_log_level,
        default=DEFAULT_VERBOSITY,
        help=(
            "Verbosity level, from 0 (least verbose) to 3 (most verbose)."
            f" Default: {DEFAULT_VERBOSITY}."
        ),
    )
    return parser


def _add_parser(
    subparsers: _SubParsersAction,
    command: str,
    description: str,
    formatter_class: type[HelpFormatter],
) -> ArgumentParser:
    return subparsers.add_parser(
        command,
        description=description,
        help=description,
        formatter_class=formatter_class,
        add_help=False,
    )


def add_subparser_simulate(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for simulate command."""
    description = "Sample the standing wave x'' + x = 0."
    parser = _add_parser(subparsers, COMMAND_SIMULATE, description, formatter_class)
    parser = add_args_standing_wave(parser)
    return parser


def add_subparser_kmd(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for kmd command."""
    description = "Regenerate samples by dynamic mode decomposition."
    parser = _add_parser(subparsers, COMMAND_KMD, description, formatter_class)
    parser = add_arg_samples(parser)
    parser = add_args_kmd(parser)
    return parser


def add_subparser_ecdf(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for ecdf command."""
    description = "Smooth the empirical distribution function onto a grid."
    parser = _add_parser(subparsers, COMMAND_ECDF, description, formatter_class)
    parser = add_args_learning_samples(parser)
    parser.add_argument(
        "--stability-sizes",
        type=int,
        nargs="+",
        help="Compare the CDFs of m and 2m samples for each given m.",
    )
    return parser


def add_subparser_density(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for density command."""
    description = "Estimate the governing density on a grid."
    parser = _add_parser(subparsers, COMMAND_DENSITY, description, formatter_class)
    parser = add_args_learning_samples(parser)
    return parser


def add_subparser_learn(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for learn command."""
    description = "Learn neurons and report the learning rate."
    parser = _add_parser(subparsers, COMMAND_LEARN, description, formatter_class)
    parser.add_argument(
        "--mode",
        choices=[mode.value for mode in Mode],
        help="Learning mode.",
    )
    parser = add_args_learning_samples(parser)
    parser = add_args_dictionary(parser)
    parser.add_argument(
        "--auxiliary",
        action="store_true",
        help="Learn from the auxiliary density (moment mode, 2D samples).",
    )
    parser.add_argument(
        "--stencil-step",
        type=float,
        help="Step of the central difference stencils (moment mode).",
    )
    return parser


def add_subparser_estimate(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for estimate command."""
    description = "Compute likelihoods, active paths and POANs of signals."
    parser = _add_parser(subparsers, COMMAND_ESTIMATE, description, formatter_class)
    parser = add_args_signals(parser)
    return parser


def add_subparser_table1(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for table1 command."""
    description = "Tabulate the auxiliary and estimated likelihoods along xdot = 0."
    parser = _add_parser(subparsers, COMMAND_TABLE1, description, formatter_class)
    parser.add_argument(
        "--density",
        dest="fpath_density",
        type=Path,
        help=(
            "Path to a 2D density file (default: density.csv in the output"
            " directory, estimated from the samples if missing)."
        ),
    )
    parser = add_args_learning_samples(parser)
    return parser


def add_subparser_topo(
    subparsers: _SubParsersAction,
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Add subparser for topo command."""
    description = "Tabulate pair statistics of the active paths of signals."
    parser = _add_parser(subparsers, COMMAND_TOPO, description, formatter_class)
    parser = add_args_signals(parser)
    return parser


def get_global_parser(
    formatter_class: type[HelpFormatter] = HelpFormatter,
) -> ArgumentParser:
    """Get the global parser."""
    global_parser = ArgumentParser(
        prog=PROGRAM_NAME,
        description="Learn probabilistic neurons from samples and estimate signals.",
        epilog=(
            f"Run '{PROGRAM_NAME} COMMAND --help'"
            " for more information on a subcommand."
        ),
        formatter_class=formatter_class,
        add_help=False,
    )
    add_arg_help(global_parser)

    # subcommand parsers
    subparsers = global_parser.add_subparsers(
        title="Subcommands",
        dest="command",
        required=True,
    )
    add_subparser_simulate(subparsers, formatter_class=formatter_class)
    add_subparser_kmd(subparsers, formatter_class=formatter_class)
    add_subparser_ecdf(subparsers, formatter_class=formatter_class)
    add_subparser_density(subparsers, formatter_class=formatter_class)
    add_subparser_learn(subparsers, formatter_class=formatter_class)
    add_subparser_estimate(subparsers, formatter_class=formatter_class)
    add_subparser_table1(subparsers, formatter_class=formatter_class)
    add_subparser_topo(subparsers, formatter_class=formatter_class)

    # add common/global options to subcommand parsers
    for parser in list(subparsers.choices.values()):
        common_arg_group = parser.add_argument_group("Global options")
        add_arg_config(common_arg_group)
        add_arg_output_dir(common_arg_group)
        add_arg_layout(common_arg_group)
        add_arg_verbosity(common_arg_group)
        add_arg_dry_run(common_arg_group)
        add_arg_help(common_arg_group)

    return global_parser
