"""
cskit - exact knot invariants, Verlinde dimensions and torus quantisation checks.

This module implements the command-line entry point: it configures logging,
loads the toolkit configuration and dispatches to the sub-command handlers.
Run it as ``python -m src.main <command> [flags]``.
"""

import logging
import sys
from typing import List, Optional

from rich.console import Console
from rich.logging import RichHandler

from src.cli.commands import CommandContext, build_parser, run_command
from src.config.settings import load_or_create_config
from src.utils.errors import EXIT_INPUT

# Configure logging; records go to stderr so --json output stays clean
logging.basicConfig(
    level=logging.INFO,
    format="%(message)s",
    handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
    force=True,
)
logger = logging.getLogger("cskit")


def _set_verbosity(verbose: bool, quiet: bool) -> None:
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif quiet:
        logging.getLogger().setLevel(logging.WARNING)
    else:
        logging.getLogger().setLevel(logging.INFO)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point for the command line.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns:
        int: Process exit code (0 ok, 2 input, 3 mathematical failure, 4 calibration).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        if e.code is None or isinstance(e.code, int):
            return e.code or 0
        return EXIT_INPUT

    _set_verbosity(getattr(args, "verbose", False), getattr(args, "quiet", False))
    config = load_or_create_config(getattr(args, "config", None))
    context = CommandContext(
        config=config,
        json_output=getattr(args, "json", False),
        calibration_override=getattr(args, "calibration", None),
    )
    logger.debug("Running %s", args.command)
    return run_command(args.handler, args, context)


if __name__ == "__main__":
    sys.exit(main())
