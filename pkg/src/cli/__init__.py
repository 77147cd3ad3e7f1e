"""Command-line front end and the verification suite."""

from src.cli.commands import CommandContext, build_parser, run_command
from src.cli.report import Report, ReportEntry
from src.cli.suite import CATEGORIES, SuiteRunner

__all__ = [
    "CATEGORIES",
    "CommandContext",
    "Report",
    "ReportEntry",
    "SuiteRunner",
    "build_parser",
    "run_command",
]
