"""
Command-line module.

Run configuration, the verification pipeline, report writers and the
``sbv`` entry point.
"""

from src.cli.config import ReportFormat, RunConfig
from src.cli.pipeline import run_converge, run_sweep, run_verify
from src.cli.report import VerificationReport

__all__ = [
    "ReportFormat",
    "RunConfig",
    "VerificationReport",
    "run_converge",
    "run_sweep",
    "run_verify",
]
