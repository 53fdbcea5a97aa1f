"""Session parsing, pipelines and the argparse surface."""

from .commands import EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE_ERROR, main

__all__ = ["EXIT_CHECK_FAILED", "EXIT_PASS", "EXIT_USAGE_ERROR", "main"]
