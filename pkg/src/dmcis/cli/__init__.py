"""CLI module for the dmcis command-line interface."""

from dmcis.cli.main import cli

__all__ = ["cli"]
