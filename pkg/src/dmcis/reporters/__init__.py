"""Reporters module for rendering validation, run and sweep results.

Provides formatters for different output formats:
- Markdown (summary.md and sweep tables)
- JSON (machine-readable, for scripts and CI)
"""

from dmcis.reporters.json_reporter import JSONReporter
from dmcis.reporters.markdown import MarkdownReporter

__all__ = [
    "JSONReporter",
    "MarkdownReporter",
]
