"""Scenario file loading.

Scenarios are YAML documents (JSON is accepted too); every schema error is
reported as a ScenarioError carrying file and line.
"""

from dmcis.parsers.base import BaseParser, ScenarioError
from dmcis.parsers.factory import get_parser, parse_scenario

__all__ = [
    "BaseParser",
    "ScenarioError",
    "get_parser",
    "parse_scenario",
]
