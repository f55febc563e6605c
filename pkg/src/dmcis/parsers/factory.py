"""Entry point for loading scenario files."""

from pathlib import Path

from dmcis.core.models import Scenario
from dmcis.parsers.base import BaseParser


def get_parser() -> BaseParser:
    """Get the scenario parser (YAML, with JSON accepted as a subset)."""
    # Lazy import to avoid a cycle through dmcis.sensing
    from dmcis.parsers.yaml_scenario import ScenarioParser

    return ScenarioParser()


def parse_scenario(path: Path) -> Scenario:
    """Parse a scenario file.

    Args:
        path: Path to the scenario file

    Returns:
        The loaded Scenario, clustered and with collapsed pairs resolved

    Raises:
        ScenarioError: If parsing or schema validation fails
        FileNotFoundError: If the file doesn't exist
    """
    if not path.exists():
        raise FileNotFoundError(f"Scenario file not found: {path}")
    return get_parser().parse_file(path)
