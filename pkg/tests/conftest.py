"""Pytest configuration and fixtures for dmcis tests."""

from pathlib import Path
from typing import Callable

import pytest

from dmcis.core.models import HazardClass, Scenario
from tests.builders import line_scenario, line_yaml


@pytest.fixture
def flood_scenario() -> Scenario:
    """Deterministic flood on the SDCC-MAP-DPC line; one batch at t=10."""
    return line_scenario(HazardClass.FLOOD)


@pytest.fixture
def earthquake_scenario() -> Scenario:
    """Same line with an earthquake, which takes the emergency bypass."""
    return line_scenario(HazardClass.EARTHQUAKE)


@pytest.fixture
def scenario_file(tmp_path: Path) -> Path:
    """The flood line scenario written as YAML."""
    path = tmp_path / "line.yaml"
    path.write_text(line_yaml())
    return path


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write arbitrary scenario text and return its path."""

    def _write(content: str, name: str = "scenario.yaml") -> Path:
        path = tmp_path / name
        path.write_text(content)
        return path

    return _write
