"""Base parser class for scenario files."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from dmcis.core.models import Scenario


class ScenarioError(Exception):
    """Exception raised when a scenario file cannot be loaded.

    Attributes:
        message: What is wrong
        path: Scenario file, if known
        line: 1-based line of the offending key or entry, if known
    """

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
    ) -> None:
        self.message = message
        self.path = path
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        location = self.path or "<scenario>"
        if self.line is not None:
            location = f"{location}:{self.line}"
        return f"{location}: {self.message}"


class BaseParser(ABC):
    """Abstract base class for scenario parsers."""

    @abstractmethod
    def parse(self, content: str, source: Optional[str] = None) -> Scenario:
        """Parse scenario content.

        Args:
            content: Raw scenario text
            source: File name used in diagnostics and as the default name

        Returns:
            The loaded Scenario

        Raises:
            ScenarioError: If parsing or schema validation fails
        """
        pass

    def parse_file(self, path: Path) -> Scenario:
        """Parse a scenario file.

        Args:
            path: Path to the scenario file

        Returns:
            The loaded Scenario
        """
        content = path.read_text(encoding="utf-8")
        return self.parse(content, source=str(path))
