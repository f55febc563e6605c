"""Planar geometry primitives."""

import math
from dataclasses import dataclass
from typing import Any, Sequence


@dataclass(frozen=True)
class GeoPoint:
    """A point on the planar simulation field, in meters."""
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Coordinates must be finite, got ({self.x}, {self.y})")

    def to_dict(self) -> dict[str, Any]:
        return {"x": self.x, "y": self.y}

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "GeoPoint":
        if len(values) != 2:
            raise ValueError(f"Expected [x, y], got {list(values)!r}")
        return cls(float(values[0]), float(values[1]))
