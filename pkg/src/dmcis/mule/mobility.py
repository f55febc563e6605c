"""MAP movement: deterministic patrol loop or seeded random waypoint."""

from typing import Optional

import numpy as np

from dmcis.core.models import GeoPoint, MapUnit, MobilityMode


class MapMotion:
    """Position state of one MAP.

    Patrol mode walks the closed waypoint loop at constant speed, wrapping
    from the last waypoint to the first. A single-waypoint route is a
    stationary post. Random-waypoint mode draws successive targets inside
    ``bounds`` from the MAP's own random stream.
    """

    def __init__(
        self,
        map_unit: MapUnit,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        self.map_unit = map_unit
        self.position = map_unit.start
        self._rng = rng
        points = np.array([p.as_tuple() for p in map_unit.route], dtype=float)
        closed = np.vstack([points, points[:1]])
        self._points = closed
        self._legs = np.hypot(*np.diff(closed, axis=0).T)
        self._cumulative = np.concatenate([[0.0], np.cumsum(self._legs)])
        self.perimeter = float(self._cumulative[-1])
        self.arc = 0.0
        self._target: Optional[GeoPoint] = None

        if map_unit.mobility is MobilityMode.RANDOM_WAYPOINT:
            if map_unit.bounds is None or rng is None:
                raise ValueError(
                    f"MAP {map_unit.map_id}: random waypoint mode needs bounds and a random stream"
                )

    @property
    def map_id(self) -> int:
        return self.map_unit.map_id

    def _point_at(self, arc: float) -> GeoPoint:
        if self.perimeter == 0.0:
            return self.map_unit.start
        leg = int(np.searchsorted(self._cumulative, arc, side="right")) - 1
        leg = min(max(leg, 0), len(self._legs) - 1)
        length = self._legs[leg]
        frac = 0.0 if length == 0.0 else (arc - self._cumulative[leg]) / length
        start, end = self._points[leg], self._points[leg + 1]
        x, y = start + frac * (end - start)
        return GeoPoint(float(x), float(y))

    def _next_target(self) -> GeoPoint:
        assert self._rng is not None and self.map_unit.bounds is not None
        xmin, ymin, xmax, ymax = self.map_unit.bounds
        return GeoPoint(float(self._rng.uniform(xmin, xmax)), float(self._rng.uniform(ymin, ymax)))

    def advance(self, dt: float) -> GeoPoint:
        if dt == 0:
            return self.position
        if self.map_unit.mobility is MobilityMode.RANDOM_WAYPOINT:
            self._step_random(dt)
        elif self.perimeter > 0.0:
            self.arc = (self.arc + self.map_unit.speed * dt) % self.perimeter
            self.position = self._point_at(self.arc)
        return self.position

    def _step_random(self, dt: float) -> None:
        budget = self.map_unit.speed * dt
        while budget > 0.0:
            if self._target is None:
                self._target = self._next_target()
            dx = self._target.x - self.position.x
            dy = self._target.y - self.position.y
            gap = float(np.hypot(dx, dy))
            if gap <= budget:
                self.position = self._target
                self._target = None
                budget -= gap
                if gap == 0.0:
                    break
            else:
                frac = budget / gap
                self.position = GeoPoint(self.position.x + frac * dx, self.position.y + frac * dy)
                budget = 0.0


def step_mobility(motion: MapMotion, dt: float) -> GeoPoint:
    """Advance a MAP by ``speed * dt`` meters and return its new position."""
    if dt < 0:
        raise ValueError("dt must be >= 0")
    return motion.advance(dt)
