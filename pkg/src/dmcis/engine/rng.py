"""Per-entity random streams split from one run seed."""

import numpy as np

# Stable codes; never renumber, or recorded traces stop reproducing.
_STREAM_CODES: dict[str, int] = {
    "sensor": 1,
    "map": 2,
}


class RandomStreams:
    """One numpy Generator per (entity kind, entity id).

    Streams are derived from ``[seed, kind code, id]``, so adding an entity
    leaves every other entity's draws unchanged.
    """

    def __init__(self, seed: int) -> None:
        if seed < 0:
            raise ValueError("seed must be >= 0")
        self.seed = seed
        self._streams: dict[tuple[str, int], np.random.Generator] = {}

    def stream(self, kind: str, entity_id: int) -> np.random.Generator:
        key = (kind, entity_id)
        if key not in self._streams:
            code = _STREAM_CODES[kind]
            self._streams[key] = np.random.default_rng([self.seed, code, entity_id])
        return self._streams[key]

    def sensor(self, sensor_id: int) -> np.random.Generator:
        return self.stream("sensor", sensor_id)
