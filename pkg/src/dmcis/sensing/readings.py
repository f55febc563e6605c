"""Per-window reading generation from the hazard script."""

from typing import Callable, Iterable

import numpy as np

from dmcis.core.models import HazardEvent, SensorNode, SensorReading


def generate_readings(
    hazards: Iterable[HazardEvent],
    sensors: Iterable[SensorNode],
    window_start: float,
    window_end: float,
    rng_for: Callable[[int], np.random.Generator],
) -> list[SensorReading]:
    """Readings emitted by live sensors for the window (start, end].

    A sensor reports truthfully once for every active hazard whose footprint
    contains it, and independently reports falsely with its
    ``false_report_prob``. Failed sensors emit nothing. Each sensor draws
    from its own stream, so adding a sensor leaves the others' draws intact.

    Args:
        hazards: Hazard script
        sensors: Sensors to sample, in any order
        window_start: Exclusive start of the window
        window_end: Inclusive end; used as the reading timestamp
        rng_for: Returns the random stream of a sensor id
    """
    active = [h for h in hazards if h.active_during(window_start, window_end)]
    readings: list[SensorReading] = []
    for sensor in sorted(sensors, key=lambda s: s.sensor_id):
        if sensor.failed:
            continue
        for hazard in active:
            if sensor.sensor_id in hazard.footprint:
                readings.append(SensorReading(
                    sensor_id=sensor.sensor_id,
                    timestamp=window_end,
                    parameter=sensor.modality,
                    value=hazard.magnitude,
                    truthful=True,
                    hazard_id=hazard.hazard_id,
                ))
        rng = rng_for(sensor.sensor_id)
        if rng.random() < sensor.false_report_prob:
            readings.append(SensorReading(
                sensor_id=sensor.sensor_id,
                timestamp=window_end,
                parameter=sensor.modality,
                value=float(rng.uniform(0.0, 1.0)),
                truthful=False,
            ))
    return readings
