"""dmcis: Disaster Management Communications and Information System simulator.

A deterministic discrete-event simulator of the four-level warning
pipeline: sensors and SDCCs, MAP data mules, DPC processing and the
CDC/DCC decision stage.
"""

__version__ = "0.1.0"

from dmcis.core.models import HazardClass, Scenario, SimulationSettings, Topology

__all__ = [
    "HazardClass",
    "Scenario",
    "SimulationSettings",
    "Topology",
    "__version__",
]
