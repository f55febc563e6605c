"""Scenario builders shared by the test suite.

Every builder returns a small, fully deterministic Scenario whose
stage timings can be worked out by hand.
"""

from typing import Iterable, Optional

from dmcis.core.models import (
    CdcDcc,
    DisasterRecord,
    Dpc,
    GeoPoint,
    HazardClass,
    HazardEvent,
    LinkSpec,
    LinkStandard,
    MapUnit,
    Region,
    Scenario,
    Sdcc,
    SensorNode,
    SimulationSettings,
    SmsProvider,
    Topology,
)

# Bundle of ten 64-byte readings at 54 Mbps.
TEN_READINGS_54 = 640 * 8 / 54e6


def sensors_around(
    center: GeoPoint,
    count: int,
    first_id: int = 1,
    region: int = 1,
    false_report_prob: float = 0.0,
    failed: Iterable[int] = (),
) -> tuple[SensorNode, ...]:
    """A row of sensors one meter apart next to ``center``."""
    down = set(failed)
    return tuple(
        SensorNode(
            sensor_id=first_id + i,
            region=region,
            position=GeoPoint(center.x + i, center.y + 1.0),
            false_report_prob=false_report_prob,
            failed=(first_id + i) in down,
        )
        for i in range(count)
    )


def line_scenario(
    hazard_class: HazardClass = HazardClass.FLOOD,
    *,
    dpc_x: float = 600.0,
    delta: float = 0.0,
    link: LinkStandard = LinkStandard.G,
    sensors: int = 10,
    tau: int = 10,
    window: float = 10.0,
    horizon: float = 400.0,
    reference: bool = True,
    false_report_prob: float = 0.0,
    subscribers: int = 100,
    seed: int = 0,
) -> Scenario:
    """One SDCC at the origin, one DPC on the x axis and a MAP shuttling between.

    The MAP patrols (0,0) -> (dpc_x,0) -> (0,0) at 10 m/s with a 5 m
    range. A hazard of magnitude 5 covers every sensor for the first
    window only, so exactly one batch triggers at t = window.
    """
    spec = LinkSpec.for_standard(link)
    nodes = sensors_around(GeoPoint(0.0, 0.0), sensors, false_report_prob=false_report_prob)
    sdcc = Sdcc(
        sdcc_id=1, region=1, position=GeoPoint(0.0, 0.0), tau=tau, window=window,
        link=spec, hazard_class=hazard_class,
    )
    dpc = Dpc(dpc_id=1, region=1, position=GeoPoint(dpc_x, 0.0), service_time=5.0, link=spec)
    mule = MapUnit(
        map_id=1, region=1, speed=10.0,
        route=(GeoPoint(0.0, 0.0), GeoPoint(dpc_x, 0.0)),
        contact_range=5.0, buffer_capacity=10_000_000, link=spec,
        sdccs=(1,), dpcs=(1,),
    )
    records = (DisasterRecord(1, hazard_class, (1.0, 1.0, 0.5), 0.0),) if reference else ()
    topology = Topology(
        regions=(Region(1, sensors=nodes, sdccs=(sdcc,), maps=(mule,), dpcs=(dpc,)),),
        cdc_dcc=CdcDcc(
            reference_db=records,
            sms_providers=(SmsProvider("carrier", subscribers),),
        ),
        delta=delta,
    )
    hazard = HazardEvent(
        hazard_id=1, hazard_class=hazard_class, onset_time=0.0, region=1,
        magnitude=5.0, footprint=frozenset(s.sensor_id for s in nodes), duration=window,
    )
    return Scenario(
        name=f"line-{hazard_class.value}",
        topology=topology,
        hazards=(hazard,),
        settings=SimulationSettings(horizon=horizon, seed=seed),
    )


def oracle_scenario(
    tau: int = 1,
    *,
    sensors: int = 10,
    false_report_prob: float = 0.1,
    windows: int = 10_000,
    failed: Iterable[int] = (),
) -> Scenario:
    """No hazards, noisy sensors and an SDCC co-located with its DPC.

    Every report is rejected (threshold 1, no reprocessing), so the
    run cost is dominated by the sensing level.
    """
    origin = GeoPoint(0.0, 0.0)
    sdcc = Sdcc(sdcc_id=1, region=1, position=origin, tau=tau, window=1.0)
    dpc = Dpc(
        dpc_id=1, region=1, position=origin, confidence_threshold=1.0,
        max_reprocess=0, service_time=0.0,
    )
    topology = Topology(
        regions=(Region(
            1,
            sensors=sensors_around(origin, sensors, false_report_prob=false_report_prob, failed=failed),
            sdccs=(sdcc,),
            dpcs=(dpc,),
        ),),
        cdc_dcc=CdcDcc(),
    )
    return Scenario(
        name=f"oracle-tau{tau}",
        topology=topology,
        settings=SimulationSettings(horizon=windows + 0.5),
    )


def makespan_scenario(dpcs: int, batches: int = 12, service_time: float = 5.0) -> Scenario:
    """``batches`` single-sensor SDCCs and ``dpcs`` DPCs, all at the origin."""
    origin = GeoPoint(0.0, 0.0)
    sensors = tuple(
        SensorNode(sensor_id=i, region=1, position=origin, assigned_sdcc=i)
        for i in range(1, batches + 1)
    )
    sdccs = tuple(
        Sdcc(sdcc_id=i, region=1, position=origin, tau=1, window=10.0)
        for i in range(1, batches + 1)
    )
    ids = list(range(1, dpcs + 1))
    centers = tuple(
        Dpc(
            dpc_id=d, region=1, position=origin, service_time=service_time,
            peers=tuple(i for i in ids if i != d),
        )
        for d in ids
    )
    hazard = HazardEvent(
        hazard_id=1, hazard_class=HazardClass.FLOOD, onset_time=0.0, region=1,
        magnitude=5.0, footprint=frozenset(s.sensor_id for s in sensors), duration=10.0,
    )
    return Scenario(
        name=f"makespan-k{dpcs}",
        topology=Topology(
            regions=(Region(1, sensors=sensors, sdccs=sdccs, dpcs=centers),),
            cdc_dcc=CdcDcc(),
        ),
        hazards=(hazard,),
        settings=SimulationSettings(horizon=200.0, peer_latency=0.0),
    )


def convoy_scenario(maps: int = 5, link: LinkStandard = LinkStandard.B) -> Scenario:
    """``maps`` MAPs on one route that reach the single DPC at the same tick.

    Each MAP picks up one bundle from its own SDCC near (1000, 0) at
    t=100 and the convoy returns to the DPC at the origin around t=198.
    """
    spec = LinkSpec.for_standard(link)
    sdccs = tuple(
        Sdcc(
            sdcc_id=i, region=1, position=GeoPoint(1000.0, float(i - 1)), tau=1,
            window=100.0, link=spec,
        )
        for i in range(1, maps + 1)
    )
    sensors = tuple(
        SensorNode(sensor_id=i, region=1, position=GeoPoint(1001.0, float(i - 1)), assigned_sdcc=i)
        for i in range(1, maps + 1)
    )
    dpc = Dpc(dpc_id=1, region=1, position=GeoPoint(0.0, 0.0), link=spec)
    mules = tuple(
        MapUnit(
            map_id=i, region=1, speed=10.0,
            route=(GeoPoint(0.0, 0.0), GeoPoint(1000.0, 0.0)),
            contact_range=20.0, buffer_capacity=10_000_000, link=spec,
            sdccs=tuple(s.sdcc_id for s in sdccs), dpcs=(1,),
        )
        for i in range(1, maps + 1)
    )
    hazard = HazardEvent(
        hazard_id=1, hazard_class=HazardClass.FLOOD, onset_time=0.0, region=1,
        magnitude=5.0, footprint=frozenset(s.sensor_id for s in sensors), duration=100.0,
    )
    return Scenario(
        name=f"convoy-{link.value}",
        topology=Topology(
            regions=(Region(1, sensors=sensors, sdccs=sdccs, maps=mules, dpcs=(dpc,)),),
            cdc_dcc=CdcDcc(),
        ),
        hazards=(hazard,),
        settings=SimulationSettings(horizon=300.0),
    )


def two_sdcc_scenario(maps: int = 1, delta: float = 0.0, dpc_position: Optional[GeoPoint] = None) -> Scenario:
    """Two SDCCs of five sensors each and one DPC; used for the Eq2 checks."""
    first = sensors_around(GeoPoint(0.0, 0.0), 5, first_id=1)
    second = sensors_around(GeoPoint(200.0, 0.0), 5, first_id=6)
    sdccs = (
        Sdcc(sdcc_id=1, region=1, position=GeoPoint(0.0, 0.0), tau=3, window=10.0),
        Sdcc(sdcc_id=2, region=1, position=GeoPoint(200.0, 0.0), tau=3, window=10.0),
    )
    dpc = Dpc(dpc_id=1, region=1, position=dpc_position or GeoPoint(100.0, 100.0))
    route = (GeoPoint(0.0, 0.0), GeoPoint(200.0, 0.0), dpc.position)
    mules = tuple(
        MapUnit(
            map_id=i, region=1, speed=10.0, route=route, contact_range=5.0,
            buffer_capacity=1_000_000, sdccs=(1, 2), dpcs=(1,),
        )
        for i in range(1, maps + 1)
    )
    return Scenario(
        name="two-sdcc",
        topology=Topology(
            regions=(Region(1, sensors=first + second, sdccs=sdccs, maps=mules, dpcs=(dpc,)),),
            cdc_dcc=CdcDcc(),
            delta=delta,
        ),
        settings=SimulationSettings(horizon=100.0),
    )


LINE_YAML = """\
simulation:
  name: line
  horizon: 400
  seed: 0
region:
  - id: 1
sensor:
{sensors}
sdcc:
  - id: 1
    x: 0
    y: 0
    tau: {tau}
    window: 10
    link: g
    hazard_class: flood
map:
  - id: 1
    speed: 10
    route: [[0, 0], [600, 0]]
    contact_range: 5
    sdccs: [1]
    dpcs: [1]
dpc:
  - id: 1
    x: 600
    y: 0
    service_time: 5
cdc:
  count: 1
  match_threshold: 0.8
  sms_providers:
    - name: carrier
      subscribers: 100
  reference:
    - area: 1
      class: flood
      features: [1.0, 1.0, 0.5]
hazard:
  - id: 1
    class: flood
    onset: 0
    magnitude: 5
    duration: 10
    footprint: all
"""


def line_yaml(tau: int = 10, sensors: int = 10) -> str:
    """YAML twin of ``line_scenario()``."""
    rows = "\n".join(f"  - {{id: {i + 1}, x: {i}, y: 1}}" for i in range(sensors))
    return LINE_YAML.format(sensors=rows, tau=tau)
