"""YAML/JSON scenario parser with file:line diagnostics.

A scenario file has these top-level sections:

    simulation   mapping   run settings, delta and the scenario name
    region       list      area ids
    sensor       list      fixed sensors
    sdcc         list      collection centers (tau, window, link)
    baseline     list      pre-disaster records stored at an SDCC
    map          list      mobile access points (route, range, buffer)
    dpc          list      processing centers (threshold, peers, history)
    cdc          mapping   CDC/DCC: reference db, SMS providers, bypass
    hazard       list      scripted ground-truth hazards

region, sensor, sdcc, map, dpc and cdc are required. Unknown sections and
unknown keys are rejected.
"""

import json
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Any, Optional, TypeVar

import yaml

from dmcis.analysis.geometry import apply_collapse, distance
from dmcis.core.models import (
    DEFAULT_BYPASS_CLASSES,
    BaselineCategory,
    BaselineRecord,
    CdcDcc,
    DisasterRecord,
    Dpc,
    GeoPoint,
    HazardClass,
    HazardEvent,
    LinkSpec,
    LinkStandard,
    MapUnit,
    MobilityMode,
    Modality,
    Region,
    Scenario,
    Sdcc,
    SensorNode,
    SimulationSettings,
    SmsProvider,
    Topology,
)
from dmcis.parsers.base import BaseParser, ScenarioError
from dmcis.sensing import ConfigurationError, SdccStation, cluster_topology

E = TypeVar("E", bound=Enum)

REQUIRED_SECTIONS = ("region", "sensor", "sdcc", "map", "dpc", "cdc")
LIST_SECTIONS = ("region", "sensor", "sdcc", "baseline", "map", "dpc", "hazard")
MAPPING_SECTIONS = ("simulation", "cdc")

SECTION_KEYS: dict[str, frozenset[str]] = {
    "simulation": frozenset({
        "name", "horizon", "seed", "delta", "reading_bytes", "mobility_step",
        "link_efficiency", "peer_latency", "dpc_cdc_latency", "cdc_dcc_latency",
        "bypass_latency", "internet_latency", "merge_lookback", "severity_scale",
    }),
    "region": frozenset({"id"}),
    "sensor": frozenset({"id", "region", "x", "y", "modality", "false_report_prob", "failed", "sdcc"}),
    "sdcc": frozenset({"id", "region", "x", "y", "tau", "window", "link", "hazard_class"}),
    "baseline": frozenset({"sdcc", "area", "category", "bytes", "description"}),
    "map": frozenset({
        "id", "region", "speed", "route", "contact_range", "buffer_capacity", "link",
        "sdccs", "dpcs", "mobility", "bounds",
    }),
    "dpc": frozenset({
        "id", "region", "x", "y", "confidence_threshold", "max_reprocess", "peers",
        "service_time", "urgent_service_time", "link", "history",
    }),
    "cdc": frozenset({
        "count", "match_threshold", "escalate_unmatched", "bypass_classes",
        "departments", "sms_providers", "reference",
    }),
    "sms_provider": frozenset({"name", "subscribers", "latency", "batch_size", "area"}),
    "record": frozenset({"area", "class", "features", "time", "outcome"}),
    "hazard": frozenset({"id", "class", "onset", "region", "magnitude", "footprint", "duration"}),
    "footprint": frozenset({"x", "y", "radius"}),
}

_LINK_ALIASES = {"b": LinkStandard.B, "g": LinkStandard.G, "a": LinkStandard.A}

_MISSING: Any = object()


class _Mapping(dict):
    """dict that remembers the source line of itself and of each key."""
    line: int = 0
    key_lines: dict[Any, int]


class _LineLoader(yaml.SafeLoader):
    pass


def _construct_mapping(loader: _LineLoader, node: yaml.MappingNode) -> _Mapping:
    loader.flatten_mapping(node)
    mapping = _Mapping()
    mapping.line = node.start_mark.line + 1
    mapping.key_lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        mapping[key] = loader.construct_object(value_node, deep=True)
        mapping.key_lines[key] = key_node.start_mark.line + 1
    return mapping


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


class _Entry:
    """One mapping of a section, with typed accessors that report file:line."""

    def __init__(self, data: Any, section: str, source: Optional[str], line: Optional[int] = None) -> None:
        self.source = source
        self.section = section
        if not isinstance(data, dict):
            raise ScenarioError(f"[{section}] entries must be mappings", source, line)
        self.data = data
        self.line = getattr(data, "line", line)
        self.key_lines: dict[Any, int] = getattr(data, "key_lines", {})
        allowed = SECTION_KEYS[section]
        for key in data:
            if key not in allowed:
                raise ScenarioError(
                    f"unknown key '{key}' in [{section}] (allowed: {', '.join(sorted(allowed))})",
                    source,
                    self.key_lines.get(key, self.line),
                )

    def error(self, message: str, key: Optional[str] = None) -> ScenarioError:
        line = self.key_lines.get(key, self.line) if key else self.line
        return ScenarioError(f"[{self.section}] {message}", self.source, line)

    def has(self, key: str) -> bool:
        return key in self.data and self.data[key] is not None

    def raw(self, key: str, default: Any = _MISSING) -> Any:
        if not self.has(key):
            if default is _MISSING:
                raise self.error(f"missing required key '{key}'")
            return default
        return self.data[key]

    def number(self, key: str, default: Any = _MISSING, minimum: Optional[float] = None) -> Any:
        value = self.raw(key, default)
        if value is default and not self.has(key):
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.error(f"'{key}' must be a number, got {value!r}", key)
        if minimum is not None and value < minimum:
            raise self.error(f"'{key}' must be >= {minimum}, got {value}", key)
        return float(value)

    def integer(self, key: str, default: Any = _MISSING, minimum: Optional[int] = None) -> Any:
        value = self.raw(key, default)
        if value is default and not self.has(key):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.error(f"'{key}' must be an integer, got {value!r}", key)
        if minimum is not None and value < minimum:
            raise self.error(f"'{key}' must be >= {minimum}, got {value}", key)
        return value

    def boolean(self, key: str, default: bool) -> bool:
        value = self.raw(key, default)
        if not isinstance(value, bool):
            raise self.error(f"'{key}' must be true or false, got {value!r}", key)
        return value

    def text(self, key: str, default: Any = _MISSING) -> Any:
        value = self.raw(key, default)
        if value is default and not self.has(key):
            return value
        return str(value)

    def choice(self, key: str, enum_cls: type[E], default: Any = _MISSING) -> Any:
        value = self.raw(key, default)
        if value is default and not self.has(key):
            return value
        try:
            return enum_cls(value)
        except ValueError:
            valid = ", ".join(m.value for m in enum_cls)  # type: ignore[attr-defined]
            raise self.error(f"'{key}' must be one of: {valid}; got {value!r}", key) from None

    def id_list(self, key: str, default: Any = _MISSING) -> Any:
        value = self.raw(key, default)
        if value is default and not self.has(key):
            return value
        if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            raise self.error(f"'{key}' must be a list of integer ids", key)
        return tuple(value)

    def point(self) -> GeoPoint:
        try:
            return GeoPoint(self.number("x"), self.number("y"))
        except ValueError as e:
            raise self.error(str(e), "x") from e

    def link(self) -> LinkSpec:
        value = self.raw("link", LinkStandard.G.value)
        standard = _LINK_ALIASES.get(str(value).lower())
        if standard is None:
            try:
                standard = LinkStandard(str(value))
            except ValueError:
                raise self.error(
                    f"'link' must be one of 802.11b, 802.11g, 802.11a; got {value!r}", "link"
                ) from None
        return LinkSpec.for_standard(standard)


class ScenarioParser(BaseParser):
    """Parser for YAML (and JSON) scenario files."""

    def parse(self, content: str, source: Optional[str] = None) -> Scenario:
        self._source = source
        data = self._load(content)
        if data is None:
            data = _Mapping()
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a mapping of sections", source, 1)

        key_lines = getattr(data, "key_lines", {})
        for section in data:
            if section not in SECTION_KEYS or section in ("sms_provider", "record", "footprint"):
                raise ScenarioError(
                    f"unknown section [{section}]", source, key_lines.get(section, 1)
                )
        for section in REQUIRED_SECTIONS:
            if section not in data:
                raise ScenarioError(f"missing required section [{section}]", source, None)

        sim = _Entry(data.get("simulation") or _Mapping(), "simulation", source, key_lines.get("simulation"))
        default_name = Path(source).stem if source else "scenario"
        name = sim.text("name", default_name)
        settings = self._settings(sim)
        delta = sim.number("delta", 0.0, minimum=0.0)

        region_ids = self._regions(self._entries(data, "region"))
        default_region = region_ids[0] if len(region_ids) == 1 else None

        sdccs = self._sdccs(self._entries(data, "sdcc"), region_ids, default_region)
        self._baselines(self._entries(data, "baseline"), sdccs)
        sensors = self._sensors(self._entries(data, "sensor"), region_ids, default_region, sdccs)
        dpcs = self._dpcs(self._entries(data, "dpc"), region_ids, default_region)
        maps = self._maps(self._entries(data, "map"), region_ids, default_region, sdccs, dpcs)
        cdc_dcc = self._cdc(_Entry(data.get("cdc") or _Mapping(), "cdc", source, key_lines.get("cdc")), region_ids)
        hazards = self._hazards(self._entries(data, "hazard"), region_ids, default_region, sensors)

        regions = tuple(
            Region(
                region_id=rid,
                sensors=tuple(s for s in sensors.values() if s.region == rid),
                sdccs=tuple(s for s in sdccs.values() if s.region == rid),
                maps=tuple(m for m in maps.values() if m.region == rid),
                dpcs=tuple(d for d in dpcs.values() if d.region == rid),
            )
            for rid in region_ids
        )
        topology = Topology(regions=regions, cdc_dcc=cdc_dcc, delta=delta)
        try:
            topology = cluster_topology(topology)
        except ConfigurationError as e:
            raise ScenarioError(str(e), source, key_lines.get("sensor")) from e
        topology = apply_collapse(topology)

        return Scenario(name=name, topology=topology, hazards=hazards, settings=settings)

    def _load(self, content: str) -> Any:
        # Try YAML first (also handles JSON as valid YAML)
        try:
            return yaml.load(content, Loader=_LineLoader)  # noqa: S506 - SafeLoader subclass
        except yaml.YAMLError as e:
            # Fall back to JSON
            try:
                return json.loads(content)
            except json.JSONDecodeError:
                mark = getattr(e, "problem_mark", None)
                line = mark.line + 1 if mark is not None else None
                raise ScenarioError(
                    f"failed to parse as YAML or JSON: {getattr(e, 'problem', e)}", self._source, line
                ) from e

    def _entries(self, data: dict, section: str) -> list[_Entry]:
        items = data.get(section)
        if items is None:
            return []
        line = getattr(data, "key_lines", {}).get(section)
        if not isinstance(items, list):
            raise ScenarioError(f"[{section}] must be a list of entries", self._source, line)
        return [_Entry(item, section, self._source, line) for item in items]

    @staticmethod
    def _build(entry: _Entry, factory: Any, **kwargs: Any) -> Any:
        try:
            return factory(**kwargs)
        except ValueError as e:
            raise entry.error(str(e)) from e

    def _settings(self, sim: _Entry) -> SimulationSettings:
        defaults = SimulationSettings()
        kwargs: dict[str, Any] = {
            "horizon": sim.number("horizon", defaults.horizon, minimum=0.0),
            "seed": sim.integer("seed", defaults.seed, minimum=0),
            "reading_bytes": sim.integer("reading_bytes", defaults.reading_bytes, minimum=1),
        }
        for key in (
            "mobility_step", "link_efficiency", "peer_latency", "dpc_cdc_latency",
            "cdc_dcc_latency", "bypass_latency", "internet_latency", "merge_lookback",
            "severity_scale",
        ):
            kwargs[key] = sim.number(key, getattr(defaults, key), minimum=0.0)
        return self._build(sim, SimulationSettings, **kwargs)

    def _regions(self, entries: list[_Entry]) -> list[int]:
        ids: list[int] = []
        for entry in entries:
            rid = entry.integer("id", minimum=0)
            if rid in ids:
                raise entry.error(f"duplicate region id {rid}", "id")
            ids.append(rid)
        if not ids:
            raise ScenarioError("[region] must declare at least one area", self._source, None)
        return sorted(ids)

    def _region_of(self, entry: _Entry, region_ids: list[int], default: Optional[int]) -> int:
        rid = entry.integer("region", default if default is not None else _MISSING)
        if rid not in region_ids:
            raise entry.error(f"unknown region {rid}", "region")
        return rid

    @staticmethod
    def _unique(entry: _Entry, seen: dict, entity_id: int, label: str) -> None:
        if entity_id in seen:
            raise entry.error(f"duplicate {label} id {entity_id}", "id")

    def _sdccs(self, entries: list[_Entry], region_ids: list[int], default: Optional[int]) -> dict[int, Sdcc]:
        sdccs: dict[int, Sdcc] = {}
        for entry in entries:
            sid = entry.integer("id", minimum=0)
            self._unique(entry, sdccs, sid, "SDCC")
            sdccs[sid] = self._build(
                entry, Sdcc,
                sdcc_id=sid,
                region=self._region_of(entry, region_ids, default),
                position=entry.point(),
                tau=entry.integer("tau", minimum=1),
                window=entry.number("window", 60.0),
                link=entry.link(),
                hazard_class=entry.choice("hazard_class", HazardClass, None),
            )
        return sdccs

    def _baselines(self, entries: list[_Entry], sdccs: dict[int, Sdcc]) -> None:
        stations: dict[int, SdccStation] = {}
        for entry in entries:
            sid = entry.integer("sdcc")
            if sid not in sdccs:
                raise entry.error(f"unknown SDCC {sid}", "sdcc")
            if sid not in stations:
                stations[sid] = SdccStation(sdccs[sid], assigned=set())
            record = self._build(
                entry, BaselineRecord,
                area_id=entry.integer("area", sdccs[sid].region),
                category=entry.choice("category", BaselineCategory),
                payload_bytes=entry.integer("bytes", 0, minimum=0),
                description=entry.text("description", ""),
            )
            try:
                stations[sid].ingest_baseline(record)
            except ConfigurationError as e:
                raise entry.error(str(e), "area") from e
        for sid, station in stations.items():
            sdccs[sid] = replace(sdccs[sid], baseline=tuple(station.baseline))

    def _sensors(
        self,
        entries: list[_Entry],
        region_ids: list[int],
        default: Optional[int],
        sdccs: dict[int, Sdcc],
    ) -> dict[int, SensorNode]:
        sensors: dict[int, SensorNode] = {}
        for entry in entries:
            sid = entry.integer("id", minimum=0)
            self._unique(entry, sensors, sid, "sensor")
            region = self._region_of(entry, region_ids, default)
            assigned = entry.integer("sdcc", None)
            if assigned is not None and (assigned not in sdccs or sdccs[assigned].region != region):
                raise entry.error(f"SDCC {assigned} is not an SDCC of region {region}", "sdcc")
            sensors[sid] = self._build(
                entry, SensorNode,
                sensor_id=sid,
                region=region,
                position=entry.point(),
                modality=entry.choice("modality", Modality, Modality.WATER_LEVEL),
                false_report_prob=entry.number("false_report_prob", 0.0),
                failed=entry.boolean("failed", False),
                assigned_sdcc=assigned,
            )
        return sensors

    def _records(self, owner: _Entry, key: str, region_ids: list[int]) -> tuple[DisasterRecord, ...]:
        items = owner.raw(key, [])
        if not isinstance(items, list):
            raise owner.error(f"'{key}' must be a list of records", key)
        records = []
        for item in items:
            entry = _Entry(item, "record", self._source, owner.key_lines.get(key, owner.line))
            features = entry.raw("features")
            if not isinstance(features, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in features
            ):
                raise entry.error("'features' must be a list of numbers", "features")
            area = entry.integer("area")
            if area not in region_ids:
                raise entry.error(f"unknown region {area}", "area")
            records.append(self._build(
                entry, DisasterRecord,
                area_id=area,
                hazard_class=entry.choice("class", HazardClass),
                feature_vector=tuple(float(v) for v in features),
                occurred_time=entry.number("time", 0.0),
                outcome=entry.text("outcome", ""),
            ))
        return tuple(records)

    def _dpcs(self, entries: list[_Entry], region_ids: list[int], default: Optional[int]) -> dict[int, Dpc]:
        built: dict[int, tuple[_Entry, dict[str, Any]]] = {}
        for entry in entries:
            did = entry.integer("id", minimum=0)
            self._unique(entry, built, did, "DPC")
            built[did] = (entry, {
                "dpc_id": did,
                "region": self._region_of(entry, region_ids, default),
                "position": entry.point(),
                "confidence_threshold": entry.number("confidence_threshold", 0.5),
                "max_reprocess": entry.integer("max_reprocess", 2, minimum=0),
                "peers": entry.id_list("peers", None),
                "history_db": self._records(entry, "history", region_ids),
                "service_time": entry.number("service_time", 5.0, minimum=0.0),
                "urgent_service_time": entry.number("urgent_service_time", None, minimum=0.0),
                "link": entry.link(),
            })

        dpcs: dict[int, Dpc] = {}
        for did, (entry, kwargs) in built.items():
            if kwargs["peers"] is None:
                # Default: every other DPC of the same region.
                kwargs["peers"] = tuple(sorted(
                    other for other, (_, kw) in built.items()
                    if other != did and kw["region"] == kwargs["region"]
                ))
            dpcs[did] = self._build(entry, Dpc, **kwargs)
        return dpcs

    def _maps(
        self,
        entries: list[_Entry],
        region_ids: list[int],
        default: Optional[int],
        sdccs: dict[int, Sdcc],
        dpcs: dict[int, Dpc],
    ) -> dict[int, MapUnit]:
        maps: dict[int, MapUnit] = {}
        for entry in entries:
            mid = entry.integer("id", minimum=0)
            self._unique(entry, maps, mid, "MAP")
            region = self._region_of(entry, region_ids, default)
            route = self._route(entry)
            served_sdccs = entry.id_list("sdccs", ())
            served_dpcs = entry.id_list("dpcs", ())
            for sid in served_sdccs:
                if sid not in sdccs or sdccs[sid].region != region:
                    raise entry.error(f"SDCC {sid} is not an SDCC of region {region}", "sdccs")
            for did in served_dpcs:
                if did not in dpcs or dpcs[did].region != region:
                    raise entry.error(f"DPC {did} is not a DPC of region {region}", "dpcs")
            bounds = None
            if entry.has("bounds"):
                raw = entry.raw("bounds")
                if not isinstance(raw, list) or len(raw) != 4:
                    raise entry.error("'bounds' must be [xmin, ymin, xmax, ymax]", "bounds")
                bounds = tuple(float(v) for v in raw)
            mobility = entry.choice("mobility", MobilityMode, MobilityMode.PATROL)
            if mobility is MobilityMode.RANDOM_WAYPOINT and bounds is None:
                raise entry.error("random_waypoint mobility requires 'bounds'", "mobility")
            maps[mid] = self._build(
                entry, MapUnit,
                map_id=mid,
                region=region,
                speed=entry.number("speed"),
                route=route,
                contact_range=entry.number("contact_range", 50.0, minimum=0.0),
                buffer_capacity=entry.integer("buffer_capacity", 10_000_000, minimum=0),
                link=entry.link(),
                sdccs=served_sdccs,
                dpcs=served_dpcs,
                mobility=mobility,
                bounds=bounds,
            )
        return maps

    @staticmethod
    def _route(entry: _Entry) -> tuple[GeoPoint, ...]:
        raw = entry.raw("route")
        if not isinstance(raw, list) or not raw:
            raise entry.error("'route' must be a nonempty list of [x, y] waypoints", "route")
        points = []
        for waypoint in raw:
            if not isinstance(waypoint, (list, tuple)) or len(waypoint) != 2:
                raise entry.error(f"waypoint {waypoint!r} is not an [x, y] pair", "route")
            try:
                points.append(GeoPoint.from_sequence(waypoint))
            except (TypeError, ValueError) as e:
                raise entry.error(f"waypoint {waypoint!r}: {e}", "route") from e
        return tuple(points)

    def _cdc(self, entry: _Entry, region_ids: list[int]) -> CdcDcc:
        providers = []
        raw_providers = entry.raw("sms_providers", [])
        if not isinstance(raw_providers, list):
            raise entry.error("'sms_providers' must be a list", "sms_providers")
        for item in raw_providers:
            provider = _Entry(item, "sms_provider", self._source, entry.key_lines.get("sms_providers"))
            area = provider.integer("area", None)
            if area is not None and area not in region_ids:
                raise provider.error(f"unknown region {area}", "area")
            providers.append(self._build(
                provider, SmsProvider,
                name=provider.text("name"),
                subscribers=provider.integer("subscribers", minimum=0),
                per_message_latency=provider.number("latency", 1.0, minimum=0.0),
                batch_size=provider.integer("batch_size", 10_000, minimum=1),
                area_id=area,
            ))

        bypass = DEFAULT_BYPASS_CLASSES
        if entry.has("bypass_classes"):
            raw = entry.raw("bypass_classes")
            if not isinstance(raw, list):
                raise entry.error("'bypass_classes' must be a list", "bypass_classes")
            try:
                bypass = frozenset(HazardClass(v) for v in raw)
            except ValueError as e:
                raise entry.error(str(e), "bypass_classes") from e

        departments = entry.raw("departments", ["police", "fire", "medical"])
        if not isinstance(departments, list):
            raise entry.error("'departments' must be a list", "departments")

        return self._build(
            entry, CdcDcc,
            cdc_count=entry.integer("count", 1, minimum=1),
            reference_db=self._records(entry, "reference", region_ids),
            match_threshold=entry.number("match_threshold", 0.8),
            sms_providers=tuple(providers),
            bypass_classes=bypass,
            escalate_unmatched=entry.boolean("escalate_unmatched", False),
            departments=tuple(str(d) for d in departments),
        )

    def _hazards(
        self,
        entries: list[_Entry],
        region_ids: list[int],
        default: Optional[int],
        sensors: dict[int, SensorNode],
    ) -> tuple[HazardEvent, ...]:
        hazards: dict[int, HazardEvent] = {}
        for entry in entries:
            hid = entry.integer("id", minimum=0)
            self._unique(entry, hazards, hid, "hazard")
            region = self._region_of(entry, region_ids, default)
            hazards[hid] = self._build(
                entry, HazardEvent,
                hazard_id=hid,
                hazard_class=entry.choice("class", HazardClass),
                onset_time=entry.number("onset", 0.0, minimum=0.0),
                region=region,
                magnitude=entry.number("magnitude", 1.0, minimum=0.0),
                footprint=self._footprint(entry, region, sensors),
                duration=entry.number("duration", None, minimum=0.0),
            )
        return tuple(hazards[h] for h in sorted(hazards))

    def _footprint(self, entry: _Entry, region: int, sensors: dict[int, SensorNode]) -> frozenset[int]:
        """Resolve "all", an id list, or a {x, y, radius} circle to sensor ids."""
        in_region = {sid: s for sid, s in sensors.items() if s.region == region}
        raw = entry.raw("footprint", "all")
        if raw == "all":
            return frozenset(in_region)
        if isinstance(raw, list):
            ids = entry.id_list("footprint")
            outside = sorted(set(ids) - set(in_region))
            if outside:
                raise entry.error(f"footprint sensors {outside} are not sensors of region {region}", "footprint")
            return frozenset(ids)
        if isinstance(raw, dict):
            circle = _Entry(raw, "footprint", self._source, entry.key_lines.get("footprint"))
            center = circle.point()
            radius = circle.number("radius", minimum=0.0)
            return frozenset(
                sid for sid, s in in_region.items() if distance(center, s.position) <= radius
            )
        raise entry.error("'footprint' must be 'all', a list of sensor ids or {x, y, radius}", "footprint")
