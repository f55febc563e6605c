"""Unit tests for the scenario parser (YAML, JSON and the factory)."""

import json
from pathlib import Path

import pytest
import yaml

from dmcis.analysis import apply_collapse
from dmcis.core.models import GeoPoint, HazardClass, LinkStandard, MobilityMode
from dmcis.parsers import ScenarioError, get_parser, parse_scenario
from dmcis.parsers.yaml_scenario import ScenarioParser
from dmcis.sensing import cluster_topology
from tests.builders import line_scenario, line_yaml


def _line_of(text: str, needle: str) -> int:
    return text.splitlines().index(needle) + 1


def _edit(**changes: object) -> str:
    """line_yaml() with top-level sections replaced."""
    data = yaml.safe_load(line_yaml())
    data.update(changes)
    return yaml.safe_dump(data, sort_keys=False)


# ─────────────────────────────────────────────────────────────────
# Loading
# ─────────────────────────────────────────────────────────────────

class TestScenarioParser:
    """Tests for the YAML scenario format."""

    def test_line_file_matches_builder(self) -> None:
        parsed = ScenarioParser().parse(line_yaml(), source="line.yaml")
        built = line_scenario()

        assert parsed.name == "line"
        assert parsed.topology == apply_collapse(cluster_topology(built.topology))
        assert parsed.hazards == built.hazards
        assert parsed.settings == built.settings

    def test_name_defaults_to_file_stem(self) -> None:
        data = yaml.safe_load(line_yaml())
        del data["simulation"]["name"]
        scenario = ScenarioParser().parse(yaml.safe_dump(data), source="dir/coast.yaml")
        assert scenario.name == "coast"

    def test_sensors_are_clustered(self) -> None:
        scenario = ScenarioParser().parse(line_yaml())
        assert {s.assigned_sdcc for s in scenario.topology.iter_sensors()} == {1}

    def test_json_accepted(self) -> None:
        content = json.dumps(yaml.safe_load(line_yaml()))
        scenario = ScenarioParser().parse(content)
        assert scenario.topology.sdcc(1).tau == 10

    def test_link_aliases(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["sdcc"][0]["link"] = "802.11b"
        data["map"][0]["link"] = "a"
        scenario = ScenarioParser().parse(yaml.safe_dump(data))

        assert scenario.topology.sdcc(1).link.standard is LinkStandard.B
        [map_unit] = scenario.topology.iter_maps()
        assert map_unit.link.standard is LinkStandard.A

    def test_collapse_applied(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["simulation"]["delta"] = 1000
        scenario = ScenarioParser().parse(yaml.safe_dump(data))
        assert scenario.topology.sdcc(1).collapsed_with == 1

    def test_footprint_circle(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["hazard"][0]["footprint"] = {"x": 0, "y": 1, "radius": 2.5}
        [hazard] = ScenarioParser().parse(yaml.safe_dump(data)).hazards
        assert hazard.footprint == frozenset({1, 2, 3})

    def test_footprint_ids(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["hazard"][0]["footprint"] = [2, 4]
        [hazard] = ScenarioParser().parse(yaml.safe_dump(data)).hazards
        assert hazard.footprint == frozenset({2, 4})

    def test_random_waypoint_map(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["map"][0].update({"mobility": "random_waypoint", "bounds": [0, 0, 600, 50]})
        [map_unit] = ScenarioParser().parse(yaml.safe_dump(data)).topology.iter_maps()
        assert map_unit.mobility is MobilityMode.RANDOM_WAYPOINT
        assert map_unit.bounds == (0.0, 0.0, 600.0, 50.0)

    def test_default_peers_are_the_other_dpcs(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["dpc"].append({"id": 2, "x": 600, "y": 10})
        data["map"][0]["dpcs"] = [1, 2]
        topology = ScenarioParser().parse(yaml.safe_dump(data)).topology
        assert topology.dpc(1).peers == (2,)
        assert topology.dpc(2).peers == (1,)

    def test_baseline_attached_to_sdcc(self) -> None:
        content = _edit(baseline=[{"sdcc": 1, "category": "demographic", "bytes": 2048}])
        sdcc = ScenarioParser().parse(content).topology.sdcc(1)
        assert sdcc.baseline[0].payload_bytes == 2048

    def test_hazard_class_on_reference_record(self) -> None:
        scenario = ScenarioParser().parse(line_yaml())
        [record] = scenario.topology.cdc_dcc.reference_db
        assert record.hazard_class is HazardClass.FLOOD
        assert record.feature_vector == (1.0, 1.0, 0.5)


# ─────────────────────────────────────────────────────────────────
# Diagnostics
# ─────────────────────────────────────────────────────────────────

class TestScenarioErrors:
    """Tests for file:line diagnostics."""

    def test_tau_zero_points_at_its_line(self) -> None:
        text = line_yaml(tau=0)
        with pytest.raises(ScenarioError) as excinfo:
            ScenarioParser().parse(text, source="bad.yaml")

        error = excinfo.value
        assert error.line == _line_of(text, "    tau: 0")
        assert str(error) == f"bad.yaml:{error.line}: [sdcc] 'tau' must be >= 1, got 0"

    def test_unknown_key(self) -> None:
        text = line_yaml().replace("    service_time: 5", "    service_time: 5\n    speed: 3")
        with pytest.raises(ScenarioError, match="unknown key 'speed' in \\[dpc\\]") as excinfo:
            ScenarioParser().parse(text)
        assert excinfo.value.line == _line_of(text, "    speed: 3")

    def test_unknown_section(self) -> None:
        text = line_yaml() + "weather:\n  - id: 1\n"
        with pytest.raises(ScenarioError, match="unknown section \\[weather\\]"):
            ScenarioParser().parse(text)

    def test_missing_section(self) -> None:
        data = yaml.safe_load(line_yaml())
        del data["dpc"]
        data["map"][0]["dpcs"] = []
        with pytest.raises(ScenarioError, match="missing required section \\[dpc\\]") as excinfo:
            ScenarioParser().parse(yaml.safe_dump(data))
        assert excinfo.value.line is None

    def test_missing_key(self) -> None:
        data = yaml.safe_load(line_yaml())
        del data["sdcc"][0]["tau"]
        with pytest.raises(ScenarioError, match="missing required key 'tau'"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_bad_enum_value(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["hazard"][0]["class"] = "meteor"
        with pytest.raises(ScenarioError, match="'class' must be one of"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_bad_link(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["sdcc"][0]["link"] = "802.11n"
        with pytest.raises(ScenarioError, match="'link' must be one of"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_duplicate_sensor(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["sensor"].append(dict(data["sensor"][0]))
        with pytest.raises(ScenarioError, match="duplicate sensor id 1"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_footprint_outside_region(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["hazard"][0]["footprint"] = [1, 99]
        with pytest.raises(ScenarioError, match="\\[99\\]"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_baseline_area_mismatch(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["baseline"] = [{"sdcc": 1, "area": 2, "category": "health", "bytes": 10}]
        with pytest.raises(ScenarioError, match="Baseline for area 2 cannot be stored at SDCC 1 of area 1"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_random_waypoint_needs_bounds(self) -> None:
        data = yaml.safe_load(line_yaml())
        data["map"][0]["mobility"] = "random_waypoint"
        with pytest.raises(ScenarioError, match="requires 'bounds'"):
            ScenarioParser().parse(yaml.safe_dump(data))

    def test_unparseable(self) -> None:
        with pytest.raises(ScenarioError, match="failed to parse"):
            ScenarioParser().parse("sdcc: [unclosed\n")

    def test_not_a_mapping(self) -> None:
        with pytest.raises(ScenarioError, match="mapping of sections"):
            ScenarioParser().parse("- 1\n- 2\n")

    def test_str_without_line(self) -> None:
        assert str(ScenarioError("broken", "x.yaml")) == "x.yaml: broken"
        assert str(ScenarioError("broken")) == "<scenario>: broken"


# ─────────────────────────────────────────────────────────────────
# Factory
# ─────────────────────────────────────────────────────────────────

class TestFactory:
    """Tests for parse_scenario and get_parser."""

    def test_get_parser(self) -> None:
        assert isinstance(get_parser(), ScenarioParser)

    def test_parse_file(self, scenario_file: Path) -> None:
        scenario = parse_scenario(scenario_file)
        assert scenario.name == "line"
        assert scenario.topology.dpc(1).position == GeoPoint(600.0, 0.0)

    def test_file_not_found(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            parse_scenario(tmp_path / "missing.yaml")

    def test_file_error_carries_path(self, write_scenario) -> None:  # type: ignore[no-untyped-def]
        path = write_scenario(line_yaml(tau=0), name="bad.yaml")
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(path)
        assert excinfo.value.path == str(path)
