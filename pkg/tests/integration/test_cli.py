"""Integration tests for the dmcis command line."""

import json
from pathlib import Path

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from dmcis import __version__
from dmcis.cli import main
from dmcis.cli.main import cli
from tests.builders import line_yaml


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(autouse=True)
def quiet(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep log lines out of the captured output and stop rich from wrapping."""
    monkeypatch.setenv("LOG_LEVEL", "ERROR")
    monkeypatch.setattr(main.console, "width", 400)


def _two_sdcc_yaml() -> str:
    """The line scenario plus a second SDCC on the route and still one MAP."""
    data = yaml.safe_load(line_yaml())
    data["sdcc"].append({"id": 2, "x": 300, "y": 0, "tau": 3, "window": 10})
    data["sensor"] += [{"id": 11 + i, "x": 300 + i, "y": 1} for i in range(3)]
    data["map"][0]["sdccs"] = [1, 2]
    return yaml.safe_dump(data, sort_keys=False)


def _digest(output: str) -> str:
    return output.strip().splitlines()[-1]


# ─────────────────────────────────────────────────────────────────
# validate / levels
# ─────────────────────────────────────────────────────────────────

class TestValidateCommand:
    """Tests for ``dmcis validate``."""

    def test_valid_with_warning(self, runner: CliRunner, scenario_file: Path) -> None:
        result = runner.invoke(cli, ["validate", str(scenario_file)])
        assert result.exit_code == 0, result.output
        assert "valid: 0 error(s), 1 warning(s)" in result.output
        assert "WARNING(Eq3)" in result.output

    def test_json(self, runner: CliRunner, scenario_file: Path) -> None:
        result = runner.invoke(cli, ["validate", str(scenario_file), "-f", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["status"] == "pass"
        assert [f["rule"] for f in doc["findings"]] == ["Eq3"]

    def test_too_few_maps(self, runner: CliRunner, write_scenario) -> None:  # type: ignore[no-untyped-def]
        path = write_scenario(_two_sdcc_yaml())
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 1
        assert "ERROR(Eq2)" in result.output

    def test_markdown(self, runner: CliRunner, write_scenario) -> None:  # type: ignore[no-untyped-def]
        path = write_scenario(_two_sdcc_yaml())
        result = runner.invoke(cli, ["validate", str(path), "-f", "markdown"])
        assert result.exit_code == 1
        assert "**FAIL**" in result.output
        assert "- ERROR(Eq2)" in result.output

    def test_parse_error(self, runner: CliRunner, write_scenario) -> None:  # type: ignore[no-untyped-def]
        text = line_yaml(tau=0)
        path = write_scenario(text, name="bad.yaml")
        line = text.splitlines().index("    tau: 0") + 1

        result = runner.invoke(cli, ["validate", str(path)])

        assert result.exit_code == 2
        assert f"{path}:{line}: [sdcc] 'tau' must be >= 1, got 0" in result.output

    def test_missing_file(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(cli, ["validate", str(tmp_path / "nope.yaml")])
        assert result.exit_code == 3
        assert "not found" in result.output


class TestLevelsCommand:
    """Tests for ``dmcis levels``."""

    def test_table(self, runner: CliRunner, scenario_file: Path) -> None:
        result = runner.invoke(cli, ["levels", str(scenario_file)])
        assert result.exit_code == 0
        for name in ("Sensing", "Transport", "Processing", "Decision"):
            assert name in result.output


# ─────────────────────────────────────────────────────────────────
# run
# ─────────────────────────────────────────────────────────────────

class TestRunCommand:
    """Tests for ``dmcis run``."""

    def test_writes_outputs_and_prints_digest(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        out = tmp_path / "out"
        result = runner.invoke(cli, ["run", str(scenario_file), "--out", str(out)])

        assert result.exit_code == 0, result.output
        for name in ("trace.jsonl", "metrics.csv", "queue_series.csv", "summary.md", "trace.sha256"):
            assert (out / name).exists()
        assert (out / "trace.sha256").read_text().split()[0] == _digest(result.output)

    def test_metrics_carry_sms_and_queue_series(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        assert runner.invoke(cli, ["run", str(scenario_file), "--out", str(tmp_path)]).exit_code == 0

        [row] = pd.read_csv(tmp_path / "metrics.csv").to_dict("records")
        assert row["sms_first_carrier"] == pytest.approx(row["warning_latency"])
        assert row["sms_last_carrier"] >= row["sms_first_carrier"]
        assert row["exceedance_windows"] == 1

        queue = pd.read_csv(tmp_path / "queue_series.csv")
        assert list(queue.columns) == ["t", "dpc", "length"]
        assert queue["dpc"].tolist() == [1, 1]
        assert queue["length"].tolist() == [1, 0]

    def test_repeat_run_same_digest(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        first = runner.invoke(cli, ["run", str(scenario_file), "--seed", "7", "--out", str(tmp_path / "a")])
        second = runner.invoke(cli, ["run", str(scenario_file), "--seed", "7", "--out", str(tmp_path / "b")])

        assert _digest(first.output) == _digest(second.output)
        assert (tmp_path / "a" / "trace.jsonl").read_bytes() == (tmp_path / "b" / "trace.jsonl").read_bytes()

    def test_zero_horizon(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, ["run", str(scenario_file), "--horizon", "0", "--out", str(tmp_path)])
        assert result.exit_code == 0
        assert (tmp_path / "trace.jsonl").read_text() == ""

    def test_out_from_environment(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        out = tmp_path / "env-out"
        result = runner.invoke(cli, ["run", str(scenario_file)], env={"DMCIS_OUT_DIR": str(out)})
        assert result.exit_code == 0
        assert (out / "trace.jsonl").exists()

    def test_invalid_topology(self, runner: CliRunner, write_scenario, tmp_path: Path) -> None:  # type: ignore[no-untyped-def]
        path = write_scenario(line_yaml(tau=11))
        result = runner.invoke(cli, ["run", str(path), "--out", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "ERROR(Eq1)" in result.output
        assert not (tmp_path / "out" / "trace.jsonl").exists()

    def test_unwritable_output(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        result = runner.invoke(cli, ["run", str(scenario_file), "--out", str(blocker / "out")])
        assert result.exit_code == 3
        assert "Could not write outputs" in result.output


# ─────────────────────────────────────────────────────────────────
# sweep / report
# ─────────────────────────────────────────────────────────────────

class TestSweepCommand:
    """Tests for ``dmcis sweep``."""

    def test_sweep(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, [
            "sweep", str(scenario_file), "-p", "tau", "-v", "5,10", "-r", "2", "--out", str(tmp_path),
        ])
        assert result.exit_code == 0, result.output
        assert "# Sweep over tau" in result.output
        assert (tmp_path / "sweep_summary.csv").exists()
        assert (tmp_path / "tau=10" / "rep1" / "trace.jsonl").exists()

    def test_skipped_point(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, [
            "sweep", str(scenario_file), "-p", "tau", "-v", "10", "-v", "11", "--out", str(tmp_path),
        ])
        assert result.exit_code == 1
        assert "tau=11 skipped: ERROR(Eq1)" in result.output
        assert (tmp_path / "tau=10" / "rep0" / "metrics.csv").exists()

    def test_link_aliases(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, [
            "sweep", str(scenario_file), "-p", "link_standard", "-v", "b,a", "--out", str(tmp_path),
        ])
        assert result.exit_code == 0
        assert (tmp_path / "link_standard=802.11b").is_dir()

    def test_bad_values(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, ["sweep", str(scenario_file), "-p", "tau", "-v", "x", "--out", str(tmp_path)])
        assert result.exit_code == 2
        assert "Invalid sweep" in result.output

    def test_no_values(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        result = runner.invoke(cli, ["sweep", str(scenario_file), "-p", "tau", "--out", str(tmp_path)])
        assert result.exit_code == 2

    def test_unknown_parameter(self, runner: CliRunner, scenario_file: Path) -> None:
        result = runner.invoke(cli, ["sweep", str(scenario_file), "-p", "colour", "-v", "1"])
        assert result.exit_code == 2


class TestReportCommand:
    """Tests for ``dmcis report``."""

    @pytest.fixture
    def run_dir(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> Path:
        out = tmp_path / "run"
        assert runner.invoke(cli, ["run", str(scenario_file), "--out", str(out)]).exit_code == 0
        return out

    def test_metrics_csv(self, runner: CliRunner, run_dir: Path) -> None:
        result = runner.invoke(cli, ["report", str(run_dir / "metrics.csv")])
        assert result.exit_code == 0
        assert "# Metrics: metrics.csv" in result.output
        assert "delivery_ratio" in result.output

    def test_trace_recomputes_metrics(self, runner: CliRunner, run_dir: Path) -> None:
        result = runner.invoke(cli, ["report", str(run_dir / "trace.jsonl"), "-f", "csv"])
        assert result.exit_code == 0
        header, row = result.output.strip().splitlines()[-2:]
        assert header.startswith("warning_latency,")
        assert row.startswith("188.0")

    def test_sweep_metrics_are_aggregated(self, runner: CliRunner, scenario_file: Path, tmp_path: Path) -> None:
        runner.invoke(cli, ["sweep", str(scenario_file), "-p", "tau", "-v", "5,10", "--out", str(tmp_path)])
        result = runner.invoke(cli, ["report", str(tmp_path / "sweep_metrics.csv")])
        assert result.exit_code == 0
        assert "# Sweep over tau" in result.output
        assert "warning_latency_mean" in result.output

    def test_bad_trace(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "trace.jsonl"
        path.write_text('{"t": 0, "seq": 0, "kind": "run"}\nnot json\n')
        result = runner.invoke(cli, ["report", str(path)])
        assert result.exit_code == 2
        assert "line 2" in result.output

    def test_trace_record_missing_field(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "trace.jsonl"
        path.write_text(
            '{"t": 0, "seq": 0, "kind": "run", "horizon": 10, "maps": 1}\n'
            '{"t": 1, "seq": 1, "kind": "session", "map": 1, "channel": 1, "state": "open"}\n'
        )
        result = runner.invoke(cli, ["report", str(path)])
        assert result.exit_code == 2
        assert "line 2" in result.output
        assert "endpoint" in result.output

    def test_empty_csv(self, runner: CliRunner, tmp_path: Path) -> None:
        path = tmp_path / "metrics.csv"
        path.write_text("")
        assert runner.invoke(cli, ["report", str(path)]).exit_code == 2

    def test_missing(self, runner: CliRunner, tmp_path: Path) -> None:
        assert runner.invoke(cli, ["report", str(tmp_path / "none.csv")]).exit_code == 3


class TestVersion:
    """Tests for ``dmcis --version``."""

    def test_version(self, runner: CliRunner) -> None:
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output
