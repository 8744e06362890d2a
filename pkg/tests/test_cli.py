"""Tests for CLI entrypoint."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from tests.conftest import SCENARIOS_DIR
from wsncalc.cli import EXIT_INPUT_ERROR, EXIT_UNSTABLE, EXIT_VALIDATION_FAILED, app

runner = CliRunner()

SOLO = """\
name: solo
convention: strict_eq17
nodes:
  - {id: a, service_rate: 10, latency: 0}
flows:
  - id: F
    micro_flows:
      - {id: m, kind: token_bucket, rate: 1, burst: 20}
path: [a]
"""


@pytest.fixture
def solo_file(tmp_path: Path) -> Path:
    target = tmp_path / "solo.yaml"
    target.write_text(SOLO, encoding="utf-8")
    return target


@pytest.fixture
def unstable_file(tmp_path: Path) -> Path:
    target = tmp_path / "unstable.yaml"
    target.write_text(SOLO.replace("service_rate: 10", "service_rate: 0.5"), encoding="utf-8")
    return target


class TestCLI:
    """CLI command tests."""

    def test_cli_help(self) -> None:
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "WSN QoS Calculus" in result.stdout
        for command in ("report", "sweep", "validate", "replicate-paper", "show"):
            assert command in result.stdout

    def test_sweep_help(self) -> None:
        result = runner.invoke(app, ["sweep", "--help"])
        assert result.exit_code == 0
        assert "--from" in result.stdout
        assert "--at-time" in result.stdout


class TestReport:
    def test_table(self) -> None:
        result = runner.invoke(app, ["report", "builtin:case2"])
        assert result.exit_code == 0
        assert result.stdout.startswith("scenario: case2")
        assert "58.9" in result.stdout

    def test_csv(self) -> None:
        result = runner.invoke(app, ["report", "builtin:case2", "--format", "csv"])
        assert result.exit_code == 0
        rows = list(csv.reader(io.StringIO(result.stdout)))
        assert rows[0][:3] == ["scope", "node", "flow"]
        assert len(rows) == 1 + 15 + 3

    def test_json_from_file(self) -> None:
        scenario = str(SCENARIOS_DIR / "singlehop.yaml")
        result = runner.invoke(app, ["report", scenario, "--scope", "path", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["scenario"] == "singlehop"
        assert payload["node_bounds"] == []
        assert payload["path_bounds"][0]["DD_ms"] == pytest.approx(20.66)

    def test_convention_option_overrides_document(self) -> None:
        result = runner.invoke(
            app,
            ["report", "builtin:singlehop", "--scope", "path", "--format", "json",
             "--convention", "strict"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["convention"] == "strict_eq17"
        assert payload["path_bounds"][0]["DD_ms"] == pytest.approx(15.86)

    def test_missing_file(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["report", str(tmp_path / "absent.yaml")])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "Cannot read scenario file" in result.output

    def test_unknown_builtin(self) -> None:
        result = runner.invoke(app, ["report", "builtin:nope"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_bad_convention(self) -> None:
        result = runner.invoke(app, ["report", "builtin:case2", "--convention", "loose"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_unstable(self, unstable_file: Path) -> None:
        result = runner.invoke(app, ["report", str(unstable_file)])
        assert result.exit_code == EXIT_UNSTABLE
        assert "unstable" in result.output


class TestSweep:
    def test_writes_csv(self, tmp_path: Path) -> None:
        out = tmp_path / "sweeps" / "r.csv"
        result = runner.invoke(
            app,
            ["sweep", "builtin:case1_N10_R200", "--param", "R",
             "--from", "50", "--to", "200", "--step", "50", "--out", str(out)],
        )
        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("R,flow,")
        assert len(lines) == 1 + 4 * 3

    def test_stdout(self) -> None:
        result = runner.invoke(
            app,
            ["sweep", "builtin:case1_N10_R200", "--param", "N",
             "--from", "1", "--to", "2", "--step", "1"],
        )
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0].startswith("N,flow,")

    def test_zero_step(self) -> None:
        result = runner.invoke(
            app,
            ["sweep", "builtin:case2", "--param", "R", "--from", "1", "--to", "2", "--step", "0"],
        )
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "step" in result.output

    def test_hurst_on_token_buckets(self) -> None:
        result = runner.invoke(
            app,
            ["sweep", "builtin:case2", "--param", "H",
             "--from", "0.6", "--to", "0.9", "--step", "0.1"],
        )
        assert result.exit_code == EXIT_INPUT_ERROR


    def test_fixed_delay_on_path_without_delays(self, solo_file: Path) -> None:
        result = runner.invoke(
            app,
            ["sweep", str(solo_file), "--param", "d", "--from", "0", "--to", "2", "--step", "1"],
        )
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "fixed delays" in result.output


class TestValidate:
    def test_passes(self, solo_file: Path) -> None:
        result = runner.invoke(app, ["validate", str(solo_file)])
        assert result.exit_code == 0
        assert "1 scenarios, 4 checks, 0 failures" in result.stdout

    def test_scaled_bounds_fail(self, solo_file: Path) -> None:
        result = runner.invoke(app, ["validate", str(solo_file), "--bound-scale", "0.9"])
        assert result.exit_code == EXIT_VALIDATION_FAILED
        assert "FAIL" in result.output

    def test_convergence_table(self, solo_file: Path) -> None:
        result = runner.invoke(app, ["validate", str(solo_file), "--convergence"])
        assert result.exit_code == 0
        assert "grid_step_ms" in result.stdout
        assert "0.1125" in result.stdout

    def test_random(self) -> None:
        result = runner.invoke(
            app, ["validate", "--random", "2", "--seed", "5", "--grid-step", "0.1"]
        )
        assert result.exit_code == 0
        assert "2 scenarios" in result.stdout

    def test_random_count_from_settings(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WSNCALC_RANDOM_SCENARIOS", "1")
        monkeypatch.setenv("WSNCALC_GRID_STEP_MS", "0.1")
        result = runner.invoke(app, ["validate"])
        assert result.exit_code == 0
        assert "1 scenarios" in result.stdout

    def test_needs_input(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WSNCALC_RANDOM_SCENARIOS", "0")
        result = runner.invoke(app, ["validate"])
        assert result.exit_code == EXIT_INPUT_ERROR

    def test_bad_horizon_factor(self, solo_file: Path) -> None:
        result = runner.invoke(app, ["validate", str(solo_file), "--horizon-factor", "0.5"])
        assert result.exit_code == EXIT_INPUT_ERROR


class TestReplicateAndShow:
    def test_replicate_paper(self, tmp_path: Path) -> None:
        result = runner.invoke(app, ["replicate-paper", "--out", str(tmp_path)])
        assert result.exit_code == 0
        assert "all values reproduced" in result.stdout
        assert (tmp_path / "replication.csv").exists()
        assert len(list(tmp_path.glob("*.csv"))) == 9

    def test_show(self) -> None:
        result = runner.invoke(app, ["show", "builtin:singlehop"])
        assert result.exit_code == 0
        assert "name: singlehop" in result.stdout
        assert "flow_rate" not in result.stdout

    def test_show_converts_units(self, tmp_path: Path) -> None:
        target = tmp_path / "kbps.yaml"
        target.write_text(SOLO.replace("name: solo", "units: {rate: Kbps}"), encoding="utf-8")
        result = runner.invoke(app, ["show", str(target)])
        assert result.exit_code == 0
        assert "service_rate: 0.01" in result.stdout
