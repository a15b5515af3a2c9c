"""Integration tests for the wavecone CLI: outputs, round trips and exit codes."""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from typer.testing import CliRunner

from wavecone.cli.main import app
from wavecone.spectral import read_field

FIXTURES = Path(__file__).parent.parent / "fixtures"
EXPERIMENTS = FIXTURES / "experiments"
OPERATORS = FIXTURES / "operators"

runner = CliRunner()


def _cli_argv() -> list[str]:
    """Return argv prefix for invoking the wavecone CLI in tests.

    Prefer the console-script in the active environment, but fall back to
    module execution to avoid PATH issues in CI/devcontainers.
    """
    script = Path(sys.executable).resolve().parent / "wavecone"
    if script.exists() and os.access(script, os.X_OK):
        return [str(script)]
    return [sys.executable, "-m", "wavecone.cli.main"]


class TestVersion:
    """Tests for the version command."""

    def test_console_script(self):
        """The installed entry point runs."""
        result = subprocess.run(
            _cli_argv() + ["version"], capture_output=True, text=True, check=False
        )
        assert result.returncode == 0, result.stderr
        assert "wavecone version" in result.stdout


class TestAnalyzeCommand:
    """Tests for wavecone analyze."""

    def test_json_on_stdout(self):
        """Without --out the report is printed as JSON."""
        result = runner.invoke(app, ["analyze", "--op", "builtin:gradient?d=2"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["is_canceling"] is True
        assert report["is_constant_rank"] is True
        assert report["operator_hash"]

    def test_report_file(self, tmp_path):
        """Subspace and cone files feed the written report."""
        result = runner.invoke(
            app,
            [
                "analyze",
                "--op",
                "builtin:divergence_rows?d=2",
                "--subspace",
                str(FIXTURES / "subspace_identity.yaml"),
                "--cone",
                str(FIXTURES / "cone_identity.yaml"),
                "--settings",
                str(FIXTURES / "settings_small.yaml"),
                "--out",
                str(tmp_path),
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "analysis.json").read_text())
        assert report["is_canceling"] is False
        assert report["delta_L"][0]["label"] == "span(I_2)"
        assert report["seed"] == 3
        assert report["sample_size"] == 24

    @pytest.mark.parametrize("name", ["malformed.json", "bad_modulus.json"])
    def test_bad_operator_files(self, name):
        """Unparseable or inconsistent specs exit 2."""
        result = runner.invoke(app, ["analyze", "--op", str(OPERATORS / name)])
        assert result.exit_code == 2

    def test_missing_operator_file(self):
        """A missing spec file exits 2."""
        result = runner.invoke(app, ["analyze", "--op", str(OPERATORS / "nope.json")])
        assert result.exit_code == 2


class TestAnnihilateCommand:
    """Tests for wavecone annihilate."""

    def test_round_trip(self, tmp_path):
        """The written annihilator loads back into analyze."""
        result = runner.invoke(
            app, ["annihilate", "--op", "builtin:gradient?d=2", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        exactness = json.loads((tmp_path / "exactness.json").read_text())
        assert exactness["symbolic_zero"] is True
        assert exactness["is_exact"] is True

        again = runner.invoke(app, ["analyze", "--op", str(tmp_path / "annihilator.json")])
        assert again.exit_code == 0, again.output
        report = json.loads(again.stdout)
        assert report["d"] == 2
        assert report["dimV"] == 2
        assert report["is_constant_rank"] is True

    def test_spec_on_stdout(self):
        """Without --out the spec JSON is printed."""
        result = runner.invoke(app, ["annihilate", "--op", "builtin:gradient?d=2"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["dimV"] == 2

    def test_not_elliptic(self):
        """A non-elliptic B is a precondition failure."""
        result = runner.invoke(app, ["annihilate", "--op", "builtin:divergence_rows?d=2"])
        assert result.exit_code == 3


class TestLadderCommand:
    """Tests for wavecone ladder."""

    def test_forward(self):
        """q(1) for q = 3/2 in d = 3 is the Sobolev exponent 3."""
        result = runner.invoke(app, ["ladder", "--q", "3/2", "--d", "3", "--l", "1"])
        assert result.exit_code == 0, result.output
        assert "q(1) = 3" in result.stdout

    def test_limiting_seed(self):
        """p = d/(d-k) is accepted with the limiting flag."""
        result = runner.invoke(app, ["ladder", "--p", "3", "--d", "3", "--k", "2"])
        assert result.exit_code == 0, result.output
        assert "q = 3/2" in result.stdout
        assert "flag = limiting" in result.stdout

    def test_outside_window(self):
        """p past the limiting endpoint exits 3."""
        result = runner.invoke(app, ["ladder", "--p", "4", "--d", "3", "--k", "2"])
        assert result.exit_code == 3

    def test_mode_required(self):
        """Either the forward or the inverse flags must be given."""
        result = runner.invoke(app, ["ladder", "--d", "3"])
        assert result.exit_code == 2


class TestSolveCommand:
    """Tests for wavecone solve."""

    def test_writes_field_and_residual(self, tmp_path):
        """u.bin and residual.csv are written."""
        result = runner.invoke(
            app,
            ["solve", "--op", "builtin:gradient?d=2", "--grid", "16", "--out", str(tmp_path)],
        )
        assert result.exit_code == 0, result.output
        u = read_field(tmp_path / "u.bin")
        assert u.grid.n == 16
        header = (tmp_path / "residual.csv").read_text().splitlines()[0]
        assert header.startswith("n,seed,perturbation,iterations,residual")

    def test_divergent_perturbation(self, tmp_path):
        """A perturbation past the contraction threshold exits 3."""
        result = runner.invoke(
            app,
            [
                "solve",
                "--op",
                "builtin:gradient?d=2",
                "--grid",
                "16",
                "--perturbation",
                "4.0",
                "--out",
                str(tmp_path),
            ],
        )
        assert result.exit_code == 3


class TestExperimentCommand:
    """Tests for wavecone experiment."""

    def test_csv_is_deterministic(self, tmp_path):
        """Two runs with the same seed give byte-identical CSV."""
        for name in ("a", "b"):
            result = runner.invoke(
                app,
                [
                    "experiment",
                    str(EXPERIMENTS / "higher_integrability.json"),
                    "--out",
                    str(tmp_path / name),
                    "--format",
                    "csv",
                ],
            )
            assert result.exit_code == 0, result.output
        first = (tmp_path / "a" / "higher_integrability.csv").read_bytes()
        second = (tmp_path / "b" / "higher_integrability.csv").read_bytes()
        assert first == second
        assert not (tmp_path / "a" / "higher_integrability.json").exists()

    def test_overrides(self, tmp_path):
        """--seed and --scales replace config keys."""
        result = runner.invoke(
            app,
            [
                "experiment",
                str(EXPERIMENTS / "higher_integrability.json"),
                "--out",
                str(tmp_path),
                "--seed",
                "11",
                "--scales",
                "1/8",
                "--format",
                "json",
            ],
        )
        assert result.exit_code == 0, result.output
        data = json.loads((tmp_path / "higher_integrability.json").read_text())
        assert data["metadata"]["seed"] == 11
        assert len(data["rows"]) == 1

    def test_swirl(self, tmp_path):
        """Swirl configs write one row per eps."""
        result = runner.invoke(
            app, ["experiment", str(EXPERIMENTS / "swirl.yaml"), "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "swirl.csv").read_text().splitlines()
        assert len(lines) == 3

    @pytest.mark.parametrize(
        "name",
        ["laminate_bad_amplitude.yaml", "local_canceling_divergence.yaml"],
    )
    def test_hypothesis_gates(self, tmp_path, name):
        """Failed hypothesis gates exit 4."""
        result = runner.invoke(
            app, ["experiment", str(EXPERIMENTS / name), "--out", str(tmp_path)]
        )
        assert result.exit_code == 4

    @pytest.mark.parametrize("name", ["broken.yaml", "invalid_kind.yaml", "nope.yaml"])
    def test_bad_configs(self, tmp_path, name):
        """Unparseable, invalid and missing configs exit 2."""
        result = runner.invoke(
            app, ["experiment", str(EXPERIMENTS / name), "--out", str(tmp_path)]
        )
        assert result.exit_code == 2

    def test_unknown_override(self, tmp_path):
        """Overrides a kind does not define are rejected."""
        result = runner.invoke(
            app,
            [
                "experiment",
                str(EXPERIMENTS / "swirl.yaml"),
                "--out",
                str(tmp_path),
                "--scales",
                "1/8",
            ],
        )
        assert result.exit_code == 2

    def test_unknown_format(self, tmp_path):
        """Only json and csv are written."""
        result = runner.invoke(
            app,
            [
                "experiment",
                str(EXPERIMENTS / "swirl.yaml"),
                "--out",
                str(tmp_path),
                "--format",
                "xml",
            ],
        )
        assert result.exit_code == 2
