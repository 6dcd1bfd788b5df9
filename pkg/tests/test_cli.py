"""Tests for the command line interface."""

import json
from unittest.mock import patch

import numpy as np
import pytest
from typer.testing import CliRunner

from nullflow import formats
from nullflow.cli import app, cli, version_command


@pytest.fixture
def runner():
    """Return a Typer CLI runner."""
    return CliRunner()


@pytest.fixture
def relaxed_config(tmp_path):
    """Config file with the looser geometric tolerances suited to coarse grids."""
    path = tmp_path / "relaxed.toml"
    path.write_text('[nullflow.tolerances]\npseudo_arc = "1/100"\nnull = 1e-3\n')
    return path


def _error(result) -> dict:
    """Return the JSON error document printed by a failed command."""
    for line in result.stdout.splitlines():
        if line.startswith('{"error"'):
            return json.loads(line)
    raise AssertionError(f"no error document in output:\n{result.stdout}")


@patch("nullflow.cli.app")
def test_cli(mock_app):
    """Test the cli function."""
    cli()

    mock_app.assert_called_once()


@patch("nullflow.cli.rich_print")
def test_version(mock_rich_print):
    """Test the version command."""
    version_command()

    mock_rich_print.assert_called_once()


def test_no_command_shows_help(runner):
    """Test invoking without a subcommand prints the help."""
    result = runner.invoke(app, [])

    assert result.exit_code == 0
    assert "hierarchy" in result.stdout


class TestHierarchyCommand:
    """Tests for the hierarchy and motion commands."""

    def test_hierarchy(self, runner, output_dir):
        """Test g3 is printed and the artifacts are written."""
        result = runner.invoke(app, ["hierarchy", "--n", "3", "--output", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        assert "g3 = 10*u0^3 + 10*u0*u2 + 5*u1^2 + u4" in result.stdout
        document = json.loads((output_dir / "hierarchy.json").read_text())
        assert document["meta"]["command"] == "hierarchy"
        assert document["meta"]["parameters"] == {"n": 3}
        assert (output_dir / "hierarchy.txt").exists()

    def test_motion(self, runner, output_dir):
        """Test the motion of p3 = 2."""
        result = runner.invoke(app, ["motion", "--p3", "2", "--output", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        assert "p6 = 4*u0^2 + 2*u2" in result.stdout
        assert (output_dir / "motion.json").exists()

    def test_motion_not_admissible(self, runner, output_dir):
        """Test a non-admissible generator exits with the algebra code."""
        result = runner.invoke(app, ["motion", "--p3", "u1", "--output", str(output_dir)])

        assert result.exit_code == 3
        assert _error(result)["error"] == "NotAdmissibleError"

    def test_motion_first_flow(self, runner, output_dir):
        """Test the translation flow has no local motion."""
        result = runner.invoke(app, ["motion", "--hierarchy-n", "1", "--output", str(output_dir)])

        assert result.exit_code == 2
        assert _error(result)["error"] == "InputError"

    def test_unparsable_polynomial(self, runner, output_dir):
        """Test a malformed polynomial exits with the algebra code."""
        result = runner.invoke(app, ["motion", "--p3", "u0 +", "--output", str(output_dir)])

        assert result.exit_code == 3
        assert _error(result)["error"] == "PolynomialParseError"

    def test_zero_denominator(self, runner, output_dir):
        """Test a coefficient with a zero denominator is reported as a parse error."""
        result = runner.invoke(app, ["motion", "--p3", "1/0*u0", "--output", str(output_dir)])

        assert result.exit_code == 3
        assert _error(result)["error"] == "PolynomialParseError"


class TestCurveCommands:
    """Tests for reconstruct and extract."""

    def test_reconstruct_null_cubic(self, runner, output_dir, zero_curvature_csv):
        """Test zero curvature reconstructs the null cubic."""
        result = runner.invoke(app, ["reconstruct", "--kappa", str(zero_curvature_csv), "--output", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        s, points = formats.curve_points(formats.read_curve(output_dir / "curve.csv"))
        np.testing.assert_allclose(points, np.stack([s, s**2 / 2, s**3 / 6], axis=-1), atol=1e-10)
        assert (output_dir / "frames.csv").exists()

    def test_reconstruct_missing_input(self, runner, output_dir, tmp_path):
        """Test a missing curvature file exits with the input code."""
        result = runner.invoke(app, ["reconstruct", "--kappa", str(tmp_path / "absent.csv"), "-o", str(output_dir)])

        assert result.exit_code == 2
        payload = _error(result)
        assert payload["error"] == "InputNotFoundError"
        assert payload["partial"] is None

    def test_reconstruct_non_uniform(self, runner, output_dir, tmp_path):
        """Test a non-uniform s column is rejected."""
        path = tmp_path / "k.csv"
        path.write_text("s,kappa\n0,0\n0.1,0\n0.3,0\n")

        result = runner.invoke(app, ["reconstruct", "--kappa", str(path), "-o", str(output_dir)])

        assert result.exit_code == 2
        assert "uniform" in _error(result)["detail"]

    def test_reconstruct_then_extract(self, runner, output_dir, sine_curvature_csv, relaxed_config, tmp_path):
        """Test extract recovers the curvature of a reconstructed curve."""
        first = runner.invoke(app, ["reconstruct", "--kappa", str(sine_curvature_csv), "-o", str(output_dir)])
        assert first.exit_code == 0, first.stdout
        second_dir = tmp_path / "extract"

        args = ["extract", "--curve", str(output_dir / "curve.csv"), "--config", str(relaxed_config)]
        result = runner.invoke(app, [*args, "-o", str(second_dir)])

        assert result.exit_code == 0, result.stdout
        table = formats.read_curvature(second_dir / "curvature.csv")
        s, kappa = table.column("s"), table.column("kappa")
        np.testing.assert_allclose(kappa, 0.3 * np.sin(s), atol=5e-3)


class TestEvolveCommand:
    """Tests for evolve."""

    def test_evolve_soliton(self, runner, output_dir, soliton_csv):
        """Test a short KdV run writes snapshots, conserved values and a summary."""
        args = ["evolve", "--kappa0", str(soliton_csv), "--dt", "1e-3", "--T", "0.01", "--snap-every", "5"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        summary = json.loads((output_dir / "evolve.json").read_text())
        assert summary["t_end"] == pytest.approx(0.01)
        assert max(summary["relative_drift"]) < 1e-6
        assert summary["meta"]["length"] == pytest.approx(40.0)
        snapshots = formats.read_table(output_dir / "snapshots.csv", formats.SNAPSHOT_COLUMNS)
        np.testing.assert_allclose(np.unique(snapshots.column("t")), [0.0, 0.005, 0.01])
        assert (output_dir / "conserved.csv").exists()

    def test_evolve_json_snapshots(self, runner, output_dir, soliton_csv):
        """Test --format json writes JSON-lines snapshots."""
        args = ["evolve", "--kappa0", str(soliton_csv), "--dt", "1e-3", "--T", "0.002", "--format", "json"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        lines = (output_dir / "snapshots.jsonl").read_text().splitlines()
        assert "meta" in json.loads(lines[0])

    def test_evolve_with_curve(self, runner, output_dir, sine_curvature_csv, relaxed_config):
        """Test the co-evolved curve reports a consistency value."""
        args = ["evolve", "--kappa0", str(sine_curvature_csv), "--dt", "1e-4", "--T", "2e-4", "--with-curve"]
        args += ["--config", str(relaxed_config)]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        summary = json.loads((output_dir / "evolve.json").read_text())
        assert summary["consistency"] < 1e-1

    def test_evolve_instability(self, runner, output_dir, soliton_csv):
        """Test a blow-up exits with the evolution code."""
        args = ["evolve", "--kappa0", str(soliton_csv), "--N", "64", "--dt", "0.1", "--T", "10", "--method", "rk4"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 5
        assert _error(result)["error"] == "InstabilityError"


class TestSpecialCommands:
    """Tests for travelingwave, lax, painleve and similarity."""

    def test_travelingwave_and_lax(self, runner, output_dir, tmp_path):
        """Test the lemniscatic wave solves its equation and passes the Lax check."""
        args = ["travelingwave", "--lambda", "1", "--period-samples", "512"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        report = json.loads((output_dir / "travelingwave.json").read_text())
        assert report["residual"] < 1e-6
        assert report["roots"] == pytest.approx([1.0, 0.0, -1.0], abs=1e-12)

        lax_dir = tmp_path / "lax"
        wave = str(output_dir / "travelingwave.csv")
        result = runner.invoke(app, ["lax", "--lambda", "1", "--kappa", wave, "-o", str(lax_dir)])

        assert result.exit_code == 0, result.stdout
        document = json.loads((lax_dir / "lax.json").read_text())
        assert document["lax_residual"] < 5e-2
        assert document["mu_spread"] < 1e-2

    def test_travelingwave_invalid_invariants(self, runner, output_dir):
        """Test invariants with a negative discriminant exit with the special-function code."""
        result = runner.invoke(app, ["travelingwave", "--g2", "0", "--g3", "1", "-o", str(output_dir)])

        assert result.exit_code == 6
        assert _error(result)["error"] == "InvalidParametersError"

    def test_painleve(self, runner, output_dir):
        """Test the zero solution maps to zero curvature with zero residual."""
        result = runner.invoke(app, ["painleve", "--samples", "201", "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        assert np.all(formats.read_curvature(output_dir / "curvature.csv").column("kappa") == 0.0)
        assert json.loads((output_dir / "painleve.json").read_text())["residual"] == pytest.approx(0.0, abs=1e-12)

    def test_painleve_pole_writes_partial(self, runner, output_dir):
        """Test a pole exits with code 6 and names the partial solution."""
        args = ["painleve", "--v0", "10", "--xmin", "0", "--xmax", "5", "--samples", "501"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 6
        payload = _error(result)
        assert payload["error"] == "PoleEncounteredError"
        assert payload["partial"] == str(output_dir / "painleve_partial.csv")
        partial = formats.read_table(output_dir / "painleve_partial.csv", ("x", "v", "vp"))
        assert partial.column("x")[0] == 0.0

    def test_similarity_domain(self, runner, output_dir, zero_curvature_csv):
        """Test a time outside a t + b > 0 exits with code 6."""
        args = ["similarity", "--kappa", str(zero_curvature_csv), "--a", "1", "--b", "-2", "--t", "1"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 6
        assert _error(result)["error"] == "DomainError"

    def test_similarity_identity(self, runner, output_dir, sine_curvature_csv):
        """Test t = 0 with a t + b = 1 keeps the profile."""
        args = ["similarity", "--kappa", str(sine_curvature_csv), "--a", "1", "--b", "1", "--t", "0"]
        result = runner.invoke(app, [*args, "-o", str(output_dir)])

        assert result.exit_code == 0, result.stdout
        source = formats.read_curvature(sine_curvature_csv)
        table = formats.read_curvature(output_dir / "similarity.csv")
        np.testing.assert_allclose(table.column("kappa"), source.column("kappa")[: table.data.shape[0]], atol=1e-12)


class TestRunConfiguration:
    """Tests for the run log, config files and argument parsing."""

    def test_run_log(self, runner, output_dir, tmp_path):
        """Test the run log records the start and each artifact."""
        log_file = tmp_path / "run.jsonl"

        result = runner.invoke(app, ["hierarchy", "--n", "1", "-o", str(output_dir), "--run-log", str(log_file)])

        assert result.exit_code == 0, result.stdout
        events = [json.loads(line) for line in log_file.read_text().splitlines()]
        assert events[0]["event_type"] == "run_start"
        assert events[0]["command"] == "hierarchy"
        assert [e["kind"] for e in events if e["event_type"] == "artifact_write"] == ["hierarchy", "report"]

    def test_run_log_records_error(self, runner, output_dir, tmp_path):
        """Test a failed run ends with its error document."""
        log_file = tmp_path / "run.jsonl"
        args = ["reconstruct", "--kappa", str(tmp_path / "absent.csv"), "--run-log", str(log_file)]

        runner.invoke(app, [*args, "-o", str(output_dir)])

        last = json.loads(log_file.read_text().splitlines()[-1])
        assert last["event_type"] == "run_error"
        assert last["error"] == "InputNotFoundError"

    def test_config_file(self, runner, tmp_path):
        """Test the output directory is taken from the config file."""
        config_file = tmp_path / "nullflow.toml"
        config_file.write_text(f'[nullflow]\noutput = "{(tmp_path / "configured").as_posix()}"\n')

        result = runner.invoke(app, ["hierarchy", "--n", "1", "--config", str(config_file)])

        assert result.exit_code == 0, result.stdout
        assert (tmp_path / "configured" / "hierarchy.json").exists()

    def test_broken_config_file(self, runner, output_dir, tmp_path):
        """Test a broken config file exits with the input code."""
        config_file = tmp_path / "nullflow.toml"
        config_file.write_text("[nullflow\n")

        result = runner.invoke(app, ["hierarchy", "--config", str(config_file), "-o", str(output_dir)])

        assert result.exit_code == 2
        assert _error(result)["error"] == "InputInvalidError"

    def test_bad_number(self, runner, output_dir):
        """Test a malformed numeric option exits with the input code."""
        result = runner.invoke(app, ["travelingwave", "--lambda", "fast", "-o", str(output_dir)])

        assert result.exit_code == 2
        assert "not a number" in _error(result)["detail"]
