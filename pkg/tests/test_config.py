"""Tests for the config module."""

import pytest

from nullflow import __version__
from nullflow.config import COMMANDS, RunConfig, parse_real


class TestParseReal:
    """Tests for parse_real."""

    @pytest.mark.parametrize(
        ("text", "expected"),
        [("0.25", 0.25), ("1/2", 0.5), ("-3e-2", -0.03), (" 4 ", 4.0), (2, 2.0), (1.5, 1.5)],
    )
    def test_accepted(self, text, expected):
        """Test decimals, rationals and plain numbers."""
        assert parse_real(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["abc", "1/0", ""])
    def test_rejected(self, text):
        """Test non-numbers raise ValueError."""
        with pytest.raises(ValueError, match="not a number"):
            parse_real(text)


class TestRunConfig:
    """Tests for RunConfig."""

    def test_default_initialization(self):
        """Test default config initialization."""
        config = RunConfig()

        assert config.command == ""
        assert config.output == "nullflow_out"
        assert config.format == "csv"
        assert config.frame_tolerance == 1e-8
        assert config.arc_tolerance == 1e-3
        assert config.null_tolerance == 1e-4
        assert config.instability_factor == 1e3
        assert config.painleve_tolerance == 1e-10
        assert config.max_depth == 8
        assert config.run_log is None
        assert config.parameters == {}

    def test_custom_initialization(self):
        """Test custom config initialization."""
        config = RunConfig(command="evolve", output="runs", format="json", max_depth=4, parameters={"dt": 0.01})

        assert config.command == "evolve"
        assert config.output == "runs"
        assert config.format == "json"
        assert config.max_depth == 4
        assert config.parameters == {"dt": 0.01}

    def test_unknown_command(self):
        """Test an unknown command is rejected."""
        with pytest.raises(ValueError, match="unknown command"):
            RunConfig(command="plot")

    def test_unknown_format(self):
        """Test an unknown output format is rejected."""
        with pytest.raises(ValueError, match="unknown output format"):
            RunConfig(format="xml")

    @pytest.mark.parametrize(
        "name", ["frame_tolerance", "arc_tolerance", "null_tolerance", "instability_factor", "painleve_tolerance"]
    )
    def test_non_positive_tolerance(self, name):
        """Test every tolerance must be positive."""
        with pytest.raises(ValueError, match=f"{name} must be positive"):
            RunConfig(**{name: 0.0})

    def test_every_command_accepted(self):
        """Test each listed command builds a config."""
        for command in COMMANDS:
            assert RunConfig(command=command).command == command

    def test_from_file(self, tmp_path):
        """Test loading config from file."""
        config_file = tmp_path / ".nullflow.toml"
        config_file.write_text(
            """
[nullflow]
output = "results"
format = "json"
run_log = "logs/run.jsonl"

[nullflow.tolerances]
frame = "1/1000000000"
pseudo_arc = 0.01
null = "2e-4"
instability_factor = 50
painleve = "1e-9"

[nullflow.hierarchy]
max_depth = 5
"""
        )

        config = RunConfig.from_file(config_file)

        assert config.output == "results"
        assert config.format == "json"
        assert config.run_log == "logs/run.jsonl"
        assert config.frame_tolerance == pytest.approx(1e-9)
        assert config.arc_tolerance == 0.01
        assert config.null_tolerance == pytest.approx(2e-4)
        assert config.instability_factor == 50.0
        assert config.painleve_tolerance == pytest.approx(1e-9)
        assert config.max_depth == 5

    def test_from_file_partial(self, tmp_path):
        """Test missing keys fall back to defaults."""
        config_file = tmp_path / ".nullflow.toml"
        config_file.write_text('[nullflow]\noutput = "elsewhere"\n')

        config = RunConfig.from_file(config_file)

        assert config.output == "elsewhere"
        assert config.frame_tolerance == 1e-8
        assert config.max_depth == 8

    def test_from_file_not_found(self, tmp_path):
        """Test loading from non-existent file raises error."""
        with pytest.raises(FileNotFoundError, match="Config file not found"):
            RunConfig.from_file(tmp_path / "nonexistent.toml")

    def test_from_file_invalid_toml(self, tmp_path):
        """Test loading invalid TOML raises error."""
        config_file = tmp_path / "invalid.toml"
        config_file.write_text("[nullflow\noutput = ")

        with pytest.raises(ValueError, match="Failed to parse config file"):
            RunConfig.from_file(config_file)

    def test_from_file_invalid_value(self, tmp_path):
        """Test a non-numeric tolerance raises ValueError."""
        config_file = tmp_path / ".nullflow.toml"
        config_file.write_text('[nullflow.tolerances]\nframe = "tiny"\n')

        with pytest.raises(ValueError, match="not a number"):
            RunConfig.from_file(config_file)

    def test_from_file_or_defaults_with_file(self, tmp_path):
        """Test an existing file is loaded."""
        config_file = tmp_path / "custom.toml"
        config_file.write_text('[nullflow]\nformat = "json"\n')

        assert RunConfig.from_file_or_defaults(config_file).format == "json"

    def test_from_file_or_defaults_without_file(self, tmp_path):
        """Test a missing file gives defaults."""
        config = RunConfig.from_file_or_defaults(tmp_path / "absent.toml")
        assert config.output == "nullflow_out"

    def test_from_file_or_defaults_current_directory(self, tmp_path, monkeypatch):
        """Test .nullflow.toml is picked up from the working directory."""
        (tmp_path / ".nullflow.toml").write_text("[nullflow.hierarchy]\nmax_depth = 3\n")
        monkeypatch.chdir(tmp_path)

        assert RunConfig.from_file_or_defaults().max_depth == 3

    def test_for_command(self):
        """Test for_command copies settings and binds parameters."""
        base = RunConfig(output="runs", frame_tolerance=1e-6, max_depth=4)

        bound = base.for_command("reconstruct", h=0.01)

        assert bound.command == "reconstruct"
        assert bound.output == "runs"
        assert bound.frame_tolerance == 1e-6
        assert bound.max_depth == 4
        assert bound.parameters == {"h": 0.01}
        assert base.command == ""
        assert base.parameters == {}

    def test_to_dict(self):
        """Test conversion to dictionary."""
        config = RunConfig(command="lax", parameters={"g2": 4.0})

        document = config.to_dict()

        assert document["command"] == "lax"
        assert document["parameters"] == {"g2": 4.0}
        assert document["tolerances"] == {
            "frame": 1e-8,
            "pseudo_arc": 1e-3,
            "null": 1e-4,
            "instability_factor": 1e3,
            "painleve": 1e-10,
        }
        assert document["hierarchy"] == {"max_depth": 8}

    def test_metadata(self):
        """Test metadata carries the version and the full configuration."""
        metadata = RunConfig(command="hierarchy").metadata()

        assert metadata["version"] == __version__
        assert metadata["command"] == "hierarchy"
        assert "tolerances" in metadata
