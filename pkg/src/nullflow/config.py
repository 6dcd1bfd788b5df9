"""Configuration management for nullflow.

This module provides run configuration loading from TOML files and parsing of
numeric command-line values.
"""

import tomllib
from fractions import Fraction
from pathlib import Path
from typing import Any

from .evolution import DEFAULT_INSTABILITY_FACTOR
from .geometry import DEFAULT_FRAME_TOLERANCE, DEFAULT_NULL_TOLERANCE, DEFAULT_PSEUDO_ARC_TOLERANCE
from .hierarchy import DEFAULT_MAX_DEPTH
from .special import DEFAULT_PAINLEVE_TOLERANCE

COMMANDS = (
    "hierarchy",
    "motion",
    "reconstruct",
    "extract",
    "evolve",
    "travelingwave",
    "lax",
    "painleve",
    "similarity",
)
FORMATS = ("csv", "json")
DEFAULT_CONFIG_FILE = ".nullflow.toml"


def parse_real(text: str | float | int) -> float:
    """Parse a decimal or rational number such as ``"0.25"`` or ``"1/2"``.

    Raises:
        ValueError: If the text is not a number.

    Examples:
        >>> parse_real("1/2")
        0.5
        >>> parse_real("-3e-2")
        -0.03

    """
    if isinstance(text, int | float):
        return float(text)
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a number: {text!r}") from e  # noqa: TRY003


class RunConfig:
    """Configuration of one nullflow run.

    Attributes:
        command: Subcommand name, one of ``COMMANDS`` (empty before dispatch).
        output: Output directory for artifacts.
        format: Output format, ``csv`` or ``json``.
        frame_tolerance: Largest admitted frame metric residual.
        arc_tolerance: Largest admitted deviation from the natural parameter.
        null_tolerance: Largest admitted relative ``<g', g'>``.
        instability_factor: Growth threshold of the evolution.
        painleve_tolerance: Relative tolerance of the Painleve II integrator.
        max_depth: Largest hierarchy index generated without an explicit override.
        run_log: Optional path of the JSON-lines run log.
        parameters: Command parameters recorded in output metadata.

    """

    def __init__(
        self,
        command: str = "",
        output: str = "nullflow_out",
        format: str = "csv",  # noqa: A002
        frame_tolerance: float = DEFAULT_FRAME_TOLERANCE,
        arc_tolerance: float = DEFAULT_PSEUDO_ARC_TOLERANCE,
        null_tolerance: float = DEFAULT_NULL_TOLERANCE,
        instability_factor: float = DEFAULT_INSTABILITY_FACTOR,
        painleve_tolerance: float = DEFAULT_PAINLEVE_TOLERANCE,
        max_depth: int = DEFAULT_MAX_DEPTH,
        run_log: str | None = None,
        parameters: dict[str, Any] | None = None,
    ) -> None:
        """Initialize configuration with defaults.

        Raises:
            ValueError: If the command, format or a tolerance is invalid.

        """
        if command and command not in COMMANDS:
            raise ValueError(f"unknown command {command!r}")  # noqa: TRY003
        if format not in FORMATS:
            raise ValueError(f"unknown output format {format!r}")  # noqa: TRY003
        for name, value in (
            ("frame_tolerance", frame_tolerance),
            ("arc_tolerance", arc_tolerance),
            ("null_tolerance", null_tolerance),
            ("instability_factor", instability_factor),
            ("painleve_tolerance", painleve_tolerance),
        ):
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")  # noqa: TRY003
        self.command = command
        self.output = output
        self.format = format
        self.frame_tolerance = float(frame_tolerance)
        self.arc_tolerance = float(arc_tolerance)
        self.null_tolerance = float(null_tolerance)
        self.instability_factor = float(instability_factor)
        self.painleve_tolerance = float(painleve_tolerance)
        self.max_depth = int(max_depth)
        self.run_log = run_log
        self.parameters = dict(parameters or {})

    @classmethod
    def from_file(cls, config_path: Path) -> "RunConfig":
        """Load configuration from a TOML file.

        The settings live in a ``[nullflow]`` table with sub-tables
        ``[nullflow.tolerances]`` and ``[nullflow.hierarchy]``.

        Raises:
            FileNotFoundError: If the file does not exist.
            ValueError: If the file cannot be parsed or holds invalid values.

        """
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")  # noqa: TRY003

        try:
            with config_path.open("rb") as f:
                config_data = tomllib.load(f)
        except Exception as e:
            raise ValueError(f"Failed to parse config file: {e}") from e  # noqa: TRY003

        section = config_data.get("nullflow", {})
        tolerances = section.get("tolerances", {})
        hierarchy = section.get("hierarchy", {})

        return cls(
            output=section.get("output", "nullflow_out"),
            format=section.get("format", "csv"),
            run_log=section.get("run_log"),
            frame_tolerance=parse_real(tolerances.get("frame", DEFAULT_FRAME_TOLERANCE)),
            arc_tolerance=parse_real(tolerances.get("pseudo_arc", DEFAULT_PSEUDO_ARC_TOLERANCE)),
            null_tolerance=parse_real(tolerances.get("null", DEFAULT_NULL_TOLERANCE)),
            instability_factor=parse_real(tolerances.get("instability_factor", DEFAULT_INSTABILITY_FACTOR)),
            painleve_tolerance=parse_real(tolerances.get("painleve", DEFAULT_PAINLEVE_TOLERANCE)),
            max_depth=int(hierarchy.get("max_depth", DEFAULT_MAX_DEPTH)),
        )

    @classmethod
    def from_file_or_defaults(cls, config_path: Path | None = None) -> "RunConfig":
        """Load configuration from file if it exists, otherwise use defaults.

        Args:
            config_path: Optional path to config file. If None, looks for
                        .nullflow.toml in current directory.

        """
        if config_path is None:
            config_path = Path(DEFAULT_CONFIG_FILE)

        if config_path.exists():
            return cls.from_file(config_path)

        return cls()

    def for_command(self, command: str, **parameters: Any) -> "RunConfig":
        """Return a copy bound to a subcommand and its parameters."""
        document = self.to_dict()
        tolerances = document.pop("tolerances")
        hierarchy = document.pop("hierarchy")
        document.pop("command")
        document.pop("parameters")
        return RunConfig(
            command=command,
            **document,
            frame_tolerance=tolerances["frame"],
            arc_tolerance=tolerances["pseudo_arc"],
            null_tolerance=tolerances["null"],
            instability_factor=tolerances["instability_factor"],
            painleve_tolerance=tolerances["painleve"],
            max_depth=hierarchy["max_depth"],
            parameters=parameters,
        )

    def metadata(self) -> dict[str, Any]:
        """Metadata embedded in every artifact: enough to re-run the command."""
        from . import __version__

        return {"version": __version__, **self.to_dict()}

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "command": self.command,
            "output": self.output,
            "format": self.format,
            "run_log": self.run_log,
            "parameters": dict(self.parameters),
            "tolerances": {
                "frame": self.frame_tolerance,
                "pseudo_arc": self.arc_tolerance,
                "null": self.null_tolerance,
                "instability_factor": self.instability_factor,
                "painleve": self.painleve_tolerance,
            },
            "hierarchy": {"max_depth": self.max_depth},
        }
