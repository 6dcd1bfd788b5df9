"""Shared fixtures for the nullflow tests.

Curvature fixtures are written through the formats module so that the CLI
tests read exactly what the command line would. Hypothesis runs a lighter
profile on Python 3.14, where example generation is slower; tests that need
many examples set them explicitly with ``@settings``.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, Phase, settings

from nullflow import formats
from nullflow.provenance import RunLog

if sys.version_info >= (3, 14):
    settings.register_profile(
        "nullflow-light",
        max_examples=20,
        deadline=2000,
        suppress_health_check=[HealthCheck.too_slow],
        phases=[Phase.explicit, Phase.generate, Phase.target],
    )
    settings.load_profile("nullflow-light")
else:
    settings.register_profile("nullflow", max_examples=50, deadline=1000)
    settings.load_profile("nullflow")


@pytest.fixture
def run_log(tmp_path):
    """Run log writing JSON lines under ``tmp_path/logs``."""
    return RunLog(enabled=True, log_file=tmp_path / "logs" / "run.jsonl")


@pytest.fixture
def output_dir(tmp_path):
    """Empty output directory for commands that write files."""
    out_dir = tmp_path / "out"
    out_dir.mkdir()
    return out_dir


@pytest.fixture
def sine_curvature_csv(tmp_path) -> Path:
    """Write kappa = 0.3 sin(s) on 256 nodes of [0, 2 pi) as a curvature CSV.

    Returns:
        Path: The CSV file.

    """
    length = 2 * np.pi
    s = np.arange(256) * (length / 256)
    return formats.write_curvature(tmp_path / "sine.csv", s, 0.3 * np.sin(s), {"length": length})


@pytest.fixture
def zero_curvature_csv(tmp_path) -> Path:
    """Write kappa = 0 on 101 nodes of [0, 1] as a curvature CSV.

    Returns:
        Path: The CSV file.

    """
    s = np.linspace(0.0, 1.0, 101)
    return formats.write_curvature(tmp_path / "zero.csv", s, np.zeros_like(s))


@pytest.fixture
def soliton_csv(tmp_path) -> Path:
    """Write the KdV soliton 2 sech^2(s - L/2), L = 40, on 512 nodes.

    Returns:
        Path: The CSV file.

    """
    length = 40.0
    s = np.arange(512) * (length / 512)
    return formats.write_curvature(tmp_path / "soliton.csv", s, 2.0 / np.cosh(s - length / 2) ** 2, {"length": length})
