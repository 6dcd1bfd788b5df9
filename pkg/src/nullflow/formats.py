"""Readers and writers for the files exchanged between pipeline stages.

CSV files start with ``#`` comment lines carrying a JSON metadata document
(command, parameters, grid), followed by a header row and the data::

    # {"command": "reconstruct", "h": 0.01, ...}
    s,x1,x2,x3
    0,0,0,0
    ...

Floats are written with 17 significant digits, so identical runs produce
identical files. Human-readable reports are rendered from the Jinja2
templates shipped in ``nullflow/templates``.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jinja2
import numpy as np
from jinja2.sandbox import SandboxedEnvironment
from loguru import logger

from .evolution import FlowState
from .exceptions import InputInvalidError, InputNotFoundError, OutputWriteError
from .geometry import CurveSample

CURVATURE_COLUMNS = ("s", "kappa")
CURVE_COLUMNS = ("s", "x1", "x2", "x3")
FRAME_COLUMNS = ("s", "x1", "x2", "x3", *(f"a{i}_{j}" for i in (1, 2, 3) for j in (1, 2, 3)))
SNAPSHOT_COLUMNS = ("t", "s", "kappa")
CONSERVED_COLUMNS = ("t", "P0", "P1", "P2")
FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True, eq=False)
class Table:
    """Columns read from a CSV file.

    Attributes:
        columns: Column names from the header row.
        data: Values, shape ``(rows, len(columns))``.
        meta: Metadata document from the comment lines.

    """

    columns: tuple[str, ...]
    data: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        """Return a column by name."""
        return self.data[:, self.columns.index(name)]


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    return value


def write_text(path: Path, text: str) -> Path:
    """Write text, creating parent directories.

    Raises:
        OutputWriteError: If the file cannot be written.

    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise OutputWriteError(path, e) from e
    logger.debug(f"Wrote {path}")
    return path


def _read_lines(path: Path) -> list[str]:
    try:
        return path.read_text().splitlines()
    except FileNotFoundError:
        raise InputNotFoundError(path) from None
    except (OSError, UnicodeDecodeError) as e:
        raise InputInvalidError(path, f"cannot read file: {e}") from e


def write_table(
    path: Path, columns: Sequence[str], data: np.ndarray, meta: Mapping[str, Any] | None = None
) -> Path:
    """Write a CSV file with a metadata comment and a header row.

    Args:
        path: Destination.
        columns: Column names.
        data: Values, shape ``(rows, len(columns))``.
        meta: Metadata embedded in the comment line.

    Returns:
        The path written.

    Raises:
        OutputWriteError: If the file cannot be written.

    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[1] != len(columns):
        raise ValueError(f"expected {len(columns)} columns, got {data.shape[1]}")  # noqa: TRY003
    lines = [f"# {json.dumps(_plain(dict(meta or {})), sort_keys=True)}", ",".join(columns)]
    lines.extend(",".join(FLOAT_FORMAT % v for v in row) for row in data)
    return write_text(path, "\n".join(lines) + "\n")


def read_table(path: Path, expected: Sequence[str] | None = None) -> Table:
    """Read a CSV file written by :func:`write_table`.

    Args:
        path: Source file.
        expected: Column names that must be present.

    Returns:
        The table.

    Raises:
        InputNotFoundError: If the file does not exist.
        InputInvalidError: If the header, metadata or values cannot be parsed.

    """
    meta: dict[str, Any] = {}
    header: tuple[str, ...] | None = None
    rows: list[str] = []
    for line in _read_lines(path):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.startswith("{"):
                try:
                    meta.update(json.loads(body))
                except json.JSONDecodeError as e:
                    raise InputInvalidError(path, f"bad metadata comment: {e}") from e
        elif header is None:
            header = tuple(name.strip() for name in stripped.split(","))
        else:
            rows.append(stripped)
    if header is None:
        raise InputInvalidError(path, "missing header row")
    missing = [name for name in expected or () if name not in header]
    if missing:
        raise InputInvalidError(path, f"missing columns {', '.join(missing)}")
    if not rows:
        raise InputInvalidError(path, "no data rows")
    try:
        data = np.loadtxt(rows, delimiter=",", ndmin=2)
    except ValueError as e:
        raise InputInvalidError(path, f"bad numeric data: {e}") from e
    if data.shape[1] != len(header):
        raise InputInvalidError(path, f"expected {len(header)} values per row, got {data.shape[1]}")
    if not np.all(np.isfinite(data)):
        raise InputInvalidError(path, "non-finite values")
    return Table(columns=header, data=data, meta=meta)


def write_curvature(path: Path, s: np.ndarray, kappa: np.ndarray, meta: Mapping[str, Any] | None = None) -> Path:
    """Write a curvature profile as ``s,kappa``."""
    return write_table(path, CURVATURE_COLUMNS, np.column_stack([s, kappa]), meta)


def read_curvature(path: Path) -> Table:
    """Read a ``s,kappa`` curvature profile."""
    return read_table(path, CURVATURE_COLUMNS)


def write_curve(path: Path, curve: CurveSample, meta: Mapping[str, Any] | None = None) -> Path:
    """Write curve points as ``s,x1,x2,x3``."""
    return write_table(path, CURVE_COLUMNS, np.column_stack([curve.s, curve.points]), meta)


def read_curve(path: Path) -> Table:
    """Read ``s,x1,x2,x3`` (or ``t,x1,x2,x3`` for a curve in an arbitrary parameter)."""
    table = read_table(path)
    if not {"x1", "x2", "x3"} <= set(table.columns) or not {"s", "t"} & set(table.columns):
        raise InputInvalidError(path, "a curve needs a parameter column s or t and columns x1,x2,x3")
    return table


def curve_points(table: Table) -> tuple[np.ndarray, np.ndarray]:
    """Parameter column and ``(n, 3)`` points of a curve table."""
    parameter = table.column("s" if "s" in table.columns else "t")
    return parameter, np.column_stack([table.column(name) for name in ("x1", "x2", "x3")])


def write_frames(path: Path, curve: CurveSample, meta: Mapping[str, Any] | None = None) -> Path:
    """Write frames as ``s``, the point and the three frame vectors (13 columns)."""
    if curve.frames is None:
        raise ValueError("the curve carries no frames")  # noqa: TRY003
    vectors = np.transpose(curve.frames[:, 1:, 1:], (0, 2, 1)).reshape(curve.size, 9)
    return write_table(path, FRAME_COLUMNS, np.column_stack([curve.s, curve.points, vectors]), meta)


def snapshot_rows(states: Iterable[FlowState]) -> np.ndarray:
    """Long-format ``t,s,kappa`` rows of a list of snapshots."""
    blocks = [np.column_stack([np.full(st.grid.n, st.t), st.grid.s, st.grid.values]) for st in states]
    return np.vstack(blocks)


def write_snapshots(
    path: Path, states: Sequence[FlowState], fmt: str = "csv", meta: Mapping[str, Any] | None = None
) -> Path:
    """Write the curvature snapshots of an evolution.

    ``csv`` gives ``t,s,kappa`` rows; ``json`` gives one JSON document per line
    with keys ``t``, ``kappa`` and ``conserved`` after a metadata line.
    """
    if fmt == "csv":
        return write_table(path, SNAPSHOT_COLUMNS, snapshot_rows(states), meta)
    if fmt != "json":
        raise ValueError(f"unknown output format {fmt!r}")  # noqa: TRY003
    lines = [json.dumps({"meta": _plain(dict(meta or {}))}, sort_keys=True)]
    lines.extend(
        json.dumps({"t": st.t, "kappa": st.grid.values.tolist(), "conserved": list(st.conserved)}, sort_keys=True)
        for st in states
    )
    return write_text(path, "\n".join(lines) + "\n")


def write_conserved(path: Path, states: Sequence[FlowState], meta: Mapping[str, Any] | None = None) -> Path:
    """Write the conserved-quantity log ``t,P0,P1,P2``."""
    rows = np.array([[st.t, *st.conserved] for st in states])
    return write_table(path, CONSERVED_COLUMNS, rows, meta)


def relative_drift(states: Sequence[FlowState]) -> np.ndarray:
    """Largest relative change of each conserved functional over the snapshots."""
    values = np.array([st.conserved for st in states])
    scale = np.maximum(np.abs(values[0]), np.finfo(float).tiny)
    return np.max(np.abs(values - values[0]), axis=0) / scale


def write_json(path: Path, document: Mapping[str, Any]) -> Path:
    """Write a JSON document with sorted keys."""
    return write_text(path, json.dumps(_plain(dict(document)), indent=2, sort_keys=True) + "\n")


def read_json(path: Path) -> Any:
    """Read a JSON document.

    Raises:
        InputNotFoundError: If the file does not exist.
        InputInvalidError: If it is not valid JSON.

    """
    text = "\n".join(_read_lines(path))
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputInvalidError(path, f"invalid JSON: {e}") from e


def render_report(template_name: str, **context: Any) -> str:
    """Render one of the packaged text templates.

    Examples:
        >>> from nullflow.hierarchy import generate
        >>> "u4" in render_report("hierarchy.txt.j2", table=generate(3))
        True

    """
    env = SandboxedEnvironment(
        loader=jinja2.PackageLoader("nullflow", "templates"),
        autoescape=False,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    return env.get_template(template_name).render(**context)
