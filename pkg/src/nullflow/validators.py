"""Validation of input files and output directories before any computation.

Each check is recorded in the run log, whether it succeeds or not.
"""

import stat
from pathlib import Path

from loguru import logger

from .exceptions import InputInvalidError, InputNotFoundError, OutputWriteError
from .provenance import RunLog

MAX_INPUT_BYTES = 64 * 1024 * 1024
INPUT_EXTENSIONS = (".csv", ".json", ".jsonl", ".txt")


def validate_input_file(
    path: Path,
    run_log: RunLog,
    extensions: tuple[str, ...] = INPUT_EXTENSIONS,
    max_bytes: int = MAX_INPUT_BYTES,
) -> Path:
    """Check that an input exists, is a regular file, is not too large and has a known extension.

    Args:
        path: Input file.
        run_log: Log receiving the outcome.
        extensions: Accepted suffixes.
        max_bytes: Size limit.

    Returns:
        The resolved path.

    Raises:
        InputNotFoundError: If the file does not exist.
        InputInvalidError: If it is not a regular file, too large, or of unknown type.

    """
    try:
        stat_result = path.stat()
    except FileNotFoundError:
        run_log.log_input_read(path, False, "file not found")
        raise InputNotFoundError(path) from None
    except OSError as e:
        run_log.log_input_read(path, False, str(e))
        raise InputInvalidError(path, reason=f"cannot access file: {e}") from e

    if not stat.S_ISREG(stat_result.st_mode):
        run_log.log_input_read(path, False, "not a regular file")
        raise InputInvalidError(path, reason="path is not a file")

    if stat_result.st_size > max_bytes:
        run_log.log_input_read(path, False, "size limit exceeded")
        raise InputInvalidError(path, reason=f"file is larger than {max_bytes} bytes")

    if path.suffix.lower() not in extensions:
        run_log.log_input_read(path, False, f"unexpected extension {path.suffix!r}")
        raise InputInvalidError(path, reason=f"expected one of {', '.join(extensions)}")

    run_log.log_input_read(path, True)
    return path.resolve()


def validate_output_dir(path: Path, run_log: RunLog) -> Path:
    """Create the output directory if needed and check that it is a writable directory.

    Raises:
        OutputWriteError: If the directory cannot be created or is not writable.

    """
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        run_log.log_artifact_write(path, "directory (failed)")
        raise OutputWriteError(path, e) from e
    if not path.is_dir():
        error = NotADirectoryError(f"{path} is not a directory")
        raise OutputWriteError(path, error)
    marker = path / ".nullflow-write-test"
    try:
        marker.touch()
        marker.unlink()
    except OSError as e:
        raise OutputWriteError(path, e) from e
    logger.debug(f"Output directory {path} is writable")
    return path
