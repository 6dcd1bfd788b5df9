"""Run log recording what each command read, computed and wrote.

Events are emitted through loguru and, when a file is configured, appended to
it as JSON lines so a run can be reproduced from its log.
"""

import json
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

from loguru import logger


class RunLog:
    """Structured log of a single nullflow run.

    Attributes:
        enabled: Whether events are recorded.
        log_file: Optional path of the JSON-lines file.

    """

    def __init__(self, enabled: bool = True, log_file: Path | None = None) -> None:
        """Initialize the run log.

        Args:
            enabled: Whether to record events. Defaults to True.
            log_file: Optional path to append events to.

        """
        self.enabled = enabled
        self.log_file = log_file

        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)

    def _log_event(self, event_type: str, details: dict[str, Any]) -> None:
        if not self.enabled:
            return

        entry = {
            "timestamp": datetime.now(UTC).isoformat(),
            "event_type": event_type,
            **details,
        }
        logger.debug(f"[RUN] {event_type}: {json.dumps(details, default=str, sort_keys=True)}")

        if self.log_file:
            try:
                with self.log_file.open("a") as f:
                    f.write(json.dumps(entry, default=str) + "\n")
            except OSError as e:  # pragma: no cover
                logger.error(f"Failed to write run log: {e}")

    def log_run_start(self, command: str, parameters: dict[str, Any]) -> None:
        """Record the command and its full parameter set."""
        self._log_event("run_start", {"command": command, "parameters": parameters})

    def log_input_read(self, path: Path, success: bool, reason: str | None = None) -> None:
        """Record an input file validation or read.

        Args:
            path: The input file.
            success: Whether it was accepted.
            reason: Why it was rejected.

        """
        self._log_event("input_read", {"path": str(path), "success": success, "reason": reason})

    def log_artifact_write(self, path: Path, kind: str) -> None:
        """Record an artifact written to disk.

        Args:
            path: The artifact.
            kind: What it holds, e.g. ``curve`` or ``snapshots``.

        """
        self._log_event("artifact_write", {"path": str(path), "kind": kind})

    def log_run_error(self, error: dict[str, Any]) -> None:
        """Record the error document of a failed run."""
        self._log_event("run_error", error)


_run_log: RunLog | None = None


def get_run_log() -> RunLog:
    """Get the global run log, creating a file-less one on first use."""
    global _run_log
    if _run_log is None:
        _run_log = RunLog()
    return _run_log


def init_run_log(enabled: bool = True, log_file: Path | None = None) -> RunLog:
    """Initialize the global run log.

    Args:
        enabled: Whether to record events.
        log_file: Optional path of the JSON-lines file.

    Returns:
        The initialized RunLog instance.

    """
    global _run_log
    _run_log = RunLog(enabled=enabled, log_file=log_file)
    return _run_log
