"""
Report output for trace-rearrange.
Results are newline-delimited JSON; each run also writes a manifest that
carries the command, overrides and effective configuration.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from . import __version__

logger = logging.getLogger(__name__)


def json_safe(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays and non-finite floats to JSON values."""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return json_safe(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "nan"
        return "inf" if value > 0 else "-inf"
    return value


def to_json_line(record: Dict[str, Any]) -> str:
    # sorted keys keep repeated runs byte-identical
    return json.dumps(json_safe(record), sort_keys=True, allow_nan=False)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ResultsWriter:
    """
    Streams records to an NDJSON file, one object per line.
    Each line is flushed so a long run leaves a usable prefix behind.
    """

    def __init__(self, path: str):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", encoding="utf-8")
        self.count = 0

    def write(self, record: Dict[str, Any]) -> None:
        self._file.write(to_json_line(record) + "\n")
        self._file.flush()
        self.count += 1

    def close(self) -> None:
        if not self._file.closed:
            self._file.close()
            logger.info(f"Wrote {self.count} records to {self.path}")

    def __enter__(self) -> "ResultsWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def append_record(path: str, record: Dict[str, Any]) -> str:
    """Append one record to an NDJSON log (hunt results accumulate here)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "a", encoding="utf-8") as f:
        f.write(to_json_line(record) + "\n")
    return str(target)


def write_json(path: str, data: Dict[str, Any]) -> str:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        json.dump(json_safe(data), f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")
    logger.info(f"JSON report saved to {target}")
    return str(target)


def manifest_path(results_path: str) -> Path:
    """``results/verify_all.ndjson`` -> ``results/verify_all.manifest.json``."""
    return Path(results_path).with_suffix(".manifest.json")


@dataclass
class RunManifest:
    """Everything needed to re-run a command and get the same results file."""
    command: str
    results_path: str
    config_path: Optional[str] = None
    overrides: Dict[str, Any] = field(default_factory=dict)
    effective_config: Dict[str, Any] = field(default_factory=dict)
    started_at: str = field(default_factory=utc_now)
    tool_version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config_path": self.config_path,
            "overrides": dict(self.overrides),
            "effective_config": self.effective_config,
            "started_at": self.started_at,
            "tool_version": self.tool_version,
            "results_path": self.results_path,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            command=data["command"],
            results_path=data["results_path"],
            config_path=data.get("config_path"),
            overrides=dict(data.get("overrides") or {}),
            effective_config=dict(data.get("effective_config") or {}),
            started_at=data.get("started_at", ""),
            tool_version=data.get("tool_version", ""),
        )

    def write(self) -> str:
        return write_json(str(manifest_path(self.results_path)), self.to_dict())
