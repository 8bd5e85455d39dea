"""
Result records for trace-rearrange.

InequalityReport is the outcome of one checker evaluation; HuntRecord is
the outcome of a counterexample search. Both serialize to plain dicts for
JSON / NDJSON output.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

DEFAULT_TOLERANCE = 1e-8


class Verdict(str, Enum):
    """Outcome of comparing relative slack against tolerance."""
    HOLDS = "holds"
    EQUALITY = "equality_within_tol"
    VIOLATED = "violated"


class Status(str, Enum):
    """Mathematical standing of a statement."""
    PROVED = "proved"
    CONJECTURE = "conjecture"
    KNOWN_REGION = "known_region"


class Orientation(str, Enum):
    """Which side must dominate for the inequality to hold."""
    GE = "lhs>=rhs"
    LE = "lhs<=rhs"

    def oriented_slack(self, lhs: float, rhs: float) -> float:
        return lhs - rhs if self is Orientation.GE else rhs - lhs


def relative_slack(slack: float, lhs: float, rhs: float) -> float:
    return slack / max(abs(lhs), abs(rhs), 1.0)


def classify(rel_slack: float, tolerance: float) -> Verdict:
    if rel_slack < -tolerance:
        return Verdict.VIOLATED
    if abs(rel_slack) <= tolerance:
        return Verdict.EQUALITY
    return Verdict.HOLDS


@dataclass
class InequalityReport:
    """One checker evaluation."""
    inequality_id: str
    params: Dict[str, float]
    lhs: float
    rhs: float
    slack: float
    relative_slack: float
    tolerance: float
    verdict: Verdict
    orientation: Orientation
    status: Status = Status.PROVED
    flags: Dict[str, Any] = field(default_factory=dict)
    witness: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def violated(self) -> bool:
        return self.verdict is Verdict.VIOLATED

    @property
    def evidence_only(self) -> bool:
        return self.status is Status.CONJECTURE

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["verdict"] = self.verdict.value
        result["orientation"] = self.orientation.value
        result["status"] = self.status.value
        result["params"] = {k: _json_float(v) for k, v in self.params.items()}
        result["evidence_only"] = self.evidence_only
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InequalityReport":
        return cls(
            inequality_id=data["inequality_id"],
            params={k: _parse_float(v) for k, v in data.get("params", {}).items()},
            lhs=float(data["lhs"]),
            rhs=float(data["rhs"]),
            slack=float(data["slack"]),
            relative_slack=float(data["relative_slack"]),
            tolerance=float(data["tolerance"]),
            verdict=Verdict(data["verdict"]),
            orientation=Orientation(data["orientation"]),
            status=Status(data.get("status", Status.PROVED.value)),
            flags=dict(data.get("flags", {})),
            witness=data.get("witness", {}),
            seed=data.get("seed"),
        )


def make_report(inequality_id: str, params: Dict[str, float], lhs: float, rhs: float,
                orientation: Orientation, tolerance: float = DEFAULT_TOLERANCE,
                witness: Optional[Dict[str, Any]] = None,
                status: Status = Status.PROVED,
                flags: Optional[Dict[str, Any]] = None,
                seed: Optional[int] = None) -> InequalityReport:
    """
    Build a report with slack oriented so that slack >= 0 means "holds".

    Args:
        inequality_id: Registry key
        params: Named scalar parameters of the evaluation
        lhs, rhs: The two sides as written in the statement
        orientation: Required relation between lhs and rhs
        tolerance: Relative tolerance for the verdict
        witness: Serialized inputs
        status: proved or conjecture, resolved for these inputs
        flags: Named hypothesis flags
        seed: Optional ensemble seed

    Returns:
        InequalityReport
    """
    lhs = float(lhs)
    rhs = float(rhs)
    slack = orientation.oriented_slack(lhs, rhs)
    rel = relative_slack(slack, lhs, rhs)
    return InequalityReport(
        inequality_id=inequality_id,
        params=dict(params),
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        relative_slack=rel,
        tolerance=float(tolerance),
        verdict=classify(rel, tolerance),
        orientation=orientation,
        status=status,
        flags=dict(flags or {}),
        witness=dict(witness or {}),
        seed=seed,
    )


@dataclass
class HuntRecord:
    """Best witness found by a randomized search, with provenance."""
    best_report: InequalityReport
    trials: int
    violations: int
    proved_violations: int
    provenance: Dict[str, int]
    wall_time: float
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self, include_wall_time: bool = True) -> Dict[str, Any]:
        result = {
            "best_report": self.best_report.to_dict(),
            "trials": self.trials,
            "violations": self.violations,
            "proved_violations": self.proved_violations,
            "provenance": dict(self.provenance),
            "config": self.config,
        }
        if include_wall_time:
            result["wall_time"] = self.wall_time
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HuntRecord":
        return cls(
            best_report=InequalityReport.from_dict(data["best_report"]),
            trials=int(data["trials"]),
            violations=int(data["violations"]),
            proved_violations=int(data.get("proved_violations", 0)),
            provenance={k: int(v) for k, v in data["provenance"].items()},
            wall_time=float(data.get("wall_time", 0.0)),
            config=data.get("config", {}),
        )


def _json_float(value: float):
    # JSON has no infinity literal
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _parse_float(value) -> float:
    return float(value)
