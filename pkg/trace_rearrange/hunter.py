"""
Randomized counterexample search.

Each restart draws a fresh ensemble sample on its own substream and runs an
accept-only descent in factor space: a perturbation is kept only when it
strictly lowers the minimum relative slack over the parameter grid, and the
step size shrinks after a streak of rejections. Restarts are independent,
so they run on a thread pool; results are merged by
(relative_slack, restart, step) and do not depend on the worker count.
"""

import itertools
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .ensembles import PERTURB_STREAM, EnsembleKind, EnsembleSpec, draw_inputs, parse_kind, perturb, substream
from .errors import BadSpec, ConfigError, CorruptWitness, ReplayMismatch
from .linalg_core import adjoint
from .matrix_io import read_witness
from .records import DEFAULT_TOLERANCE, HuntRecord, InequalityReport, Status
from .registry import InequalityRegistry, RegistryEntry, get_registry

logger = logging.getLogger(__name__)

# Kinds whose members are not Hermitian; their witnesses are not re-symmetrized.
NON_HERMITIAN_KINDS = (EnsembleKind.GENERAL_COMPLEX, EnsembleKind.UNITARY, EnsembleKind.COMPLEX_VECTOR)

REPLAY_TOLERANCE = 1e-12

ProgressCallback = Callable[[int, int, "RestartResult"], None]


@dataclass
class HuntConfig:
    """Search target, parameter grid and search schedule."""
    inequality_id: str
    param_grid: Dict[str, List[float]]
    dims: List[int]
    ensemble_kind: str = "general_complex"
    restarts: int = 50
    steps_per_restart: int = 40
    initial_magnitude: float = 0.3
    shrink_factor: float = 0.5
    rejection_streak: int = 10
    seed: int = 1
    scale: float = 1.0
    tolerance: float = DEFAULT_TOLERANCE
    confirm_tolerance: float = 1e-10
    workers: int = 1
    enforce_domain: bool = True

    def validate(self):
        """Raise ConfigError on structural problems."""
        if not isinstance(self.param_grid, dict):
            raise ConfigError("param_grid: must be a mapping")
        for name, values in self.param_grid.items():
            if not isinstance(values, list) or not values:
                raise ConfigError(f"param_grid.{name}: must be a nonempty list")
        if not self.dims or any(not isinstance(d, int) or d < 1 for d in self.dims):
            raise ConfigError(f"dims: must be a nonempty list of positive integers, got {self.dims!r}")
        for name in ("restarts", "steps_per_restart", "rejection_streak", "workers"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name}: must be an integer >= 1, got {value!r}")
        if not self.initial_magnitude > 0:
            raise ConfigError(f"initial_magnitude: must be > 0, got {self.initial_magnitude}")
        if not 0 < self.shrink_factor < 1:
            raise ConfigError(f"shrink_factor: must lie in (0, 1), got {self.shrink_factor}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed: must be an unsigned 64-bit integer, got {self.seed!r}")
        if not self.tolerance > 0 or not self.confirm_tolerance > 0:
            raise ConfigError("tolerance: tolerances must be positive")
        try:
            parse_kind(self.ensemble_kind)
        except BadSpec as e:
            raise ConfigError(f"ensemble_kind: {e}") from e

    def grid_points(self) -> List[Dict[str, float]]:
        """Cartesian product of the grid, keys sorted, values in file order."""
        names = sorted(self.param_grid)
        return [dict(zip(names, combo)) for combo in itertools.product(*(self.param_grid[n] for n in names))]

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["param_grid"] = {k: [_json_value(v) for v in vs] for k, vs in self.param_grid.items()}
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None) -> "HuntConfig":
        """
        Build from a parsed document; ``defaults`` fill fields the document omits.

        Raises:
            ConfigError: unknown keys, missing required keys or bad types
        """
        if not isinstance(data, dict):
            raise ConfigError("hunt config: top level must be a mapping")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"{unknown[0]}: unknown hunt config key")
        merged = dict(defaults or {})
        merged.update(data)
        for required in ("inequality_id", "param_grid", "dims"):
            if required not in merged:
                raise ConfigError(f"{required}: required in hunt config")
        merged = {k: v for k, v in merged.items() if k in known}

        grid = merged["param_grid"] or {}
        if not isinstance(grid, dict):
            raise ConfigError("param_grid: must be a mapping of name to list")
        try:
            merged["param_grid"] = {str(k): [float(v) for v in vs] for k, vs in grid.items()}
            for name in ("initial_magnitude", "shrink_factor", "scale", "tolerance", "confirm_tolerance"):
                if name in merged:
                    merged[name] = float(merged[name])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"hunt config: non-numeric value ({e})") from e
        config = cls(**merged)
        config.validate()
        return config

    @classmethod
    def load(cls, path: str, defaults: Optional[Dict[str, Any]] = None) -> "HuntConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f) if Path(path).suffix == ".json" else yaml.safe_load(f)
        except OSError as e:
            raise ConfigError(f"config: cannot read {path}: {e}") from e
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"config: cannot parse {path}: {e}") from e
        return cls.from_dict(data, defaults)


@dataclass
class RestartResult:
    """Outcome of one restart."""
    restart: int
    best_report: InequalityReport
    best_step: int
    trials: int = 0
    violations: int = 0
    proved_violations: int = 0
    history: List[float] = field(default_factory=list)

    @property
    def key(self) -> Tuple[float, int, int]:
        return (self.best_report.relative_slack, self.restart, self.best_step)


def _json_value(value: float):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


class Hunter:
    """
    Runs a HuntConfig against one registry entry.
    """

    def __init__(self, config: HuntConfig, registry: Optional[InequalityRegistry] = None):
        config.validate()
        self.config = config
        self.registry = registry or get_registry()
        self.entry: RegistryEntry = self.registry.get(config.inequality_id)
        self.kind = self.entry.check_compatible(config.ensemble_kind)

        expected = set(self.entry.params)
        given = set(config.param_grid)
        if given != expected:
            missing = sorted(expected - given) or sorted(given - expected)
            raise ConfigError(f"param_grid.{missing[0]}: grid must name exactly {sorted(expected)}")
        self.grid = config.grid_points()

    def _spec(self, restart: int) -> EnsembleSpec:
        cfg = self.config
        return EnsembleSpec(kind=self.kind, dim=cfg.dims[restart % len(cfg.dims)],
                            seed=cfg.seed, scale=cfg.scale, stream=restart)

    def _named(self, inputs: Sequence[np.ndarray]) -> Dict[str, np.ndarray]:
        return dict(zip(self.entry.inputs, inputs))

    def confirm(self, report: InequalityReport) -> bool:
        """
        Re-evaluate a violation on its re-symmetrized witness.

        Confirmed when the replayed slack agrees to ``confirm_tolerance`` and
        is still a violation.
        """
        inputs = read_witness(report.witness, list(report.params))
        if self.kind not in NON_HERMITIAN_KINDS:
            inputs = {k: (v + adjoint(v)) / 2 for k, v in inputs.items()}
        again = self.entry.evaluate(inputs, report.params, self.config.tolerance, self.config.enforce_domain)
        agree = abs(again.relative_slack - report.relative_slack) <= self.config.confirm_tolerance
        return agree and again.violated

    def _count(self, result: RestartResult, inputs: Sequence[np.ndarray]) -> InequalityReport:
        named = self._named(inputs)
        best = None
        for params in self.grid:
            report = self.entry.evaluate(named, params, self.config.tolerance, self.config.enforce_domain)
            result.trials += 1
            if report.violated and self.confirm(report):
                result.violations += 1
                if report.status is Status.PROVED:
                    result.proved_violations += 1
            if best is None or report.relative_slack < best.relative_slack:
                best = report
        return best

    def _annotate(self, report: InequalityReport, spec: EnsembleSpec, step: int) -> InequalityReport:
        report.seed = self.config.seed
        report.witness["ensemble"] = spec.to_dict()
        report.witness["provenance"] = {"seed": self.config.seed, "restart": spec.stream, "step": step}
        return report

    def run_restart(self, restart: int) -> RestartResult:
        """Sample, then accept-only descent."""
        cfg = self.config
        spec = self._spec(restart)
        current = draw_inputs(spec, self.entry.arity)
        rng = substream(cfg.seed, restart, PERTURB_STREAM)

        result = RestartResult(restart=restart, best_report=None, best_step=0)
        best = self._annotate(self._count(result, current), spec, 0)
        result.best_report = best
        result.history.append(best.relative_slack)

        magnitude = cfg.initial_magnitude
        streak = 0
        for step in range(1, cfg.steps_per_restart + 1):
            candidate = perturb(current, spec, magnitude, rng)
            report = self._count(result, candidate)
            if report.relative_slack < best.relative_slack:
                current = candidate
                best = self._annotate(report, spec, step)
                result.best_report = best
                result.best_step = step
                streak = 0
            else:
                streak += 1
                if streak >= cfg.rejection_streak:
                    magnitude *= cfg.shrink_factor
                    streak = 0
            result.history.append(best.relative_slack)
        return result

    def run(self, progress: Optional[ProgressCallback] = None) -> HuntRecord:
        cfg = self.config
        start = time.time()
        logger.info(f"Hunting {cfg.inequality_id}: {cfg.restarts} restarts x {cfg.steps_per_restart} steps, "
                    f"{len(self.grid)} grid points, kind {self.kind.value}, workers {cfg.workers}")

        results: List[RestartResult] = []
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            for i, result in enumerate(executor.map(self.run_restart, range(cfg.restarts))):
                results.append(result)
                if progress:
                    progress(i + 1, cfg.restarts, result)

        winner = min(results, key=lambda r: r.key)
        record = HuntRecord(
            best_report=winner.best_report,
            trials=sum(r.trials for r in results),
            violations=sum(r.violations for r in results),
            proved_violations=sum(r.proved_violations for r in results),
            provenance={"seed": cfg.seed, "restart": winner.restart, "step": winner.best_step},
            wall_time=time.time() - start,
            config=cfg.to_dict(),
        )
        logger.info(f"Hunt finished: min relative slack {winner.best_report.relative_slack:.3e}, "
                    f"{record.violations} confirmed violations in {record.trials} trials")
        return record


def hunt(cfg: HuntConfig, progress: Optional[ProgressCallback] = None,
         registry: Optional[InequalityRegistry] = None) -> HuntRecord:
    """
    Run a counterexample search.

    Raises:
        UnknownInequality: id not in the registry
        IncompatibleEnsemble: kind does not meet the checker's hypotheses
        ConfigError: grid does not match the checker's parameters
    """
    return Hunter(cfg, registry).run(progress)


def replay(record: HuntRecord, registry: Optional[InequalityRegistry] = None) -> InequalityReport:
    """
    Re-evaluate the best witness of a HuntRecord.

    Raises:
        CorruptWitness: witness missing or structurally inconsistent
    """
    registry = registry or get_registry()
    stored = record.best_report
    entry = registry.get(stored.inequality_id)
    inputs = read_witness(stored.witness, list(stored.params))
    enforce = bool(record.config.get("enforce_domain", True))
    report = entry.evaluate(inputs, stored.params, stored.tolerance, enforce)
    for key, value in stored.witness.items():
        report.witness.setdefault(key, value)
    report.seed = stored.seed
    return report


def verify_replay(record: HuntRecord, tolerance: float = REPLAY_TOLERANCE,
                  registry: Optional[InequalityRegistry] = None) -> InequalityReport:
    """
    Replay a HuntRecord and check the stored relative slack is reproduced.

    Raises:
        CorruptWitness: witness missing or structurally inconsistent
        ReplayMismatch: replayed relative slack differs by more than ``tolerance``
    """
    stored = record.best_report
    again = replay(record, registry)
    drift = abs(again.relative_slack - stored.relative_slack)
    if not drift <= tolerance:
        raise ReplayMismatch(f"{stored.inequality_id}: replayed relative slack {again.relative_slack:.6e} "
                             f"differs from stored {stored.relative_slack:.6e} by {drift:.1e} "
                             f"(tolerances.replay = {tolerance:.0e})")
    logger.debug(f"Replay of {stored.inequality_id} reproduced relative slack within {drift:.1e}")
    return again


def load_record(path: str) -> HuntRecord:
    """
    Read a HuntRecord JSON file written by a hunt.

    Raises:
        ConfigError: file missing or not JSON
        CorruptWitness: JSON does not describe a HuntRecord
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"replay: cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"replay: cannot parse {path}: {e}") from e
    try:
        return HuntRecord.from_dict(data)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise CorruptWitness(f"replay: {path} is not a hunt record ({e})") from e
