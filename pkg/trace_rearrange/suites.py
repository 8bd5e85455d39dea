"""
Verification suites - seeded ensemble runs over the proved statements.

Suites are declared in an embedded YAML catalog, in the same way the
registry declares its entries. Each suite holds one or more checks; a check
draws ``samples`` inputs from one ensemble kind and evaluates every point of
its parameter grid on each of them.

Check types:
    inequality      a registry entry, evaluated through its checker
    weyl_monotone   singular values of A dominate those of B when A >= |B|
    layer_cake      reconstruction error and coefficient sum of the decomposition
    integral_rep    quadrature C^p against the spectral C^p
    kp_closed_form  quadrature k_p against sin((p-1) pi) / pi

For the error-based types the reported slack is ``bound - error``, so in
every check a negative slack is a failure.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .ensembles import EnsembleKind, EnsembleSpec, draw_inputs, parse_kind, sample
from .errors import ConfigError
from .integral_rep import DEFAULT_QUADRATURE, QuadratureConfig, kp_closed_form, kp_constant, relative_error_vs_spectral
from .linalg_core import HERMITIAN_TOL, eig_hermitian, frobenius
from .rearrange import layer_cake, weyl_monotone_check
from .records import DEFAULT_TOLERANCE, InequalityReport, Status
from .registry import InequalityRegistry, get_registry

logger = logging.getLogger(__name__)

CHECK_TYPES = ("inequality", "weyl_monotone", "layer_cake", "integral_rep", "kp_closed_form")
OVERRIDABLE_PARAMS = ("p", "r", "s", "t")

LAYER_CAKE_BOUND = 1e-10
INTEGRAL_REP_BOUND = 1e-6
KP_BOUND = 1e-8


@dataclass
class CheckDef:
    """One check inside a suite."""
    name: str
    check_type: str
    kind: Optional[EnsembleKind]
    inequality_id: Optional[str] = None
    params: Dict[str, List[float]] = field(default_factory=dict)
    max_samples: Optional[int] = None
    equality_tol: Optional[float] = None
    overridable: bool = True
    description: str = ""

    def grid_points(self) -> List[Dict[str, float]]:
        names = sorted(self.params)
        return [dict(zip(names, values)) for values in product(*(self.params[n] for n in names))] or [{}]

    def with_overrides(self, overrides: Dict[str, List[float]]) -> "CheckDef":
        if not self.overridable:
            return self
        params = {name: list(overrides.get(name, values)) for name, values in self.params.items()}
        return CheckDef(self.name, self.check_type, self.kind, self.inequality_id, params,
                        self.max_samples, self.equality_tol, self.overridable, self.description)


@dataclass
class SuiteDef:
    """A named group of checks."""
    name: str
    description: str
    checks: List[CheckDef]


@dataclass
class VerifySettings:
    """Effective settings of one verify run."""
    samples: int = 500
    dims: List[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    seed: int = 1
    workers: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    hermitian_tol: float = HERMITIAN_TOL
    scale: float = 1.0
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE
    overrides: Dict[str, List[float]] = field(default_factory=dict)

    def validate(self):
        if self.samples < 1:
            raise ConfigError(f"samples: must be >= 1, got {self.samples}")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ConfigError(f"dims: need positive dimensions, got {self.dims}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if not self.tolerance > 0:
            raise ConfigError(f"tol: must be > 0, got {self.tolerance}")
        unknown = sorted(set(self.overrides) - set(OVERRIDABLE_PARAMS))
        if unknown:
            raise ConfigError(f"{unknown[0]}: not an overridable parameter")
        for name, values in self.overrides.items():
            if not values:
                raise ConfigError(f"{name}: override list is empty")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "samples": self.samples,
            "dims": list(self.dims),
            "seed": self.seed,
            "workers": self.workers,
            "tolerance": self.tolerance,
            "hermitian_tol": self.hermitian_tol,
            "scale": self.scale,
            "quadrature": self.quadrature.to_dict(),
            "overrides": {k: list(v) for k, v in self.overrides.items()},
        }


@dataclass
class Evaluation:
    """One (sample, grid point) outcome, reduced to what the summaries need."""
    params: Dict[str, float]
    slack: float
    violated: bool
    status: Status
    record: Dict[str, Any]


@dataclass
class CheckSummary:
    """Aggregate of one check over all its samples."""
    suite: str
    check: str
    check_type: str
    inequality_id: Optional[str]
    kind: Optional[str]
    params: Dict[str, List[float]]
    samples: int
    evaluations: int = 0
    violations: int = 0
    proved_violations: int = 0
    evidence_violations: int = 0
    equality_failures: int = 0
    min_slack: Optional[float] = None
    max_abs_slack: float = 0.0
    statuses: Dict[str, int] = field(default_factory=dict)
    worst: Optional[Dict[str, Any]] = None

    def add(self, evaluation: Evaluation, equality_tol: Optional[float]) -> None:
        self.evaluations += 1
        status = evaluation.status.value
        self.statuses[status] = self.statuses.get(status, 0) + 1
        self.max_abs_slack = max(self.max_abs_slack, abs(evaluation.slack))

        failed = evaluation.violated
        if equality_tol is not None and abs(evaluation.slack) > equality_tol:
            self.equality_failures += 1
            failed = True
        if failed:
            self.violations += 1
            if evaluation.status is Status.CONJECTURE:
                self.evidence_violations += 1
            else:
                self.proved_violations += 1

        if self.min_slack is None or evaluation.slack < self.min_slack:
            self.min_slack = evaluation.slack
            self.worst = {"params": evaluation.params, **evaluation.record}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "check",
            "suite": self.suite,
            "check": self.check,
            "check_type": self.check_type,
            "inequality_id": self.inequality_id,
            "kind": self.kind,
            "params": self.params,
            "samples": self.samples,
            "evaluations": self.evaluations,
            "violations": self.violations,
            "proved_violations": self.proved_violations,
            "evidence_violations": self.evidence_violations,
            "equality_failures": self.equality_failures,
            "min_slack": self.min_slack,
            "max_abs_slack": self.max_abs_slack,
            "statuses": dict(sorted(self.statuses.items())),
            "worst": self.worst,
        }


@dataclass
class SuiteResult:
    """All check summaries of one suite."""
    name: str
    description: str
    checks: List[CheckSummary] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(c.violations for c in self.checks)

    @property
    def proved_violations(self) -> int:
        return sum(c.proved_violations for c in self.checks)

    @property
    def min_slack(self) -> Optional[float]:
        values = [c.min_slack for c in self.checks if c.min_slack is not None]
        return min(values) if values else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "suite",
            "suite": self.name,
            "description": self.description,
            "checks": [c.check for c in self.checks],
            "violations": self.violations,
            "proved_violations": self.proved_violations,
            "min_slack": self.min_slack,
        }


def run_exit_code(results: Sequence[SuiteResult]) -> int:
    """2 when any proved statement failed, else 0."""
    return 2 if any(r.proved_violations for r in results) else 0


def summary_record(results: Sequence[SuiteResult], settings: VerifySettings) -> Dict[str, Any]:
    return {
        "type": "summary",
        "suites": [r.name for r in results],
        "violations": sum(r.violations for r in results),
        "proved_violations": sum(r.proved_violations for r in results),
        "min_slack": {r.name: r.min_slack for r in results},
        "exit_code": run_exit_code(results),
        "settings": settings.to_dict(),
    }


class SuiteCatalog:
    """
    Catalog of verification suites.
    Loaded from YAML; suite order in the document fixes the seeding.
    """

    DEFAULT_SUITES = """
version: "1.0"
suites:
  - name: "theorem1"
    description: "Hanner-type inequality for ordered pairs A >= B >= 0, 1 <= p <= 2"
    checks:
      - name: "ordered-pairs"
        type: "inequality"
        inequality_id: "conjecture1"
        kind: "ordered_pair"
        params: {p: [1.0, 1.1, 1.25, 1.5, 1.75, 1.9, 2.0]}
      - name: "even-p-reverse"
        description: "reverse orientation for even integer p, unrestricted pairs"
        type: "inequality"
        inequality_id: "conjecture1"
        kind: "general_complex"
        params: {p: [4.0, 6.0]}
        overridable: false

  - name: "theorem2"
    description: "Second Hanner-type inequality for dominated pairs A >= |B|, 1 <= p <= 2"
    checks:
      - name: "dominated-pairs"
        type: "inequality"
        inequality_id: "conjecture2"
        kind: "dominated_pair"
        params: {p: [1.0, 1.1, 1.25, 1.5, 1.75, 1.9, 2.0]}

  - name: "updown1"
    description: "Tr(B^r (B^1/2 A B^1/2)^s) >= Tr(Sigma_up(A)^s Sigma_down(B)^(s+r)), opposite-order spectra"
    checks:
      - name: "psd-pairs"
        type: "inequality"
        inequality_id: "updown1"
        kind: "psd"
        params: {r: [0.0, 0.5, 1.0, 2.0], s: [1.0, 1.5, 2.0, 3.5]}
      - name: "layer-cake"
        type: "layer_cake"
        kind: "psd"
        max_samples: 100
      - name: "layer-cake-degenerate"
        type: "layer_cake"
        kind: "degenerate_psd"
        max_samples: 100

  - name: "updown2"
    description: "Tr(B^r (B^1/2 A B^1/2)^s) <= Tr(Sigma_up(A)^s Sigma_up(B)^(s+r)), same-order spectra, integer s"
    checks:
      - name: "psd-pairs"
        type: "inequality"
        inequality_id: "updown2"
        kind: "psd"
        params: {r: [0.0, 0.5, 1.0, 2.0], s: [1.0, 2.0, 3.0]}

  - name: "lemma-otherway"
    description: "Reverse Hanner bound for A >= |B|, 1 <= p <= 2"
    checks:
      - name: "dominated-pairs"
        type: "inequality"
        inequality_id: "lemma_otherway"
        kind: "dominated_pair"
        params: {p: [1.0, 1.5, 2.0]}
      - name: "p2-collapse"
        description: "equality at p = 2"
        type: "inequality"
        inequality_id: "lemma_otherway"
        kind: "dominated_pair"
        params: {p: [2.0]}
        equality_tol: 1.0e-8
        overridable: false

  - name: "monotone"
    description: "Singular values are monotone under A >= |B|"
    checks:
      - name: "dominated-pairs"
        type: "weyl_monotone"
        kind: "dominated_pair"

  - name: "lieb-thirring"
    description: "Lieb-Thirring trace inequality and concavity of the Epstein function"
    checks:
      - name: "psd-pairs"
        type: "inequality"
        inequality_id: "lieb_thirring"
        kind: "psd"
        params: {s: [1.0, 1.5, 2.0, 3.0]}
      - name: "epstein-concavity"
        type: "inequality"
        inequality_id: "epstein_probe"
        kind: "psd"
        params: {s: [1.0, 1.5, 2.0], lambda: [0.25, 0.5, 0.75]}
        max_samples: 200
        overridable: false

  - name: "reverse-half"
    description: "Reverse Lieb-Thirring at s = 1/2 and convexity of f_1/2"
    checks:
      - name: "psd-pairs"
        type: "inequality"
        inequality_id: "reverse_lt_half"
        kind: "psd"
      - name: "epstein-convexity"
        type: "inequality"
        inequality_id: "epstein_probe"
        kind: "psd"
        params: {s: [0.5], lambda: [0.25, 0.5, 0.75]}
        max_samples: 200
        overridable: false

  - name: "integral-rep"
    description: "Quadrature of the integral representation of C^p, 1 < p < 2"
    checks:
      - name: "positive-definite"
        type: "integral_rep"
        kind: "positive_definite"
        params: {p: [1.25, 1.5, 1.75]}
        max_samples: 50
      - name: "kp-closed-form"
        type: "kp_closed_form"
        kind: null
        params: {p: [1.25, 1.5, 1.75]}
        max_samples: 1

  - name: "resolvent"
    description: "Tr((t+A+B)^-1 + (t+A-B)^-1) >= the same trace with A, B replaced by Sigma_up(A), Sigma_up(B), for A >= B >= 0"
    checks:
      - name: "ordered-pairs"
        type: "inequality"
        inequality_id: "resolvent_suffice"
        kind: "ordered_pair"
        params: {t: [0.1, 1.0, 10.0]}

  - name: "hanner-matrix"
    description: "Matrix Hanner inequality in its known regions"
    checks:
      - name: "unrestricted"
        type: "inequality"
        inequality_id: "hanner_matrix"
        kind: "general_complex"
        params: {p: [1.0, 1.25, 1.3333333333333333, 4.0, 6.0]}
      - name: "psd-sum"
        type: "inequality"
        inequality_id: "hanner_matrix"
        kind: "psd_sum_pair"
        params: {p: [1.0, 1.5, 2.0]}
      - name: "p2-collapse"
        description: "parallelogram identity at p = 2"
        type: "inequality"
        inequality_id: "hanner_matrix"
        kind: "general_complex"
        params: {p: [2.0]}
        equality_tol: 1.0e-10
        overridable: false

  - name: "chiti-tartar"
    description: "||A - B||_p >= ||Sigma_down(A) - Sigma_down(B)||_p, same-order singular values"
    checks:
      - name: "unrestricted"
        type: "inequality"
        inequality_id: "chiti_tartar_matrix"
        kind: "general_complex"
        params: {p: [1.0, 2.0, .inf]}
"""

    def __init__(self, suites_yaml: Optional[str] = None):
        self.suites: Dict[str, SuiteDef] = {}
        self._load(suites_yaml or self.DEFAULT_SUITES)

    def _load(self, document: str):
        data = yaml.safe_load(document)
        for raw in data.get("suites", []):
            suite = SuiteDef(
                name=raw["name"],
                description=raw.get("description", ""),
                checks=[self._parse_check(raw["name"], c) for c in raw["checks"]],
            )
            self.suites[suite.name] = suite
        logger.debug(f"Loaded {len(self.suites)} verification suites")

    def _parse_check(self, suite: str, raw: Dict[str, Any]) -> CheckDef:
        check_type = raw["type"]
        if check_type not in CHECK_TYPES:
            raise ConfigError(f"{suite}.{raw.get('name')}.type: unknown check type {check_type!r}")
        kind = raw.get("kind")
        return CheckDef(
            name=raw["name"],
            check_type=check_type,
            kind=parse_kind(kind) if kind else None,
            inequality_id=raw.get("inequality_id"),
            params={k: [float(v) for v in values] for k, values in (raw.get("params") or {}).items()},
            max_samples=raw.get("max_samples"),
            equality_tol=float(raw["equality_tol"]) if raw.get("equality_tol") is not None else None,
            overridable=bool(raw.get("overridable", True)),
            description=raw.get("description", ""),
        )

    def names(self) -> List[str]:
        return list(self.suites)

    def index(self, name: str) -> int:
        return self.names().index(self.get(name).name)

    def get(self, name: str) -> SuiteDef:
        try:
            return self.suites[name]
        except KeyError:
            raise ConfigError(f"suite: unknown suite {name!r} (choose from all, {', '.join(self.suites)})") from None

    def resolve(self, name: str) -> List[SuiteDef]:
        """Suite list for a CLI argument; ``all`` expands to the whole catalog."""
        if name == "all":
            return list(self.suites.values())
        return [self.get(name)]


# Global catalog instance
_catalog_instance: Optional[SuiteCatalog] = None


def get_suite_catalog() -> SuiteCatalog:
    """Get the global suite catalog."""
    global _catalog_instance
    if _catalog_instance is None:
        _catalog_instance = SuiteCatalog()
    return _catalog_instance


def _check_seed(seed: int, suite_index: int, check_index: int) -> int:
    """64-bit seed for one check, independent of which other suites run."""
    state = np.random.SeedSequence([seed, suite_index, check_index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _from_report(report: InequalityReport) -> Evaluation:
    return Evaluation(params=dict(report.params), slack=report.relative_slack,
                      violated=report.violated, status=report.status, record=report.to_dict())


def _from_error(params: Dict[str, float], error: float, bound: float, detail: Dict[str, Any]) -> Evaluation:
    return Evaluation(params=dict(params), slack=bound - error, violated=error > bound,
                      status=Status.PROVED, record={"error": error, "bound": bound, **detail})


class _CheckRun:
    """Binds one check to its seed and evaluates single samples."""

    def __init__(self, suite_index: int, check_index: int, check: CheckDef,
                 settings: VerifySettings, registry: InequalityRegistry):
        self.check = check
        self.settings = settings
        self.seed = _check_seed(settings.seed, suite_index, check_index)
        self.grid = check.grid_points()
        self.entry = None
        if check.check_type == "inequality":
            self.entry = registry.get(check.inequality_id)
            self.entry.check_compatible(check.kind)
            expected = set(self.entry.params)
            if set(check.params) != expected:
                raise ConfigError(f"{check.name}.params: grid must name exactly {sorted(expected)}")
        self.samples = settings.samples if check.max_samples is None else min(settings.samples, check.max_samples)
        self._evaluate: Callable[[int], List[Evaluation]] = getattr(self, f"_eval_{check.check_type}")

    def spec(self, index: int) -> EnsembleSpec:
        dims = self.settings.dims
        return EnsembleSpec(kind=self.check.kind, dim=dims[index % len(dims)], seed=self.seed,
                            scale=self.settings.scale, stream=index)

    def __call__(self, index: int) -> List[Evaluation]:
        return self._evaluate(index)

    def _eval_inequality(self, index: int) -> List[Evaluation]:
        spec = self.spec(index)
        named = dict(zip(self.entry.inputs, draw_inputs(spec, self.entry.arity)))
        out = []
        for params in self.grid:
            report = self.entry.evaluate(named, params, self.settings.tolerance)
            report.seed = self.settings.seed
            report.witness["ensemble"] = spec.to_dict()
            out.append(_from_report(report))
        return out

    def _eval_weyl_monotone(self, index: int) -> List[Evaluation]:
        spec = self.spec(index)
        A, B = draw_inputs(spec, 2)
        report = weyl_monotone_check(A, B, self.settings.tolerance, self.settings.hermitian_tol)
        report.seed = self.settings.seed
        report.witness["ensemble"] = spec.to_dict()
        return [_from_report(report)]

    def _eval_layer_cake(self, index: int) -> List[Evaluation]:
        spec = self.spec(index)
        (C,) = sample(spec)
        cake = layer_cake(C)
        scale = max(frobenius(C), 1.0)
        reconstruction = frobenius(cake.reconstruct() - C) / scale
        lam_max = float(eig_hermitian(C).eigenvalues[0])
        weight = abs(cake.total_weight - lam_max) / max(lam_max, 1.0)
        error = max(reconstruction, weight)
        return [_from_error({}, error, LAYER_CAKE_BOUND,
                            {"reconstruction_error": reconstruction, "weight_error": weight,
                             "ensemble": spec.to_dict()})]

    def _eval_integral_rep(self, index: int) -> List[Evaluation]:
        spec = self.spec(index)
        (C,) = sample(spec)
        return [
            _from_error(params, relative_error_vs_spectral(C, params["p"], self.settings.quadrature),
                        INTEGRAL_REP_BOUND, {"ensemble": spec.to_dict()})
            for params in self.grid
        ]

    def _eval_kp_closed_form(self, index: int) -> List[Evaluation]:
        out = []
        for params in self.grid:
            p = params["p"]
            kp = kp_constant(p, self.settings.quadrature)
            closed = kp_closed_form(p)
            out.append(_from_error(params, abs(kp - closed), KP_BOUND, {"kp": kp, "closed_form": closed}))
        return out


class SuiteRunner:
    """
    Runs suites with a worker pool.
    Samples are dispatched in order and merged in order, so the summaries
    do not depend on the worker count.
    """

    def __init__(self, settings: VerifySettings, registry: Optional[InequalityRegistry] = None,
                 catalog: Optional[SuiteCatalog] = None):
        settings.validate()
        self.settings = settings
        self.registry = registry or get_registry()
        self.catalog = catalog or get_suite_catalog()

    def _runs(self, suite: SuiteDef) -> List[Tuple[CheckDef, _CheckRun]]:
        suite_index = self.catalog.index(suite.name)
        runs = []
        for check_index, check in enumerate(suite.checks):
            effective = check.with_overrides(self.settings.overrides)
            runs.append((effective, _CheckRun(suite_index, check_index, effective, self.settings, self.registry)))
        return runs

    def preflight(self, suites: Sequence[SuiteDef]) -> None:
        """
        Evaluate the first sample of every check.

        Parameter values outside a checker's domain (e.g. a non-integer s
        for updown2) raise here, before any results file is opened.
        """
        for suite in suites:
            for _, run in self._runs(suite):
                run(0)

    def run_check(self, suite: SuiteDef, check: CheckDef, run: _CheckRun,
                  executor: ThreadPoolExecutor) -> CheckSummary:
        summary = CheckSummary(
            suite=suite.name,
            check=check.name,
            check_type=check.check_type,
            inequality_id=check.inequality_id,
            kind=check.kind.value if check.kind else None,
            params={k: list(v) for k, v in check.params.items()},
            samples=run.samples,
        )
        for evaluations in executor.map(run, range(run.samples)):
            for evaluation in evaluations:
                summary.add(evaluation, check.equality_tol)
        logger.info(f"{suite.name}/{check.name}: {summary.evaluations} evaluations, "
                    f"min slack {summary.min_slack:.3e}, {summary.violations} violations")
        return summary

    def run(self, suites: Sequence[SuiteDef],
            on_check: Optional[Callable[[CheckSummary], None]] = None) -> List[SuiteResult]:
        results = []
        with ThreadPoolExecutor(max_workers=self.settings.workers) as executor:
            for suite in suites:
                result = SuiteResult(name=suite.name, description=suite.description)
                for check, run in self._runs(suite):
                    summary = self.run_check(suite, check, run, executor)
                    result.checks.append(summary)
                    if on_check:
                        on_check(summary)
                results.append(result)
                if result.proved_violations:
                    logger.error(f"Suite {suite.name}: {result.proved_violations} violations of proved statements")
        return results
