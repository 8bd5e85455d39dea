"""
Inequality registry - YAML metadata bound to the checker functions.

Each entry names the checker's matrix/vector inputs and scalar parameters,
the orientation convention, the parameter domains, the mathematical status
and the ensemble kinds that satisfy its hypotheses.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional

import numpy as np
import yaml

from .ensembles import EnsembleKind, parse_kind
from .errors import BadSpec, IncompatibleEnsemble, UnknownInequality
from .inequalities import CHECKERS
from .records import DEFAULT_TOLERANCE, InequalityReport

logger = logging.getLogger(__name__)

# Parameter names that differ from the checker's keyword.
PARAM_KEYWORDS = {"lambda": "lam"}


@dataclass
class RegistryEntry:
    """One registered inequality."""
    inequality_id: str
    statement_ref: str
    orientation: str
    param_domains: Dict[str, str]
    status: str
    inputs: List[str]
    params: List[str]
    compatible_kinds: List[EnsembleKind]
    domain_override: bool = False
    checker: Optional[Callable[..., InequalityReport]] = field(default=None, repr=False)

    @property
    def evidence_only(self) -> bool:
        return self.status == "conjecture"

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequality_id": self.inequality_id,
            "statement_ref": self.statement_ref,
            "orientation": self.orientation,
            "param_domains": dict(self.param_domains),
            "status": self.status,
            "inputs": list(self.inputs),
            "params": list(self.params),
            "compatible_kinds": [k.value for k in self.compatible_kinds],
        }

    def check_compatible(self, kind) -> EnsembleKind:
        kind = parse_kind(kind)
        if kind not in self.compatible_kinds:
            raise IncompatibleEnsemble(
                f"ensemble_kind: {kind.value} does not satisfy the hypotheses of {self.inequality_id} "
                f"(allowed: {', '.join(k.value for k in self.compatible_kinds)})"
            )
        return kind

    def evaluate(self, inputs: Mapping[str, np.ndarray], params: Mapping[str, float],
                 tol: float = DEFAULT_TOLERANCE, enforce_domain: bool = True) -> InequalityReport:
        """
        Run the checker on named inputs and parameters.

        Raises:
            BadSpec: missing input or parameter
            ValidationError subclasses from the checker
        """
        kwargs: Dict[str, Any] = {}
        for name in self.inputs:
            if name not in inputs:
                raise BadSpec(f"{name}: input required by {self.inequality_id}")
            kwargs[name] = inputs[name]
        for name in self.params:
            if name not in params:
                raise BadSpec(f"{name}: parameter required by {self.inequality_id}")
            kwargs[PARAM_KEYWORDS.get(name, name)] = params[name]
        if self.domain_override and not enforce_domain:
            kwargs["check_domain"] = False
        return self.checker(tol=tol, **kwargs)


class InequalityRegistry:
    """
    Registry of inequality checkers keyed by stable id.
    Metadata is loaded from YAML and bound to the functions in ``inequalities``.
    """

    DEFAULT_REGISTRY = """
# Inequality registry
# orientation: required relation, slack >= 0 means holds
# status: proved | conjecture | known_region (proved on part of the domain)

version: "1.0"
inequalities:
  - inequality_id: "hanner_vector"
    statement_ref: "||f+g||_p^p + ||f-g||_p^p >= (||f||_p + ||g||_p)^p + | ||f||_p - ||g||_p |^p for 1 <= p <= 2, reversed for p > 2; Hanner inequality in l^p"
    orientation: "lhs>=rhs for 1<=p<=2; lhs<=rhs for p>2"
    param_domains: {p: "[1, inf)"}
    status: "proved"
    inputs: ["f", "g"]
    params: ["p"]
    compatible_kinds: ["complex_vector"]

  - inequality_id: "rearrangement_vector"
    statement_ref: "||f+g||_p^p + ||f-g||_p^p >= ||f*+g*||_p^p + ||f*-g*||_p^p for 1 <= p <= 2, reversed for p > 2; f*, g* nonincreasing rearrangements of |f|, |g|"
    orientation: "lhs>=rhs for 1<=p<=2; lhs<=rhs for p>2"
    param_domains: {p: "[1, inf)"}
    status: "proved"
    inputs: ["f", "g"]
    params: ["p"]
    compatible_kinds: ["complex_vector"]

  - inequality_id: "parallelogram_bound_vector"
    statement_ref: "||f+g||_p^p + ||f-g||_p^p <= 2||f||_p^p + 2||g||_p^p for 1 <= p <= 2, reversed for p > 2"
    orientation: "lhs<=rhs for 1<=p<=2; lhs>=rhs for p>2"
    param_domains: {p: "[1, inf)"}
    status: "proved"
    inputs: ["f", "g"]
    params: ["p"]
    compatible_kinds: ["complex_vector"]

  - inequality_id: "hanner_matrix"
    statement_ref: "||A+B||_p^p + ||A-B||_p^p >= (||A||_p + ||B||_p)^p + | ||A||_p - ||B||_p |^p for 1 <= p <= 2, reversed for p > 2; Schatten Hanner inequality, proved for p in [1, 4/3], p = 2, p >= 4, and for A+-B PSD with p <= 2"
    orientation: "lhs>=rhs for 1<=p<=2; lhs<=rhs for p>2"
    param_domains: {p: "[1, inf]"}
    status: "known_region"
    inputs: ["A", "B"]
    params: ["p"]
    compatible_kinds: ["general_complex", "hermitian", "psd", "positive_definite", "degenerate_psd",
                       "diagonal_psd", "unitary", "ordered_pair", "dominated_pair", "psd_sum_pair"]

  - inequality_id: "conjecture1"
    statement_ref: "||A+B||_p^p + ||A-B||_p^p >= ||Sigma_up(A)+Sigma_up(B)||_p^p + ||Sigma_up(A)-Sigma_up(B)||_p^p for 1 <= p <= 2, reversed for p > 2; proved for A >= B >= 0 with p <= 2 and reversed for even integer p"
    orientation: "lhs>=rhs for 1<=p<=2; lhs<=rhs for p>2"
    param_domains: {p: "[1, inf)"}
    status: "conjecture"
    inputs: ["A", "B"]
    params: ["p"]
    compatible_kinds: ["general_complex", "hermitian", "psd", "positive_definite", "degenerate_psd",
                       "diagonal_psd", "unitary", "ordered_pair", "dominated_pair", "psd_sum_pair"]

  - inequality_id: "conjecture2"
    statement_ref: "||A+B||_p^p + ||A-B||_p^p <= ||Sigma_up(A)+Sigma_down(B)||_p^p + ||Sigma_up(A)-Sigma_down(B)||_p^p for 1 <= p <= 2, reversed for p > 2; proved for A >= |B| with p <= 2"
    orientation: "lhs<=rhs for 1<=p<=2; lhs>=rhs for p>2"
    param_domains: {p: "[1, inf)"}
    status: "conjecture"
    inputs: ["A", "B"]
    params: ["p"]
    compatible_kinds: ["general_complex", "hermitian", "psd", "positive_definite", "degenerate_psd",
                       "diagonal_psd", "unitary", "ordered_pair", "dominated_pair", "psd_sum_pair"]

  - inequality_id: "lemma_otherway"
    statement_ref: "Tr((A+B)^p + (A-B)^p) <= Tr((A+|B|)^p + (A-|B|)^p) for Hermitian A >= |B|, 1 <= p <= 2"
    orientation: "lhs<=rhs"
    param_domains: {p: "[1, 2]"}
    status: "proved"
    inputs: ["A", "B"]
    params: ["p"]
    compatible_kinds: ["dominated_pair", "ordered_pair"]

  - inequality_id: "updown1"
    statement_ref: "Tr(B^r (B^1/2 A B^1/2)^s) >= Tr(Sigma_up(A)^s Sigma_down(B)^(s+r)) for PSD A, B, r >= 0, s >= 1"
    orientation: "lhs>=rhs"
    param_domains: {r: "[0, inf)", s: "[1, inf)"}
    status: "proved"
    inputs: ["A", "B"]
    params: ["r", "s"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]

  - inequality_id: "updown2"
    statement_ref: "Tr(Sigma_up(A)^s Sigma_up(B)^(s+r)) >= Tr(B^r (B^1/2 A B^1/2)^s) for PSD A, B, r >= 0, integer s >= 1"
    orientation: "lhs>=rhs"
    param_domains: {r: "[0, inf)", s: "integers >= 1"}
    status: "proved"
    inputs: ["A", "B"]
    params: ["r", "s"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]

  - inequality_id: "lieb_thirring"
    statement_ref: "Tr(X^s Y^s) >= Tr((Y^1/2 X Y^1/2)^s) for PSD X, Y, s >= 1; Lieb-Thirring inequality"
    orientation: "lhs>=rhs"
    param_domains: {s: "[1, inf)"}
    status: "proved"
    inputs: ["X", "Y"]
    params: ["s"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]

  - inequality_id: "reverse_lt_half"
    statement_ref: "Tr((B^1/2 A B^1/2)^1/2) >= Tr(A^1/2 B^1/2) for PSD A, B"
    orientation: "lhs>=rhs"
    param_domains: {}
    status: "proved"
    inputs: ["A", "B"]
    params: []
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]

  - inequality_id: "rev_probe"
    statement_ref: "Tr((B^1/2 A B^1/2)^s) >= Tr(A^s B^s) for PSD A, B, 1/2 < s < 1 (conjectured)"
    orientation: "lhs>=rhs"
    param_domains: {s: "(1/2, 1)"}
    status: "conjecture"
    inputs: ["A", "B"]
    params: ["s"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]
    domain_override: true

  - inequality_id: "liebth2_probe"
    statement_ref: "Tr(X^s Y^(s+r)) >= Tr(Y^r (Y^1/2 X Y^1/2)^s) for PSD X, Y, r > 0, s >= 1 (conjectured)"
    orientation: "lhs>=rhs"
    param_domains: {r: "(0, inf)", s: "[1, inf)"}
    status: "conjecture"
    inputs: ["X", "Y"]
    params: ["r", "s"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd", "ordered_pair"]

  - inequality_id: "epstein_probe"
    statement_ref: "f_s(A) = Tr((B^1/2 A^(1/s) B^1/2)^s): f_s(lambda A1 + (1-lambda) A2) >= lambda f_s(A1) + (1-lambda) f_s(A2) for s >= 1, reversed for 1/2 <= s < 1 (proved at s = 1/2)"
    orientation: "lhs>=rhs for s>=1; lhs<=rhs for 1/2<=s<1"
    param_domains: {s: "[1/2, inf)", lambda: "[0, 1]"}
    status: "known_region"
    inputs: ["B", "A1", "A2"]
    params: ["s", "lambda"]
    compatible_kinds: ["psd", "positive_definite", "degenerate_psd", "diagonal_psd"]

  - inequality_id: "chiti_tartar_matrix"
    statement_ref: "||A - B||_p >= ||Sigma_down(A) - Sigma_down(B)||_p for 1 <= p <= inf"
    orientation: "lhs>=rhs"
    param_domains: {p: "[1, inf]"}
    status: "proved"
    inputs: ["A", "B"]
    params: ["p"]
    compatible_kinds: ["general_complex", "hermitian", "psd", "positive_definite", "degenerate_psd",
                       "diagonal_psd", "unitary", "ordered_pair", "dominated_pair", "psd_sum_pair"]

  - inequality_id: "resolvent_suffice"
    statement_ref: "Tr((t+A+B)^-1 + (t+A-B)^-1) >= Tr((t+Sigma_up(A)+Sigma_up(B))^-1 + (t+Sigma_up(A)-Sigma_up(B))^-1) for A >= B >= 0, t > 0"
    orientation: "lhs>=rhs"
    param_domains: {t: "(0, inf)"}
    status: "proved"
    inputs: ["A", "B"]
    params: ["t"]
    compatible_kinds: ["ordered_pair"]
"""

    def __init__(self, registry_yaml: Optional[str] = None):
        """
        Initialize the registry.

        Args:
            registry_yaml: YAML document to load instead of the built-in one
        """
        self.entries: Dict[str, RegistryEntry] = {}
        self._load(registry_yaml or self.DEFAULT_REGISTRY)

    def _load(self, document: str):
        data = yaml.safe_load(document)
        for raw in data.get("inequalities", []):
            entry = self._parse_entry(raw)
            self.entries[entry.inequality_id] = entry
        logger.debug(f"Loaded {len(self.entries)} registry entries")

    def _parse_entry(self, raw: Dict[str, Any]) -> RegistryEntry:
        inequality_id = raw["inequality_id"]
        checker = CHECKERS.get(inequality_id)
        if checker is None:
            raise UnknownInequality(f"inequality_id: no checker bound to {inequality_id!r}")
        return RegistryEntry(
            inequality_id=inequality_id,
            statement_ref=raw["statement_ref"],
            orientation=raw["orientation"],
            param_domains={k: str(v) for k, v in (raw.get("param_domains") or {}).items()},
            status=raw["status"],
            inputs=list(raw["inputs"]),
            params=list(raw.get("params") or []),
            compatible_kinds=[parse_kind(k) for k in raw["compatible_kinds"]],
            domain_override=bool(raw.get("domain_override", False)),
            checker=checker,
        )

    def ids(self) -> List[str]:
        return list(self.entries)

    def get(self, inequality_id: str) -> RegistryEntry:
        try:
            return self.entries[inequality_id]
        except KeyError:
            raise UnknownInequality(f"inequality_id: {inequality_id!r} is not registered") from None

    def export(self) -> List[Dict[str, Any]]:
        """Registry as a JSON-ready list."""
        return [entry.to_dict() for entry in self.entries.values()]

    def to_json(self, inequality_id: Optional[str] = None) -> str:
        if inequality_id is not None:
            return json.dumps(self.get(inequality_id).to_dict(), indent=2)
        return json.dumps(self.export(), indent=2)


# Global registry instance
_registry_instance: Optional[InequalityRegistry] = None


def get_registry() -> InequalityRegistry:
    """Get the global registry instance."""
    global _registry_instance
    if _registry_instance is None:
        _registry_instance = InequalityRegistry()
    return _registry_instance
