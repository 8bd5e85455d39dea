"""
Integral representation of C^p for 1 < p < 2.

    C^p = k_p * integral_0^inf (C/t^2 - I/t + (t+C)^-1) t^p dt

The bracket simplifies to C^2 (t+C)^-1 t^(p-2), which is evaluated instead
of the three-term form (no cancellation between large terms near t = 0).
After t = e^u the integrand decays exponentially at both ends; [u_min, u_max]
is covered by composite Gauss-Legendre panels and the two tails are added in
closed form:

    left   (t < T0):  C   T0^(p-1) / (p-1)
    right  (t > T1):  C^2 T1^(p-2) / (2-p)

The first neglected tail terms, of relative size T0/lambda_min and
lambda_max/T1, are the truncation estimate.

k_p comes from the same quadrature applied at c = 1, never from a closed
form; ``kp_closed_form`` exists for cross-checks only.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .errors import BadExponent, ConfigError, DomainError, SingularMatrix, TruncationError
from .linalg_core import as_matrix, eig_hermitian, frobenius, hermitian_part, matrix_power, psd

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre rule on the substituted axis u = log t."""
    panels: int = 256
    order: int = 8
    u_min: float = -40.0
    u_max: float = 40.0
    target_rel_error: float = 1e-8

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not isinstance(self.panels, (int, np.integer)) or self.panels < 4:
            raise ConfigError(f"quadrature.panels: must be an integer >= 4, got {self.panels!r}")
        if not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ConfigError(f"quadrature.order: must be a positive integer, got {self.order!r}")
        if not (math.isfinite(self.u_min) and math.isfinite(self.u_max)) or self.u_min >= self.u_max:
            raise ConfigError(f"quadrature.u_min/u_max: need u_min < u_max, got [{self.u_min}, {self.u_max}]")
        if not self.target_rel_error > 0:
            raise ConfigError(f"quadrature.target_rel_error: must be > 0, got {self.target_rel_error}")

    @property
    def t_min(self) -> float:
        return math.exp(self.u_min)

    @property
    def t_max(self) -> float:
        return math.exp(self.u_max)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


DEFAULT_QUADRATURE = QuadratureConfig()


def nodes_and_weights(cfg: QuadratureConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Composite rule on [u_min, u_max]; nodes in increasing order."""
    x, w = np.polynomial.legendre.leggauss(cfg.order)
    edges = np.linspace(cfg.u_min, cfg.u_max, cfg.panels + 1)
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _check_p(p) -> float:
    try:
        p = float(p)
    except (TypeError, ValueError) as e:
        raise BadExponent(f"p: not a number ({p!r})") from e
    if not 1.0 < p < 2.0:
        raise BadExponent(f"p: must lie strictly inside (1, 2), got {p}")
    return p


def _check_tails(lam_min: float, lam_max: float, cfg: QuadratureConfig):
    if cfg.t_min >= lam_min:
        raise TruncationError(f"quadrature.u_min: exp(u_min) = {cfg.t_min:.3e} is not below lambda_min = {lam_min:.3e}")
    if cfg.t_max <= lam_max:
        raise TruncationError(f"quadrature.u_max: exp(u_max) = {cfg.t_max:.3e} is not above lambda_max = {lam_max:.3e}")


def _tail_weights(p: float, cfg: QuadratureConfig) -> Tuple[float, float]:
    """Coefficients of C (left tail) and C^2 (right tail)."""
    return cfg.t_min ** (p - 1.0) / (p - 1.0), cfg.t_max ** (p - 2.0) / (2.0 - p)


def _truncation_estimate(left: float, right: float, lam_min: float, lam_max: float,
                         cfg: QuadratureConfig) -> float:
    return (cfg.t_min / lam_min) * left + (lam_max / cfg.t_max) * right


def _scalar_integral(c: float, p: float, cfg: QuadratureConfig) -> float:
    """integral_0^inf c^2 t^(p-2) / (t + c) dt, with tails."""
    _check_tails(c, c, cfg)
    u, w = nodes_and_weights(cfg)
    t = np.exp(u)
    body = float(np.sum(w * np.exp((p - 1.0) * u) / (t + c))) * c * c
    left_w, right_w = _tail_weights(p, cfg)
    left, right = c * left_w, c * c * right_w
    total = body + left + right

    estimate = _truncation_estimate(left, right, c, c, cfg)
    if estimate > cfg.target_rel_error * abs(total):
        raise TruncationError(f"quadrature: estimated tail error {estimate:.3e} exceeds target "
                              f"{cfg.target_rel_error:.1e} relative")
    return total


def kp_constant(p: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """
    Normalization constant k_p, by quadrature of the c = 1 integrand.

    Raises:
        BadExponent: p not strictly inside (1, 2)
        TruncationError
    """
    p = _check_p(p)
    cfg = cfg or DEFAULT_QUADRATURE
    return 1.0 / _scalar_integral(1.0, p, cfg)


def kp_closed_form(p: float) -> float:
    """sin((p-1) pi) / pi; cross-check only."""
    p = _check_p(p)
    return math.sin((p - 1.0) * math.pi) / math.pi


def scalar_power_via_integral(c: float, p: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """c^p from the scalar form of the representation."""
    p = _check_p(p)
    cfg = cfg or DEFAULT_QUADRATURE
    c = float(c)
    if not c > 0 or not math.isfinite(c):
        raise DomainError(f"c: must be positive and finite, got {c}")
    return kp_constant(p, cfg) * _scalar_integral(c, p, cfg)


def matrix_power_via_integral(C, p: float, cfg: Optional[QuadratureConfig] = None):
    """
    C^p for positive definite C by quadrature of the integral representation.

    Args:
        C: Positive definite Hermitian matrix (array or PsdMatrix)
        p: Exponent strictly inside (1, 2)
        cfg: Quadrature configuration (defaults to 256 panels of order 8 on [-40, 40])

    Returns:
        Hermitian complex128 matrix

    Raises:
        SingularMatrix: lambda_min <= 0
        TruncationError: tails not negligible at the configured truncation
        BadExponent
    """
    p = _check_p(p)
    cfg = cfg or DEFAULT_QUADRATURE
    C = getattr(C, "matrix", C)
    C = hermitian_part(as_matrix(C, "C"), name="C")
    spectrum = eig_hermitian(C)
    lam_max = float(spectrum.eigenvalues[0])
    lam_min = float(spectrum.eigenvalues[-1])
    if lam_min <= 0:
        raise SingularMatrix(f"C: smallest eigenvalue {lam_min:.3e} is not positive")
    _check_tails(lam_min, lam_max, cfg)

    n = C.shape[0]
    u, w = nodes_and_weights(cfg)
    t = np.exp(u)
    shifted = t[:, None, None] * np.eye(n)[None, :, :] + C[None, :, :]
    identity = np.repeat(np.eye(n, dtype=np.complex128)[None, :, :], t.size, axis=0)
    resolvents = np.linalg.solve(shifted, identity)
    # fixed summation order over nodes
    S = np.einsum("k,kij->ij", w * np.exp((p - 1.0) * u), resolvents)

    C2 = C @ C
    left_w, right_w = _tail_weights(p, cfg)
    body = C2 @ S
    total = body + left_w * C + right_w * C2

    estimate = _truncation_estimate(left_w * frobenius(C), right_w * frobenius(C2), lam_min, lam_max, cfg)
    if estimate > cfg.target_rel_error * frobenius(total):
        raise TruncationError(f"quadrature: estimated tail error {estimate:.3e} exceeds target "
                              f"{cfg.target_rel_error:.1e} relative")

    result = kp_constant(p, cfg) * total
    logger.debug(f"Integral representation: n={n}, p={p}, tail estimate {estimate:.3e}")
    return (result + result.conj().T) / 2


def relative_error_vs_spectral(C, p: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """Relative Frobenius distance between the quadrature result and spectral C^p."""
    approx = matrix_power_via_integral(C, p, cfg)
    exact = matrix_power(psd(getattr(C, "matrix", C), name="C"), p).matrix
    return frobenius(approx - exact) / max(frobenius(exact), 1e-300)
