"""
Inequality checkers.

Every checker validates its inputs, computes both sides of one trace or
norm inequality, and returns an InequalityReport whose slack is oriented so
that slack >= 0 means "holds". Orientation flips with the p-regime where
the statement reverses (p > 2 for the Hanner family).

Reports carry a ``status`` resolved for the concrete inputs: a conjecture
checker evaluated inside a proved case reports ``proved``, and anything
outside a proved case is ``conjecture`` (evidence only).
"""

import logging
import math
from typing import Dict, Tuple

import numpy as np

from .errors import (
    BadExponent,
    DimMismatch,
    DomainError,
    LengthMismatch,
    NonIntegerS,
    PreconditionViolated,
    SingularShift,
)
from .linalg_core import (
    HERMITIAN_TOL,
    PsdMatrix,
    abs_matrix,
    as_matrix,
    as_vector,
    check_schatten_exponent,
    congruence,
    eig_hermitian,
    hermitian_part,
    is_psd,
    matrix_power,
    psd,
    schatten_norm,
    schatten_power,
    singular_values,
    trace_product,
)
from .matrix_io import make_witness
from .rearrange import is_dominated, is_ordered, sigma_down, sigma_up
from .records import DEFAULT_TOLERANCE, InequalityReport, Orientation, Status, make_report

logger = logging.getLogger(__name__)

FOUR_THIRDS = 4.0 / 3.0
REGION_EPS = 1e-12


# Validation helpers

def _finite_p(p) -> float:
    return check_schatten_exponent(p, allow_inf=False)


def _real(value, name: str) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise BadExponent(f"{name}: not a number ({value!r})") from e
    if not math.isfinite(value):
        raise BadExponent(f"{name}: must be finite, got {value}")
    return value


def _vectors(f, g) -> Tuple[np.ndarray, np.ndarray]:
    f = as_vector(f, "f")
    g = as_vector(g, "g")
    if f.shape != g.shape:
        raise LengthMismatch(f"g: length {g.shape[0]} != length of f {f.shape[0]}")
    return f, g


def _matrices(A, B, names=("A", "B")) -> Tuple[np.ndarray, np.ndarray]:
    A = as_matrix(A, names[0])
    B = as_matrix(B, names[1])
    if A.shape != B.shape:
        raise DimMismatch(f"{names[1]}: dimension {B.shape[0]} != {names[0]} dimension {A.shape[0]}")
    return A, B


def _psd_pair(A, B, names=("A", "B")) -> Tuple[PsdMatrix, PsdMatrix]:
    A, B = _matrices(A, B, names)
    return psd(A, name=names[0]), psd(B, name=names[1])


def _hanner_orientation(p: float) -> Orientation:
    return Orientation.GE if p <= 2 else Orientation.LE


def _lp_power(v: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(v) ** p))


def _lp_norm(v: np.ndarray, p: float) -> float:
    return _lp_power(v, p) ** (1.0 / p)


def _is_even_integer(p: float) -> bool:
    return math.isfinite(p) and p == round(p) and int(round(p)) % 2 == 0


def _sum_diff_power(A: np.ndarray, B: np.ndarray, p: float) -> float:
    return schatten_power(A + B, p) + schatten_power(A - B, p)


# Commutative (vector) checkers

def hanner_vector(f, g, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Hanner's inequality for sequences.

    ||f+g||^p + ||f-g||^p >= (||f|| + ||g||)^p + | ||f|| - ||g|| |^p
    for 1 <= p <= 2, reversed for p > 2.

    Raises:
        LengthMismatch, BadExponent
    """
    f, g = _vectors(f, g)
    p = _finite_p(p)
    nf, ng = _lp_norm(f, p), _lp_norm(g, p)
    lhs = _lp_power(f + g, p) + _lp_power(f - g, p)
    rhs = (nf + ng) ** p + abs(nf - ng) ** p
    params = {"p": p}
    return make_report("hanner_vector", params, lhs, rhs, _hanner_orientation(p), tol,
                       witness=make_witness({"f": f, "g": g}, params))


def _decreasing_modulus(v: np.ndarray) -> np.ndarray:
    return np.sort(np.abs(v))[::-1].astype(np.complex128)


def rearrangement_vector(f, g, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Sum-and-difference norms against the nonincreasing rearrangements f*, g*.

    Raises:
        LengthMismatch, BadExponent
    """
    f, g = _vectors(f, g)
    p = _finite_p(p)
    fs, gs = _decreasing_modulus(f), _decreasing_modulus(g)
    lhs = _lp_power(f + g, p) + _lp_power(f - g, p)
    rhs = _lp_power(fs + gs, p) + _lp_power(fs - gs, p)
    params = {"p": p}
    return make_report("rearrangement_vector", params, lhs, rhs, _hanner_orientation(p), tol,
                       witness=make_witness({"f": f, "g": g}, params))


def parallelogram_bound_vector(f, g, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    ||f+g||^p + ||f-g||^p <= 2||f||^p + 2||g||^p for p <= 2, reversed above.

    Raises:
        LengthMismatch, BadExponent
    """
    f, g = _vectors(f, g)
    p = _finite_p(p)
    lhs = _lp_power(f + g, p) + _lp_power(f - g, p)
    rhs = 2.0 * _lp_power(f, p) + 2.0 * _lp_power(g, p)
    orientation = Orientation.LE if p <= 2 else Orientation.GE
    params = {"p": p}
    return make_report("parallelogram_bound_vector", params, lhs, rhs, orientation, tol,
                       witness=make_witness({"f": f, "g": g}, params))


def scalar_curve(a: float, b: float, p: float, t: float) -> float:
    """
    c(t) = (a^2 + b^2 + 2abt)^(p/2) + (a^2 + b^2 - 2abt)^(p/2).

    Raises:
        DomainError: negative a or b, t outside [-1, 1], or a base below
            zero beyond roundoff
        BadExponent: p < 1
    """
    a = _real(a, "a")
    b = _real(b, "b")
    t = _real(t, "t")
    p = _finite_p(p)
    if a < 0 or b < 0:
        raise DomainError(f"a, b: must be nonnegative, got a={a}, b={b}")
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"t: must lie in [-1, 1], got {t}")

    base = a * a + b * b
    cross = 2.0 * a * b * t
    roundoff = 1e-12 * max(base, 1.0)
    total = 0.0
    for inner in (base + cross, base - cross):
        if inner < -roundoff:
            raise DomainError(f"t: a^2 + b^2 +- 2abt = {inner:.3e} is negative")
        total += max(inner, 0.0) ** (p / 2.0)
    return total


def scalar_curve_pointwise(a: float, b: float, p: float, t: float,
                           tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    c(t) against its endpoint value c(1) = c(-1).

    c(t) >= c(1) for p <= 2 and c(t) <= c(1) for p > 2.
    """
    lhs = scalar_curve(a, b, p, t)
    rhs = scalar_curve(a, b, p, 1.0)
    params = {"a": float(a), "b": float(b), "p": float(p), "t": float(t)}
    return make_report("scalar_curve_pointwise", params, lhs, rhs,
                       _hanner_orientation(float(p)), tol)


# Matrix Hanner family

def hanner_known_region(p: float, psd_sum: bool) -> bool:
    """Whether the matrix Hanner inequality is proved for this p (and input class)."""
    if p == 2 or p >= 4 or math.isinf(p):
        return True
    if p <= FOUR_THIRDS + REGION_EPS:
        return True
    return psd_sum and p <= 2


def hanner_matrix(A, B, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Matrix Hanner inequality in Schatten norms.

    For p = inf the limiting form max(||A+B||, ||A-B||) <= ||A|| + ||B|| in
    operator norm is checked.

    Raises:
        DimMismatch, BadExponent
    """
    A, B = _matrices(A, B)
    p = check_schatten_exponent(p, allow_inf=True)

    psd_sum = is_psd(A + B) and is_psd(A - B)
    known = hanner_known_region(p, psd_sum)
    flags = {
        "known_region": known,
        "psd_sum": psd_sum,
        "psd_sum_uncertain": psd_sum and p > 2 and not known,
    }

    if math.isinf(p):
        lhs = max(schatten_norm(A + B, p), schatten_norm(A - B, p))
        rhs = schatten_norm(A, p) + schatten_norm(B, p)
        orientation = Orientation.LE
    else:
        na, nb = schatten_norm(A, p), schatten_norm(B, p)
        lhs = _sum_diff_power(A, B, p)
        rhs = (na + nb) ** p + abs(na - nb) ** p
        orientation = _hanner_orientation(p)

    params = {"p": p}
    return make_report("hanner_matrix", params, lhs, rhs, orientation, tol,
                       witness=make_witness({"A": A, "B": B}, params),
                       status=Status.PROVED if known else Status.CONJECTURE,
                       flags=flags)


def conjecture1(A, B, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Sum-and-difference norms against the similarly ordered rearrangements.

    Proved for Hermitian A >= B >= 0 with p <= 2; the reversed form holds for
    every even integer p without restriction.

    Raises:
        DimMismatch, BadExponent
    """
    A, B = _matrices(A, B)
    p = _finite_p(p)
    ordered = is_ordered(A, B)
    even = _is_even_integer(p)

    SA, SB = sigma_up(A), sigma_up(B)
    lhs = _sum_diff_power(A, B, p)
    rhs = _sum_diff_power(SA, SB, p)

    proved = (ordered and p <= 2) or even or p == 2
    params = {"p": p}
    return make_report("conjecture1", params, lhs, rhs, _hanner_orientation(p), tol,
                       witness=make_witness({"A": A, "B": B}, params),
                       status=Status.PROVED if proved else Status.CONJECTURE,
                       flags={"theorem1_applies": ordered, "even_p_reverse": even})


def conjecture2(A, B, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Sum-and-difference norms against the oppositely ordered rearrangements.

    Proved for Hermitian A >= |B| with p <= 2.

    Raises:
        DimMismatch, BadExponent
    """
    A, B = _matrices(A, B)
    p = _finite_p(p)
    dominated = is_dominated(A, B)

    SA, SB = sigma_up(A), sigma_down(B)
    lhs = _sum_diff_power(A, B, p)
    rhs = _sum_diff_power(SA, SB, p)

    orientation = Orientation.LE if p <= 2 else Orientation.GE
    proved = (dominated and p <= 2) or p == 2
    params = {"p": p}
    return make_report("conjecture2", params, lhs, rhs, orientation, tol,
                       witness=make_witness({"A": A, "B": B}, params),
                       status=Status.PROVED if proved else Status.CONJECTURE,
                       flags={"theorem2_applies": dominated})


def lemma_otherway(A, B, p: float, tol: float = DEFAULT_TOLERANCE,
                   hermitian_tol: float = HERMITIAN_TOL) -> InequalityReport:
    """
    Tr((A+B)^p + (A-B)^p) <= Tr((A+|B|)^p + (A-|B|)^p) for A >= |B|, 1 <= p <= 2.

    Raises:
        NotHermitian: A or B not Hermitian
        PreconditionViolated: A - |B| not PSD
        BadExponent: p outside [1, 2]
    """
    A = hermitian_part(A, hermitian_tol, "A")
    B = hermitian_part(B, hermitian_tol, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"B: dimension {B.shape[0]} != A dimension {A.shape[0]}")
    p = _finite_p(p)
    if p > 2:
        raise BadExponent(f"p: must lie in [1, 2], got {p}")

    absB = abs_matrix(B).matrix
    if not is_psd(A - absB, hermitian_tol):
        raise PreconditionViolated("A - |B| is not positive semidefinite")

    # A - |B| <= A +- B, so every term is PSD up to the precondition tolerance
    def trace_pow(M):
        return psd(M, hermitian_tol, name="A+-B", clamp_rel=hermitian_tol).trace_power(p)

    lhs = trace_pow(A + B) + trace_pow(A - B)
    rhs = trace_pow(A + absB) + trace_pow(A - absB)
    params = {"p": p}
    return make_report("lemma_otherway", params, lhs, rhs, Orientation.LE, tol,
                       witness=make_witness({"A": A, "B": B}, params))


# Rearrangement trace inequalities

def _check_r(r, strict: bool = False) -> float:
    r = _real(r, "r")
    if r < 0 or (strict and r == 0):
        bound = "> 0" if strict else ">= 0"
        raise BadExponent(f"r: must be {bound}, got {r}")
    return r


def _check_s_at_least_one(s) -> float:
    s = _real(s, "s")
    if s < 1:
        raise BadExponent(f"s: must be >= 1, got {s}")
    return s


def _weighted_trace(B: PsdMatrix, r: float, C: PsdMatrix, s: float) -> float:
    """Tr(B^r C^s)."""
    return trace_product(matrix_power(B, r).matrix, matrix_power(C, s).matrix)


def _spectral_sum(a: np.ndarray, b: np.ndarray, s: float, q: float) -> float:
    """sum_i a_i^s b_i^q with 0^x = 0."""
    total = 0.0
    for ai, bi in zip(a, b):
        if ai > 0 and bi > 0:
            total += float(ai) ** s * float(bi) ** q
    return total


def updown1(A, B, r: float, s: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Tr(B^r (B^1/2 A B^1/2)^s) >= Tr(Sigma_up(A)^s Sigma_down(B)^(s+r)).

    Args:
        A, B: PSD matrices
        r: >= 0
        s: >= 1, real

    Raises:
        BadExponent
    """
    A, B = _psd_pair(A, B)
    r = _check_r(r)
    s = _check_s_at_least_one(s)

    lhs = _weighted_trace(B, r, congruence(B, A), s)
    a = singular_values(A.matrix)
    b = singular_values(B.matrix)[::-1]
    rhs = _spectral_sum(a, b, s, s + r)

    params = {"r": r, "s": s}
    return make_report("updown1", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A.matrix, "B": B.matrix}, params))


def updown2(A, B, r: float, s: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Tr(Sigma_up(A)^s Sigma_up(B)^(s+r)) >= Tr(B^r (B^1/2 A B^1/2)^s), integer s.

    Raises:
        NonIntegerS: s not integer-valued
        BadExponent: s < 1 or r < 0
    """
    s_value = _real(s, "s")
    if s_value != round(s_value):
        raise NonIntegerS(f"s: must be an integer, got {s_value}")
    s = _check_s_at_least_one(s_value)
    A, B = _psd_pair(A, B)
    r = _check_r(r)

    a = singular_values(A.matrix)
    b = singular_values(B.matrix)
    lhs = _spectral_sum(a, b, s, s + r)
    rhs = _weighted_trace(B, r, congruence(B, A), s)

    params = {"r": r, "s": s}
    return make_report("updown2", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A.matrix, "B": B.matrix}, params))


def lieb_thirring(X, Y, s: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Tr(X^s Y^s) >= Tr((Y^1/2 X Y^1/2)^s) for s >= 1.

    Raises:
        BadExponent
    """
    X, Y = _psd_pair(X, Y, ("X", "Y"))
    s = _check_s_at_least_one(s)
    lhs = trace_product(matrix_power(X, s).matrix, matrix_power(Y, s).matrix)
    rhs = congruence(Y, X).trace_power(s)
    params = {"s": s}
    return make_report("lieb_thirring", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"X": X.matrix, "Y": Y.matrix}, params))


def _reverse_sides(A: PsdMatrix, B: PsdMatrix, s: float) -> Tuple[float, float]:
    lhs = congruence(B, A).trace_power(s)
    rhs = trace_product(matrix_power(A, s).matrix, matrix_power(B, s).matrix)
    return lhs, rhs


def reverse_lt_half(A, B, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """Tr((B^1/2 A B^1/2)^1/2) >= Tr(A^1/2 B^1/2)."""
    A, B = _psd_pair(A, B)
    lhs, rhs = _reverse_sides(A, B, 0.5)
    return make_report("reverse_lt_half", {}, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A.matrix, "B": B.matrix}, {}))


def rev_probe(A, B, s: float, tol: float = DEFAULT_TOLERANCE,
              check_domain: bool = True) -> InequalityReport:
    """
    Tr((B^1/2 A B^1/2)^s) >= Tr(A^s B^s), conjectured for 1/2 < s < 1.

    Args:
        check_domain: when False, any s > 0 is accepted (used to plant a
            known-false target for hunter soundness runs)

    Raises:
        BadExponent: s outside (1/2, 1) with check_domain
    """
    s = _real(s, "s")
    if check_domain and not 0.5 < s < 1.0:
        raise BadExponent(f"s: must lie in (1/2, 1), got {s}")
    if s <= 0:
        raise BadExponent(f"s: must be positive, got {s}")
    A, B = _psd_pair(A, B)
    lhs, rhs = _reverse_sides(A, B, s)
    params = {"s": s}
    return make_report("rev_probe", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A.matrix, "B": B.matrix}, params),
                       status=Status.CONJECTURE,
                       flags={"in_conjectured_range": 0.5 < s < 1.0})


def liebth2_probe(X, Y, r: float, s: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Tr(X^s Y^(s+r)) >= Tr(Y^r (Y^1/2 X Y^1/2)^s), conjectured for r > 0, s >= 1.

    Raises:
        BadExponent
    """
    X, Y = _psd_pair(X, Y, ("X", "Y"))
    r = _check_r(r, strict=True)
    s = _check_s_at_least_one(s)
    lhs = trace_product(matrix_power(X, s).matrix, matrix_power(Y, s + r).matrix)
    rhs = _weighted_trace(Y, r, congruence(Y, X), s)
    params = {"r": r, "s": s}
    return make_report("liebth2_probe", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"X": X.matrix, "Y": Y.matrix}, params),
                       status=Status.CONJECTURE,
                       flags={"integer_s": s == round(s)})


def epstein_function(B: PsdMatrix, A: PsdMatrix, s: float) -> float:
    """f_s(A) = Tr((B^1/2 A^(1/s) B^1/2)^s) for fixed B."""
    return congruence(B, matrix_power(A, 1.0 / s)).trace_power(s)


def epstein_probe(B, s: float, A1, A2, lam: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    Concavity (s >= 1) or convexity (1/2 <= s < 1) of f_s along a segment.

    Concavity mode checks f_s(mid) >= lam f_s(A1) + (1-lam) f_s(A2); convexity
    mode checks the reverse. Convexity is proved only at s = 1/2.

    Raises:
        BadExponent: s < 1/2
        DomainError: lam outside [0, 1]
        DimMismatch
    """
    s = _real(s, "s")
    if s < 0.5:
        raise BadExponent(f"s: must be >= 1/2, got {s}")
    lam = _real(lam, "lambda")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda: must lie in [0, 1], got {lam}")
    A1, A2 = _psd_pair(A1, A2, ("A1", "A2"))
    B = psd(as_matrix(B, "B"), name="B")
    if B.dim != A1.dim:
        raise DimMismatch(f"B: dimension {B.dim} != A1 dimension {A1.dim}")

    mid = psd(lam * A1.matrix + (1.0 - lam) * A2.matrix, name="mid")
    lhs = epstein_function(B, mid, s)
    rhs = lam * epstein_function(B, A1, s) + (1.0 - lam) * epstein_function(B, A2, s)

    concavity = s >= 1.0
    proved = concavity or s == 0.5
    params = {"s": s, "lambda": lam}
    return make_report("epstein_probe", params, lhs, rhs,
                       Orientation.GE if concavity else Orientation.LE, tol,
                       witness=make_witness({"B": B.matrix, "A1": A1.matrix, "A2": A2.matrix}, params),
                       status=Status.PROVED if proved else Status.CONJECTURE,
                       flags={"mode": "concavity" if concavity else "convexity"})


def chiti_tartar_matrix(A, B, p: float, tol: float = DEFAULT_TOLERANCE) -> InequalityReport:
    """
    ||A - B||_p >= ||Sigma_down(A) - Sigma_down(B)||_p, p >= 1 or inf.

    Raises:
        DimMismatch, BadExponent
    """
    A, B = _matrices(A, B)
    p = check_schatten_exponent(p, allow_inf=True)
    lhs = schatten_norm(A - B, p)
    rhs = schatten_norm(sigma_down(A) - sigma_down(B), p)
    params = {"p": p}
    return make_report("chiti_tartar_matrix", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A, "B": B}, params))


def _resolvent_trace(M: np.ndarray, name: str) -> float:
    w = eig_hermitian(M).eigenvalues
    if float(w[-1]) <= 0:
        raise SingularShift(f"{name}: eigenvalue {float(w[-1]):.3e} <= 0")
    return float(np.sum(1.0 / w))


def resolvent_suffice(A, B, t: float, tol: float = DEFAULT_TOLERANCE,
                      hermitian_tol: float = HERMITIAN_TOL) -> InequalityReport:
    """
    Tr((t+A+B)^-1 + (t+A-B)^-1) >= same with Sigma_up(A), Sigma_up(B).

    Raises:
        NotHermitian
        PreconditionViolated: not A >= B >= 0
        DomainError: t <= 0
        SingularShift: a shifted matrix has an eigenvalue <= 0
    """
    A = hermitian_part(A, hermitian_tol, "A")
    B = hermitian_part(B, hermitian_tol, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"B: dimension {B.shape[0]} != A dimension {A.shape[0]}")
    t = _real(t, "t")
    if t <= 0:
        raise DomainError(f"t: must be > 0, got {t}")
    if not is_ordered(A, B, hermitian_tol):
        raise PreconditionViolated("A >= B >= 0 does not hold")

    shift = t * np.eye(A.shape[0])
    SA, SB = sigma_up(A), sigma_up(B)
    lhs = _resolvent_trace(shift + A + B, "t+A+B") + _resolvent_trace(shift + A - B, "t+A-B")
    rhs = (_resolvent_trace(shift + SA + SB, "t+Sigma(A)+Sigma(B)")
           + _resolvent_trace(shift + SA - SB, "t+Sigma(A)-Sigma(B)"))
    params = {"t": t}
    return make_report("resolvent_suffice", params, lhs, rhs, Orientation.GE, tol,
                       witness=make_witness({"A": A, "B": B}, params))


CHECKERS: Dict[str, object] = {
    "hanner_vector": hanner_vector,
    "rearrangement_vector": rearrangement_vector,
    "parallelogram_bound_vector": parallelogram_bound_vector,
    "hanner_matrix": hanner_matrix,
    "conjecture1": conjecture1,
    "conjecture2": conjecture2,
    "lemma_otherway": lemma_otherway,
    "updown1": updown1,
    "updown2": updown2,
    "lieb_thirring": lieb_thirring,
    "reverse_lt_half": reverse_lt_half,
    "rev_probe": rev_probe,
    "liebth2_probe": liebth2_probe,
    "epstein_probe": epstein_probe,
    "chiti_tartar_matrix": chiti_tartar_matrix,
    "resolvent_suffice": resolvent_suffice,
}
