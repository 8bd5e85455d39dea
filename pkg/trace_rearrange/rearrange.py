"""
Singular-value rearrangements and the layer-cake decomposition.

Arrow convention (fixed, and counterintuitive):

    =============  ==================================  ==================
    operator       diagonal position 1                 diagonal position n
    =============  ==================================  ==================
    sigma_up       largest singular value sigma_1      smallest sigma_n
    sigma_down     smallest singular value sigma_n     largest sigma_1
    =============  ==================================  ==================
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from .errors import DimMismatch, PreconditionViolated
from .linalg_core import (
    HERMITIAN_TOL,
    ComplexMatrix,
    abs_matrix,
    adjoint,
    as_matrix,
    hermitian_part,
    is_hermitian,
    is_psd,
    psd,
    singular_values,
)
from .matrix_io import make_witness
from .records import DEFAULT_TOLERANCE, InequalityReport, Orientation, make_report

logger = logging.getLogger(__name__)


class Arrow(str, Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class RearrangedDiagonal:
    """Singular values laid out along a diagonal in a fixed order."""
    values: np.ndarray
    orientation: Arrow

    @property
    def matrix(self) -> ComplexMatrix:
        return np.diag(self.values).astype(np.complex128)


def rearranged(A, orientation: Arrow = Arrow.UP) -> RearrangedDiagonal:
    s = singular_values(A)
    values = s if orientation is Arrow.UP else s[::-1].copy()
    return RearrangedDiagonal(values=values, orientation=orientation)


def sigma_up(A) -> ComplexMatrix:
    """Diagonal matrix of singular values, largest at position 1."""
    return rearranged(A, Arrow.UP).matrix


def sigma_down(A) -> ComplexMatrix:
    """Diagonal matrix of singular values, smallest at position 1."""
    return rearranged(A, Arrow.DOWN).matrix


@dataclass(frozen=True)
class LayerCake:
    """C = sum_j c_j P_j with nested spectral projections, rank(P_j) = j."""
    coefficients: np.ndarray
    projections: Tuple[np.ndarray, ...]

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.coefficients))

    def reconstruct(self) -> ComplexMatrix:
        out = np.zeros_like(self.projections[0])
        for c, P in zip(self.coefficients, self.projections):
            out = out + c * P
        return out

    def is_convex_combination(self, tol: float = 1e-10) -> bool:
        return bool(np.all(self.coefficients >= 0)) and abs(self.total_weight - 1.0) <= tol


def layer_cake(C) -> LayerCake:
    """
    Layer-cake decomposition of a PSD matrix.

    c_j = lambda_j - lambda_{j+1} (c_n = lambda_n), P_j spans the top-j
    eigenvectors. Repeated eigenvalues give zero coefficients. No
    normalization: the coefficients sum to lambda_max.

    Args:
        C: PSD matrix (array or PsdMatrix)

    Returns:
        LayerCake
    """
    C = psd(C, name="C")
    lam = C.eigenvalues
    V = C.eigenvectors
    n = C.dim

    coefficients = np.empty(n, dtype=np.float64)
    coefficients[:-1] = lam[:-1] - lam[1:]
    coefficients[-1] = lam[-1]
    # clamped spectrum is sorted, so differences are >= 0 up to roundoff
    coefficients = np.maximum(coefficients, 0.0)

    projections = []
    for j in range(1, n + 1):
        U = V[:, :j]
        projections.append(U @ adjoint(U))
    return LayerCake(coefficients=coefficients, projections=tuple(projections))


def weyl_monotone_check(A, B, tol: float = DEFAULT_TOLERANCE,
                        hermitian_tol: float = HERMITIAN_TOL) -> InequalityReport:
    """
    Check sigma_i(A) >= sigma_i(B) for Hermitian A >= |B|.

    The report carries the componentwise pair with the smallest gap.

    Raises:
        NotHermitian: A or B not Hermitian
        PreconditionViolated: A - |B| has an eigenvalue below -tolerance
    """
    A = hermitian_part(A, hermitian_tol, "A")
    B = hermitian_part(B, hermitian_tol, "B")
    if A.shape != B.shape:
        raise DimMismatch(f"B: dimension {B.shape[0]} != {A.shape[0]}")
    gap = A - abs_matrix(B).matrix
    if not is_psd(gap, hermitian_tol):
        raise PreconditionViolated("A - |B| is not positive semidefinite")

    sa = singular_values(A)
    sb = singular_values(B)
    diffs = sa - sb
    i = int(np.argmin(diffs))
    return make_report(
        "weyl_monotone",
        params={},
        lhs=float(sa[i]),
        rhs=float(sb[i]),
        orientation=Orientation.GE,
        tolerance=tol,
        witness=make_witness({"A": A, "B": B}, {}),
        flags={"index": i},
    )


def is_ordered(A, B, tol: float = HERMITIAN_TOL) -> bool:
    """A >= B >= 0 for Hermitian A, B."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        return False
    return is_psd(B, tol) and is_psd(A - B, tol)


def is_dominated(A, B, tol: float = HERMITIAN_TOL) -> bool:
    """A >= |B| for Hermitian A, B."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape or not is_psd(A, tol):
        return False
    if not is_hermitian(B, tol):
        return False
    return is_psd(A - abs_matrix((B + adjoint(B)) / 2).matrix, tol)

