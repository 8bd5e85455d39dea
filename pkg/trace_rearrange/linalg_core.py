"""
Dense complex linear algebra for trace-rearrange.

Hermitian spectral decomposition, singular values, matrix absolute value,
fractional powers of PSD matrices and Schatten p-norms. Matrices are plain
``numpy.ndarray`` objects of dtype complex128; ``as_matrix`` is the single
validation gate every public function goes through.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import linalg

from .errors import (
    BadExponent,
    ConvergenceFailure,
    MatrixFormatError,
    NegativeEigenvalue,
    NotHermitian,
)

logger = logging.getLogger(__name__)

# ComplexMatrix is a square, finite complex128 ndarray.
ComplexMatrix = np.ndarray

HERMITIAN_TOL = 1e-10
CLAMP_REL = 1e-12


def as_matrix(data, name: str = "matrix") -> ComplexMatrix:
    """
    Validate and convert input to a square complex matrix.

    Args:
        data: Array-like input
        name: Field name used in error messages

    Returns:
        complex128 array of shape (n, n), n >= 1
    """
    try:
        arr = np.asarray(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"{name}: not numeric ({e})") from e

    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise MatrixFormatError(f"{name}: expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixFormatError(f"{name}: entries must be finite")
    return arr


def as_vector(data, name: str = "vector") -> np.ndarray:
    """Validate and convert input to a non-empty finite complex vector."""
    try:
        arr = np.asarray(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise MatrixFormatError(f"{name}: not numeric ({e})") from e

    if arr.ndim != 1 or arr.shape[0] < 1:
        raise MatrixFormatError(f"{name}: expected a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixFormatError(f"{name}: entries must be finite")
    return arr


def adjoint(A: ComplexMatrix) -> ComplexMatrix:
    return A.conj().T


def frobenius(A: ComplexMatrix) -> float:
    return float(np.linalg.norm(A, "fro"))


def hermitian_part(H, tol: float = HERMITIAN_TOL, name: str = "matrix") -> ComplexMatrix:
    """
    Symmetrize H to (H + H*)/2, rejecting genuinely non-Hermitian input.

    Raises:
        NotHermitian: if ||H - (H+H*)/2||_F > tol * (1 + ||H||_F)
    """
    H = as_matrix(H, name)
    Hs = (H + adjoint(H)) / 2
    correction = frobenius(H - Hs)
    if correction > tol * (1.0 + frobenius(H)):
        raise NotHermitian(f"{name}: deviation from Hermitian {correction:.3e} exceeds tolerance")
    return Hs


def is_hermitian(H, tol: float = HERMITIAN_TOL) -> bool:
    H = as_matrix(H)
    return frobenius(H - adjoint(H)) / 2 <= tol * (1.0 + frobenius(H))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (nonincreasing) and aligned orthonormal eigenvectors."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> ComplexMatrix:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ adjoint(V)

    def apply(self, func) -> ComplexMatrix:
        """Spectral functional calculus V f(lambda) V*."""
        V = self.eigenvectors
        return (V * func(self.eigenvalues)) @ adjoint(V)


def _sorted_decomposition(w: np.ndarray, V: np.ndarray) -> SpectralDecomposition:
    # Stable sort keeps ties in original index order.
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(
        eigenvalues=np.ascontiguousarray(w[order], dtype=np.float64),
        eigenvectors=np.ascontiguousarray(V[:, order], dtype=np.complex128),
    )


def eig_hermitian(H, tol: float = HERMITIAN_TOL) -> SpectralDecomposition:
    """
    Spectral decomposition of a Hermitian matrix.

    The input is symmetrized first; the size of the correction is checked
    against ``tol``.

    Args:
        H: Hermitian matrix
        tol: Relative Hermitian tolerance

    Returns:
        SpectralDecomposition with eigenvalues sorted nonincreasing

    Raises:
        NotHermitian, ConvergenceFailure
    """
    Hs = hermitian_part(H, tol)
    try:
        w, V = linalg.eigh(Hs)
    except linalg.LinAlgError as e:
        logger.error(f"eigh failed on {Hs.shape[0]}x{Hs.shape[0]} input: {e}")
        raise ConvergenceFailure(f"Hermitian eigensolver failed: {e}") from e
    return _sorted_decomposition(w, V)


@dataclass(frozen=True)
class PsdMatrix:
    """Positive semidefinite matrix with its cached spectral decomposition."""
    matrix: ComplexMatrix
    spectrum: SpectralDecomposition

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    @classmethod
    def from_spectrum(cls, values: np.ndarray, vectors: np.ndarray) -> "PsdMatrix":
        """Build from nonnegative eigenvalues and orthonormal eigenvectors."""
        spectrum = _sorted_decomposition(np.asarray(values, dtype=np.float64),
                                         np.asarray(vectors, dtype=np.complex128))
        return cls(matrix=spectrum.reconstruct(), spectrum=spectrum)

    def trace_power(self, q: float) -> float:
        """Tr(M^q) with the 0^q = 0 convention on the kernel."""
        return float(np.sum(_spectral_power(self.eigenvalues, q)))


def clamp_threshold(eigenvalues: np.ndarray, rel: float = CLAMP_REL) -> float:
    lam_max = float(eigenvalues[0]) if eigenvalues.size else 0.0
    return rel * max(lam_max, 1.0)


def psd(M, tol: float = HERMITIAN_TOL, name: str = "matrix",
        clamp_rel: float = CLAMP_REL) -> PsdMatrix:
    """
    Wrap a matrix as PsdMatrix, clamping roundoff-negative eigenvalues.

    Eigenvalues down to -clamp_rel * max(lambda_max, 1) are clamped to zero;
    callers that accepted the input under a looser PSD test pass that
    tolerance here.

    Raises:
        NotHermitian: input not Hermitian within tolerance
        NegativeEigenvalue: an eigenvalue below -eps_clamp survives
    """
    if isinstance(M, PsdMatrix):
        return M
    Hs = hermitian_part(M, tol, name)
    spec = eig_hermitian(Hs, tol)
    eps = clamp_threshold(spec.eigenvalues, clamp_rel)
    lam_min = float(spec.eigenvalues[-1])
    if lam_min < -eps:
        raise NegativeEigenvalue(f"{name}: eigenvalue {lam_min:.3e} below clamp threshold -{eps:.1e}")
    clamped = SpectralDecomposition(
        eigenvalues=np.maximum(spec.eigenvalues, 0.0),
        eigenvectors=spec.eigenvectors,
    )
    return PsdMatrix(matrix=Hs, spectrum=clamped)


def is_psd(M, tol: float = HERMITIAN_TOL) -> bool:
    """True when M is Hermitian with lambda_min >= -tol * max(||M||, 1)."""
    M = as_matrix(M)
    if not is_hermitian(M, tol):
        return False
    w = linalg.eigvalsh((M + adjoint(M)) / 2)
    scale = max(float(np.max(np.abs(w))), 1.0)
    return float(w[0]) >= -tol * scale


def abs_matrix(A) -> PsdMatrix:
    """
    |A| = sqrt(A*A), built from the SVD A = U S Vh as Vh* S Vh.

    Eigenvalues of the result are exactly the singular values of A.
    """
    A = as_matrix(A)
    try:
        _, s, Vh = linalg.svd(A)
    except linalg.LinAlgError as e:
        raise ConvergenceFailure(f"SVD failed: {e}") from e
    return PsdMatrix.from_spectrum(s, adjoint(Vh))


def singular_values(A) -> np.ndarray:
    """Singular values of A, nonincreasing."""
    A = as_matrix(A)
    try:
        s = linalg.svdvals(A)
    except linalg.LinAlgError as e:
        raise ConvergenceFailure(f"SVD failed: {e}") from e
    return np.sort(s)[::-1]


def _spectral_power(values: np.ndarray, q: float) -> np.ndarray:
    out = np.zeros_like(values, dtype=np.float64)
    positive = values > 0
    out[positive] = values[positive] ** q
    return out


def matrix_power(M, q: float) -> PsdMatrix:
    """
    M^q by spectral calculus, 0^q = 0 on the kernel (including q = 0).

    Raises:
        BadExponent: q < 0 or not finite
        NegativeEigenvalue: from PSD validation
    """
    q = float(q)
    if not math.isfinite(q) or q < 0:
        raise BadExponent(f"q: power must be finite and >= 0, got {q}")
    M = psd(M)
    values = _spectral_power(M.eigenvalues, q)
    spectrum = SpectralDecomposition(eigenvalues=values, eigenvectors=M.eigenvectors)
    return PsdMatrix(matrix=spectrum.reconstruct(), spectrum=spectrum)


def schatten_power(A, p: float) -> float:
    """||A||_p^p = sum of sigma_i^p (finite p >= 1)."""
    p = check_schatten_exponent(p, allow_inf=False)
    s = singular_values(A)
    return float(np.sum(s ** p))


def check_schatten_exponent(p, allow_inf: bool = True) -> float:
    try:
        p = float(p)
    except (TypeError, ValueError) as e:
        raise BadExponent(f"p: not a number ({p!r})") from e
    if math.isnan(p) or p < 1:
        raise BadExponent(f"p: must be >= 1, got {p}")
    if math.isinf(p) and not allow_inf:
        raise BadExponent("p: infinity is not supported here")
    return p


def schatten_norm(A, p: Union[float, int]) -> float:
    """
    Schatten p-norm (sum sigma_i^p)^(1/p); p = inf gives the operator norm.

    Raises:
        BadExponent: p < 1
    """
    p = check_schatten_exponent(p, allow_inf=True)
    s = singular_values(A)
    top = float(s[0])
    if math.isinf(p) or top == 0.0:
        return top
    # scaled to avoid overflow for large p
    return top * float(np.sum((s / top) ** p)) ** (1.0 / p)


def positive_negative_parts(B, tol: float = HERMITIAN_TOL) -> Tuple[PsdMatrix, PsdMatrix]:
    """
    Split Hermitian B = X - Y with X, Y PSD and XY = 0, so |B| = X + Y.

    Raises:
        NotHermitian
    """
    spec = eig_hermitian(B, tol)
    V = spec.eigenvectors
    X = PsdMatrix.from_spectrum(np.maximum(spec.eigenvalues, 0.0), V)
    Y = PsdMatrix.from_spectrum(np.maximum(-spec.eigenvalues, 0.0), V)
    return X, Y


def trace_product(*factors: ComplexMatrix) -> float:
    """Real part of Tr(F1 F2 ... Fk)."""
    acc = factors[0]
    for F in factors[1:]:
        acc = acc @ F
    return float(np.real(np.trace(acc)))


def congruence(B: PsdMatrix, A: PsdMatrix) -> PsdMatrix:
    """B^(1/2) A B^(1/2) as a PSD matrix."""
    root = matrix_power(B, 0.5).matrix
    return psd(root @ A.matrix @ root, name="congruence")
