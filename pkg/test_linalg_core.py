"""
Tests for the spectral primitives in trace_rearrange.linalg_core.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from trace_rearrange.errors import BadExponent, MatrixFormatError, NegativeEigenvalue, NotHermitian
from trace_rearrange.linalg_core import (
    abs_matrix,
    as_matrix,
    eig_hermitian,
    frobenius,
    is_psd,
    matrix_power,
    positive_negative_parts,
    psd,
    schatten_norm,
    singular_values,
)


def random_complex(seed, n):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(seed, n):
    G = random_complex(seed, n)
    return (G + G.conj().T) / 2


def random_psd(seed, n):
    G = random_complex(seed, n)
    return G.conj().T @ G


class TestEigHermitian:
    def test_diagonal(self):
        spec = eig_hermitian(np.diag([3.0, 1.0]))
        assert_allclose(spec.eigenvalues, [3.0, 1.0])
        assert_allclose(np.abs(spec.eigenvectors), np.eye(2), atol=1e-12)

    def test_pauli_x(self):
        spec = eig_hermitian([[0, 1], [1, 0]])
        assert_allclose(spec.eigenvalues, [1.0, -1.0], atol=1e-12)

    def test_reconstruction(self):
        H = random_hermitian(42, 5)
        spec = eig_hermitian(H)
        assert frobenius(spec.reconstruct() - H) <= 1e-10 * frobenius(H)
        assert np.all(np.diff(spec.eigenvalues) <= 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian([[0, 1], [0, 0]])

    def test_rejects_non_square(self):
        with pytest.raises(MatrixFormatError):
            as_matrix(np.ones((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(MatrixFormatError):
            as_matrix([[np.nan, 0], [0, 1]])


class TestAbsAndSingularValues:
    def test_abs_of_nilpotent(self):
        assert_allclose(abs_matrix([[0, -2], [0, 0]]).matrix, np.diag([0, 2]), atol=1e-12)

    def test_abs_of_psd_is_itself(self):
        A = random_psd(5, 4)
        assert frobenius(abs_matrix(A).matrix - A) <= 1e-10 * frobenius(A)

    def test_abs_of_signature(self):
        assert_allclose(abs_matrix(np.diag([1.0, -1.0])).matrix, np.eye(2), atol=1e-12)

    def test_singular_values_nilpotent(self):
        assert_allclose(singular_values([[0, 2], [0, 0]]), [2.0, 0.0])

    def test_singular_values_unitary(self):
        Q, _ = np.linalg.qr(random_complex(3, 4))
        assert_allclose(singular_values(Q), np.ones(4), atol=1e-12)

    def test_singular_values_match_gram_eigenvalues(self):
        A = random_complex(7, 4)
        expected = np.sqrt(np.sort(np.linalg.eigvalsh(A.conj().T @ A))[::-1].clip(min=0))
        assert_allclose(singular_values(A), expected, rtol=1e-10, atol=1e-12)


class TestMatrixPower:
    def test_square_root(self):
        assert_allclose(matrix_power(np.diag([4.0, 9.0]), 0.5).matrix, np.diag([2.0, 3.0]), atol=1e-12)

    def test_identity_exponent(self):
        M = random_psd(1, 3)
        assert_allclose(matrix_power(M, 1).matrix, M, atol=1e-10)

    def test_square(self):
        M = random_psd(3, 4)
        assert frobenius(matrix_power(M, 2).matrix - M @ M) <= 1e-9 * frobenius(M @ M)

    def test_zero_power_kills_kernel(self):
        assert_allclose(matrix_power(np.diag([2.0, 0.0]), 0).matrix, np.diag([1.0, 0.0]), atol=1e-12)

    def test_negative_exponent(self):
        with pytest.raises(BadExponent):
            matrix_power(np.eye(2), -1)

    def test_not_psd(self):
        with pytest.raises(NegativeEigenvalue):
            matrix_power(np.diag([1.0, -1.0]), 0.5)

    def test_roundoff_negative_is_clamped(self):
        M = psd(np.diag([1.0, -1e-14]))
        assert M.eigenvalues[-1] == 0.0

    def test_clamp_tolerance_is_configurable(self):
        with pytest.raises(NegativeEigenvalue):
            psd(np.diag([1.0, -5e-11]))
        assert psd(np.diag([1.0, -5e-11]), clamp_rel=1e-10).eigenvalues[-1] == 0.0

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 5),
           a=st.floats(0.25, 2.5), b=st.floats(0.25, 2.5))
    def test_composition(self, seed, n, a, b):
        M = random_psd(seed, n) + np.eye(n)
        nested = matrix_power(matrix_power(M, a), b).matrix
        direct = matrix_power(M, a * b).matrix
        assert frobenius(nested - direct) <= 1e-8 * frobenius(direct)


class TestSchattenNorm:
    @pytest.mark.parametrize("n,p", [(3, 1), (4, 1.5), (2, 2), (5, 7)])
    def test_identity(self, n, p):
        assert schatten_norm(np.eye(n), p) == pytest.approx(n ** (1 / p), rel=1e-12)

    def test_pythagoras(self):
        assert schatten_norm(np.diag([3.0, 4.0]), 2) == pytest.approx(5.0, rel=1e-12)

    def test_operator_norm(self):
        assert schatten_norm(np.diag([3.0, -4.0]), float("inf")) == pytest.approx(4.0)

    def test_matches_singular_values(self):
        A = random_complex(11, 4)
        s = np.linalg.svd(A, compute_uv=False)
        assert schatten_norm(A, 1.5) == pytest.approx(np.sum(s ** 1.5) ** (2 / 3), rel=1e-12)

    def test_p_below_one(self):
        with pytest.raises(BadExponent):
            schatten_norm(np.eye(2), 0.5)

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 5), p=st.floats(1.0, 6.0))
    def test_triangle_inequality(self, seed, n, p):
        A = random_complex(seed, n)
        B = random_complex(seed + 1, n)
        assert schatten_norm(A + B, p) <= (schatten_norm(A, p) + schatten_norm(B, p)) * (1 + 1e-12)

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 5), p=st.floats(1.0, 6.0))
    def test_unitary_invariance(self, seed, n, p):
        A = random_complex(seed, n)
        U, _ = np.linalg.qr(random_complex(seed + 7, n))
        V, _ = np.linalg.qr(random_complex(seed + 13, n))
        assert schatten_norm(U @ A @ V, p) == pytest.approx(schatten_norm(A, p), rel=1e-10)

    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 5),
           p=st.floats(1.0, 6.0), dp=st.floats(0.0, 6.0))
    def test_nonincreasing_in_p(self, seed, n, p, dp):
        A = random_complex(seed, n)
        norm_p = schatten_norm(A, p)
        assert schatten_norm(A, p + dp) <= norm_p * (1 + 1e-12)
        assert schatten_norm(A, float("inf")) <= norm_p * (1 + 1e-12)


class TestPositiveNegativeParts:
    def test_diagonal(self):
        X, Y = positive_negative_parts(np.diag([2.0, -3.0]))
        assert_allclose(X.matrix, np.diag([2.0, 0.0]), atol=1e-12)
        assert_allclose(Y.matrix, np.diag([0.0, 3.0]), atol=1e-12)

    def test_psd_has_no_negative_part(self):
        _, Y = positive_negative_parts(random_psd(2, 3))
        assert frobenius(Y.matrix) <= 1e-10

    def test_sum_is_absolute_value(self):
        B = random_hermitian(9, 5)
        X, Y = positive_negative_parts(B)
        assert frobenius(X.matrix + Y.matrix - abs_matrix(B).matrix) <= 1e-10 * frobenius(B)
        assert frobenius(X.matrix @ Y.matrix) <= 1e-10 * frobenius(B) ** 2


def test_is_psd():
    assert is_psd(random_psd(4, 3))
    assert not is_psd(np.diag([1.0, -0.5]))
    assert not is_psd([[0, 1], [0, 0]])
