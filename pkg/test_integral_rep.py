"""
Tests for the quadrature of the integral representation of C^p.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from trace_rearrange.ensembles import EnsembleKind, EnsembleSpec, sample
from trace_rearrange.errors import BadExponent, ConfigError, DomainError, SingularMatrix, TruncationError
from trace_rearrange.integral_rep import (
    QuadratureConfig,
    kp_closed_form,
    kp_constant,
    matrix_power_via_integral,
    nodes_and_weights,
    relative_error_vs_spectral,
    scalar_power_via_integral,
)


class TestNormalization:
    def test_kp_at_three_halves(self):
        assert kp_constant(1.5) == pytest.approx(1 / math.pi, rel=1e-8)

    @pytest.mark.parametrize("p", [1.1, 1.25, 1.5, 1.75, 1.9])
    def test_kp_matches_closed_form(self, p):
        assert kp_constant(p) == pytest.approx(kp_closed_form(p), rel=1e-8)

    @pytest.mark.parametrize("p", [1.0, 2.0, 0.5, 2.5, "x"])
    def test_bad_exponent(self, p):
        with pytest.raises(BadExponent):
            kp_constant(p)


class TestMatrixPower:
    def test_identity(self):
        assert_allclose(matrix_power_via_integral(np.eye(3), 1.5), np.eye(3), atol=1e-8)

    def test_diagonal(self):
        result = matrix_power_via_integral(np.diag([4.0, 1.0]), 1.5)
        assert_allclose(result, np.diag([8.0, 1.0]), atol=1e-6)

    def test_random_positive_definite(self):
        (C,) = sample(EnsembleSpec(EnsembleKind.POSITIVE_DEFINITE, 4, seed=73))
        assert relative_error_vs_spectral(C, 1.25) <= 1e-6

    def test_result_is_hermitian(self):
        (C,) = sample(EnsembleSpec(EnsembleKind.POSITIVE_DEFINITE, 3, seed=5))
        result = matrix_power_via_integral(C, 1.75)
        assert_allclose(result, result.conj().T, atol=0)

    @settings(max_examples=15, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 4), p=st.floats(1.1, 1.9))
    def test_commutes_with_unitary_conjugation(self, seed, n, p):
        (C,) = sample(EnsembleSpec(EnsembleKind.POSITIVE_DEFINITE, n, seed=seed))
        (U,) = sample(EnsembleSpec(EnsembleKind.UNITARY, n, seed=seed, stream=1))
        rotated = matrix_power_via_integral(U @ C @ U.conj().T, p)
        expected = U @ matrix_power_via_integral(C, p) @ U.conj().T
        assert np.linalg.norm(rotated - expected) <= 1e-8 * np.linalg.norm(expected)

    def test_scalar_form(self):
        assert scalar_power_via_integral(9.0, 1.5) == pytest.approx(27.0, rel=1e-7)

    def test_scalar_domain(self):
        with pytest.raises(DomainError):
            scalar_power_via_integral(-1.0, 1.5)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            matrix_power_via_integral(np.diag([1.0, 0.0]), 1.5)

    def test_bad_exponent(self):
        with pytest.raises(BadExponent):
            matrix_power_via_integral(np.eye(2), 2.0)


class TestQuadratureConfig:
    def test_narrow_range_truncates(self):
        with pytest.raises(TruncationError):
            matrix_power_via_integral(np.eye(2), 1.5, QuadratureConfig(u_min=-5.0, u_max=5.0))

    def test_range_must_bracket_spectrum(self):
        with pytest.raises(TruncationError):
            matrix_power_via_integral(np.eye(2), 1.5, QuadratureConfig(u_min=1.0, u_max=40.0))

    @pytest.mark.parametrize("kwargs", [
        {"panels": 2},
        {"order": 0},
        {"u_min": 5.0, "u_max": -5.0},
        {"target_rel_error": 0.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            QuadratureConfig(**kwargs)

    def test_nodes_increase(self):
        u, w = nodes_and_weights(QuadratureConfig(panels=8, order=4))
        assert u.size == 32
        assert np.all(np.diff(u) > 0)
        assert w.sum() == pytest.approx(80.0)

    def test_refinement_reduces_error(self):
        C = np.diag([4.0, 0.25])
        errors = [relative_error_vs_spectral(C, 1.5, QuadratureConfig(panels=n, order=2))
                  for n in (32, 64, 128)]
        assert errors[2] < errors[0]
        assert errors[2] <= 1e-2
