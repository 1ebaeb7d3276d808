"""Truncated-Fock-space primitives: factorials, operators, exponentials."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm as scipy_expm

from dfock import (
    DeformationParams,
    FockVector,
    OperatorLabel,
    build_operator,
    log_double_factorial,
    log_factorial,
    matrix_exponential,
)
from dfock.errors import DomainError, UsageError
from dfock.fock import annihilation_matrix, commutator, interior_block


def _exact_log_factorial(n: int) -> float:
    return math.log(math.factorial(n)) if n > 0 else 0.0


def _exact_double_factorial(n: int) -> int:
    result = 1
    for k in range(n, 0, -2):
        result *= k
    return result


class TestLogFactorial:
    def test_matches_integer_factorial(self):
        for n in range(0, 171):
            assert log_factorial(n) == pytest.approx(
                _exact_log_factorial(n), rel=1e-13, abs=1e-13
            )

    @given(st.integers(min_value=0, max_value=400))
    @settings(max_examples=60, deadline=None)
    def test_ratio_identity(self, n):
        # log(n!) - log((n-1)!) = log(n)
        if n == 0:
            assert log_factorial(0) == 0.0
        else:
            assert log_factorial(n) - log_factorial(n - 1) == pytest.approx(
                math.log(n), rel=1e-12, abs=1e-12
            )

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            log_factorial(-1)


class TestLogDoubleFactorial:
    def test_matches_integer_double_factorial(self):
        for n in range(-1, 40):
            expected = math.log(_exact_double_factorial(n)) if n > 0 else 0.0
            assert log_double_factorial(n) == pytest.approx(
                expected, rel=1e-12, abs=1e-12
            )

    def test_minus_one_is_zero(self):
        assert log_double_factorial(-1) == 0.0


class TestDeformationParams:
    def test_trivial_flag(self):
        assert DeformationParams(0.0, 0.0).is_trivial
        assert not DeformationParams(0.1, 0.0).is_trivial

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            DeformationParams(math.nan, 0.0)
        with pytest.raises(DomainError):
            DeformationParams(0.0, math.inf)


class TestFockVector:
    def test_norm_and_dot(self):
        v = FockVector(np.array([3.0, 4.0j, 0.0]), 2)
        assert v.norm == pytest.approx(5.0)
        w = v.normalized()
        assert w.norm == pytest.approx(1.0)
        assert complex(w.dot(w)) == pytest.approx(1.0)

    def test_length_must_match_cutoff(self):
        with pytest.raises(UsageError):
            FockVector(np.zeros(3, dtype=complex), 5)


class TestOperators:
    def test_annihilation_entries(self):
        a = annihilation_matrix(5)
        for n in range(1, 6):
            assert a[n - 1, n] == pytest.approx(math.sqrt(n))
        assert np.count_nonzero(a) == 5

    def test_deformed_raising_combines_three_terms(self):
        params = DeformationParams(0.3, 0.7)
        adag_def = build_operator(OperatorLabel.ADAG_DEF, params, 8).entries
        a = annihilation_matrix(8)
        expected = a.T + 0.3 * a + 0.7 * np.eye(9)
        np.testing.assert_allclose(adag_def, expected, atol=1e-15)

    def test_hamiltonian_is_deformed_number_plus_half(self):
        params = DeformationParams(-0.2, 0.4)
        ham = build_operator(OperatorLabel.HAMILTONIAN_DEF, params, 8).entries
        num = build_operator(OperatorLabel.NUMBER_DEF, params, 8).entries
        np.testing.assert_allclose(ham, num + 0.5 * np.eye(9), atol=1e-15)

    def test_canonical_commutator_interior(self):
        params = DeformationParams(0.5, -1.0)
        a = build_operator(OperatorLabel.A, None, 32)
        adag_def = build_operator(OperatorLabel.ADAG_DEF, params, 32)
        resid = commutator(a, adag_def) - np.eye(33)
        assert np.max(np.abs(interior_block(resid))) < 1e-12

    def test_quadrature_operators_hermitian(self):
        for label in (OperatorLabel.X, OperatorLabel.P):
            m = build_operator(label, None, 16).entries
            np.testing.assert_allclose(m, m.conj().T, atol=1e-15)


class TestMatrixExponential:
    def test_nilpotent_matches_scipy(self):
        rng = np.random.default_rng(7)
        g = np.triu(rng.normal(size=(12, 12)), k=1)
        ours = matrix_exponential(g).entries
        np.testing.assert_allclose(ours, scipy_expm(g), atol=1e-12)

    def test_general_matches_scipy(self):
        rng = np.random.default_rng(11)
        g = rng.normal(size=(10, 10)) * 0.3
        ours = matrix_exponential(g).entries
        np.testing.assert_allclose(ours, scipy_expm(g), atol=1e-12)

    def test_identity_at_zero(self):
        np.testing.assert_allclose(
            matrix_exponential(np.zeros((6, 6))).entries, np.eye(6), atol=0
        )
