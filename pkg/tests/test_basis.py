"""Deformed-basis construction, normalization, ladder actions and overlaps."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfock import (
    DeformationParams,
    basis_column,
    basis_column_oracle,
    build_basis,
    inner_product,
    ladder_check,
    validate_fock_conditions,
    xi,
)
from dfock.basis import deformation_poly
from dfock.errors import DomainError, TruncationError

GRID = [
    DeformationParams(a, b)
    for a in (-0.8, 0.0, 0.5)
    for b in (-1.5, 0.0, 0.7, 2.0)
]

_lam = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


class TestDeformationPoly:
    def test_low_orders_by_hand(self):
        l1, l2 = 0.4, -0.9
        h = deformation_poly(DeformationParams(l1, l2), 4)
        assert h[0] == pytest.approx(1.0)
        assert h[1] == pytest.approx(l2)
        assert h[2] == pytest.approx(l2**2 / 2 + l1 / 2)
        assert h[3] == pytest.approx(l2**3 / 6 + l1 * l2 / 2)
        assert h[4] == pytest.approx(l2**4 / 24 + l1 * l2**2 / 4 + l1**2 / 8)

    @given(_lam, st.floats(min_value=-3.0, max_value=3.0, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_recurrence(self, l1, l2):
        # (m+1) h_{m+1} = l2 h_m + l1 h_{m-1}: independent of the per-term form
        h = deformation_poly(DeformationParams(l1, l2), 20)
        for m in range(1, 20):
            lhs = (m + 1) * h[m + 1]
            rhs = l2 * h[m] + l1 * h[m - 1]
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_zero_deformation_is_delta(self):
        h = deformation_poly(DeformationParams(0.0, 0.0), 6)
        np.testing.assert_allclose(h, np.eye(7)[0], atol=0)


class TestXi:
    @pytest.mark.parametrize("params", GRID, ids=str)
    def test_closed_form_equals_column_norm(self, params):
        b = build_basis(params, 64)
        for n in range(0, 21, 4):
            assert xi(n, params) == pytest.approx(b.xi[n], rel=1e-10)

    def test_low_orders_by_hand(self):
        # the generator annihilates |0>, so xi_0 = 1 for any deformation;
        # at l1 = 0, column 1 is |1> + l2 |0> before normalization
        for params in GRID:
            assert xi(0, params) == pytest.approx(1.0, rel=1e-12)
        for l2 in (0.5, 1.0, 2.0):
            assert xi(1, DeformationParams(0.0, l2)) == pytest.approx(
                1.0 / math.sqrt(1.0 + l2 * l2), rel=1e-12
            )

    def test_negative_index_rejected(self):
        with pytest.raises(DomainError):
            xi(-1, DeformationParams(0.1, 0.1))


class TestBasisColumns:
    @pytest.mark.parametrize("params", GRID, ids=str)
    def test_closed_form_matches_exponential_oracle(self, params):
        for n in (0, 3, 11, 20):
            closed = basis_column(n, params, 64)
            oracle = basis_column_oracle(n, params, 64)
            assert np.max(np.abs(closed.coeffs - oracle.coeffs)) < 1e-10

    def test_columns_unit_norm(self):
        b = build_basis(DeformationParams(0.6, -1.2), 64)
        norms = np.linalg.norm(b.basis_matrix, axis=0)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_trivial_params_give_standard_basis(self):
        b = build_basis(DeformationParams(0.0, 0.0), 32)
        np.testing.assert_allclose(
            b.basis_matrix, np.eye(33)[:, : b.n_basis + 1], atol=0
        )
        np.testing.assert_allclose(b.xi, 1.0, atol=0)

    def test_index_too_close_to_cutoff_rejected(self):
        with pytest.raises(TruncationError):
            basis_column(60, DeformationParams(0.1, 0.1), 64)

    def test_column_support_ends_at_own_index(self):
        b = build_basis(DeformationParams(0.3, 0.9), 32)
        for n in (0, 5, 20):
            assert np.all(b.basis_matrix[n + 1 :, n] == 0.0)


class TestInnerProduct:
    @pytest.mark.parametrize("params", GRID, ids=str)
    def test_closed_form_matches_vector_dot(self, params):
        b = build_basis(params, 64)
        for m in (0, 2, 7):
            for n in (0, 5, 12):
                direct = float(
                    np.real(np.vdot(b.basis_matrix[:, m], b.basis_matrix[:, n]))
                )
                assert inner_product(m, n, params) == pytest.approx(
                    direct, abs=1e-10
                )

    def test_symmetric_and_unit_diagonal(self):
        params = DeformationParams(-0.4, 1.1)
        assert inner_product(3, 8, params) == pytest.approx(
            inner_product(8, 3, params), rel=1e-12
        )
        assert inner_product(5, 5, params) == pytest.approx(1.0, abs=1e-12)

    def test_basis_is_genuinely_non_orthogonal(self):
        assert abs(inner_product(0, 1, DeformationParams(0.0, 1.0))) > 0.1


class TestLadderActions:
    @pytest.mark.parametrize("params", GRID, ids=str)
    def test_lowering_and_raising_residuals(self, params):
        for n in (1, 4, 9):
            down, up = ladder_check(n, params)
            assert down < 1e-10
            assert up < 1e-10


class TestGram:
    def test_positive_definite_moderate_block(self):
        for params in GRID:
            g = build_basis(params, 64).gram(13)
            min_eig = np.min(np.linalg.eigvalsh((g + g.T) / 2))
            assert min_eig > -1e-12


class TestLaguerreLimit:
    def test_xi_reduces_to_laguerre_at_lambda1_zero(self):
        # xi_n(0, l2) * sqrt(L_n(-l2^2)) = 1
        from numpy.polynomial.laguerre import lagval

        for l2 in (0.5, 1.0, 2.0, 5.0):
            params = DeformationParams(0.0, l2)
            for n in range(0, 31):
                c = np.zeros(n + 1)
                c[n] = 1.0
                lag = lagval(-l2 * l2, c)
                assert abs(xi(n, params) * math.sqrt(lag) - 1.0) < 1e-10


class TestFockConditions:
    @pytest.mark.parametrize("params", GRID, ids=str)
    def test_all_conditions_hold(self, params):
        report = validate_fock_conditions(params, 64)
        failed = [c.name for c in report.checks if not c.passed]
        assert not failed, failed
