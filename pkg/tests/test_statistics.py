"""Photon statistics and quadrature variances in both evaluation modes."""

from __future__ import annotations

import math

import numpy as np
import pytest

from dfock import (
    DeformationParams,
    EvalMode,
    build_coherent,
    build_squeezed,
    compute_statistics,
    distribution,
    mandel_Q,
    mandel_q,
    quadrature_variances,
)
from dfock.errors import DomainError

PARAMS_GRID = [
    DeformationParams(a, b)
    for a in (-0.8, -0.2, 0.0, 0.3)
    for b in (-1.0, 0.0, 0.7)
]


class TestTrivialLimit:
    def test_coherent_distribution_is_poisson(self):
        alpha = 1.3
        state = build_coherent(alpha, DeformationParams(0.0, 0.0), 64)
        p = distribution(state)
        mean = alpha**2
        expected = np.array(
            [math.exp(-mean) * mean**n / math.factorial(n) for n in range(20)]
        )
        assert np.max(np.abs(p[:20] - expected)) < 1e-12

    def test_coherent_mandel_q_vanishes_in_both_modes(self):
        state = build_coherent(1.5, DeformationParams(0.0, 0.0), 64)
        assert abs(mandel_q(state, EvalMode.EXACT)) < 1e-10
        assert abs(mandel_q(state, EvalMode.BASIS_DIAGONAL)) < 1e-10

    def test_modes_agree_on_number_statistics(self):
        state = build_coherent(1.1 + 0.4j, DeformationParams(0.0, 0.0), 64)
        exact = compute_statistics(state, EvalMode.EXACT)
        diag = compute_statistics(state, EvalMode.BASIS_DIAGONAL)
        assert exact.mean_n == pytest.approx(diag.mean_n, abs=1e-10)
        assert exact.var_n == pytest.approx(diag.var_n, abs=1e-10)
        assert exact.q_mandel == pytest.approx(diag.q_mandel, abs=1e-10)


class TestVacuum:
    def test_distribution_concentrated_at_zero(self):
        state = build_coherent(0.0, DeformationParams(0.0, 0.0), 64)
        p = distribution(state)
        assert p[0] == pytest.approx(1.0)
        assert float(np.sum(p[1:])) < 1e-20

    def test_mandel_q_undefined(self):
        state = build_coherent(0.0, DeformationParams(0.0, 0.0), 64)
        with pytest.raises(DomainError):
            mandel_q(state, EvalMode.EXACT)


class TestExactCoherent:
    @pytest.mark.parametrize("params", PARAMS_GRID, ids=str)
    def test_quadratures_stay_at_vacuum_level(self, params):
        for alpha in (0.8, 2.0, 1.0 + 0.5j):
            state = build_coherent(alpha, params, 64)
            dx2, dp2 = quadrature_variances(state, EvalMode.EXACT)
            assert dx2 == pytest.approx(0.5, abs=1e-10)
            assert dp2 == pytest.approx(0.5, abs=1e-10)

    @pytest.mark.parametrize("params", PARAMS_GRID, ids=str)
    def test_deformed_number_mean_closed_form(self, params):
        alpha = 1.4
        state = build_coherent(alpha, params, 64)
        l1, l2 = params.lambda1, params.lambda2
        mean = alpha**2 * (1.0 + l1) + l2 * alpha
        if mean <= 0.0:
            with pytest.raises(DomainError):
                mandel_Q(state, EvalMode.EXACT)
            return
        q_val, imag = mandel_Q(state, EvalMode.EXACT)
        assert q_val == pytest.approx(l1 * alpha**2 / mean, abs=1e-9)
        assert imag < 1e-9

    def test_mandel_Q_zero_only_without_lambda1(self):
        state = build_coherent(1.2, DeformationParams(0.0, 0.8), 64)
        q_val, _ = mandel_Q(state, EvalMode.EXACT)
        assert abs(q_val) < 1e-10
        state = build_coherent(1.2, DeformationParams(0.3, 0.8), 64)
        q_val, _ = mandel_Q(state, EvalMode.EXACT)
        assert abs(q_val) > 1e-3


class TestDiagonalMode:
    @pytest.mark.parametrize("params", PARAMS_GRID, ids=str)
    def test_Q_coincides_with_q(self, params):
        state = build_coherent(1.1, params, 64)
        q_val = mandel_q(state, EvalMode.BASIS_DIAGONAL)
        big_q, imag = mandel_Q(state, EvalMode.BASIS_DIAGONAL)
        assert big_q == q_val
        assert imag == 0.0

    @pytest.mark.parametrize("params", PARAMS_GRID, ids=str)
    def test_Q_respects_lower_bound(self, params):
        for alpha in (0.8, 1.6):
            state = build_coherent(alpha, params, 64)
            big_q, _ = mandel_Q(state, EvalMode.BASIS_DIAGONAL)
            assert big_q >= -1.0 - 1e-12

    def test_raw_sum_reported_and_differs_from_one(self):
        state = build_coherent(1.2, DeformationParams(0.4, 0.8), 64)
        report = compute_statistics(state, EvalMode.BASIS_DIAGONAL)
        assert report.raw_prob_sum > 0.0
        assert abs(report.raw_prob_sum - 1.0) > 1e-3  # basis is non-orthogonal


class TestSqueezedStatistics:
    def test_standard_squeezed_vacuum_saturates_heisenberg(self):
        for eta in (0.3, 0.6):
            state = build_squeezed(eta, DeformationParams(0.0, 0.0), 96)
            dx2, dp2 = quadrature_variances(state, EvalMode.EXACT)
            assert dx2 * dp2 == pytest.approx(0.25, abs=1e-9)
            assert min(dx2, dp2) < 0.5

    def test_deformed_squeezed_exact_product_stays_minimal(self):
        state = build_squeezed(0.3, DeformationParams(0.2, 0.5), 128)
        dx2, dp2 = quadrature_variances(state, EvalMode.EXACT)
        assert dx2 * dp2 == pytest.approx(0.25, abs=1e-8)


class TestDegenerateMeans:
    def test_report_carries_nan_instead_of_raising(self):
        # deformed number mean is negative here; the report degrades gracefully
        state = build_coherent(0.8, DeformationParams(-0.8, -2.0), 64)
        report = compute_statistics(state, EvalMode.EXACT)
        assert math.isnan(report.Q_mandel)
        assert math.isfinite(report.mean_n)
