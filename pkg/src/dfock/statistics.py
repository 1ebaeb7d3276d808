"""Photon statistics and quadrature variances of the deformed states.

Two evaluation modes:

* EXACT - every expectation is taken as v^dagger M v over the translated
  standard-Fock vector.  The lambda terms of the quadrature formulas cancel
  algebraically, so coherent states stay at the vacuum variances for any
  deformation.
* BASIS_DIAGONAL - moments come from the distribution
  P(n) = |<n_deformed|state>|^2 and quadrature expectations from the diagonal
  elements of each operator over the non-orthogonal basis.  Because the basis
  is non-orthogonal, sum(P) need not be 1; the raw sum is reported as a
  diagnostic while moments use the normalized view (which keeps the
  distribution-based Mandel parameter at or above its -1 floor).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .basis import DeformedBasis, build_basis
from .fock import (
    DeformationParams,
    OperatorLabel,
    TruncationReport,
    build_operator,
)
from .states import DeformedState


class EvalMode(Enum):
    EXACT = "exact"
    BASIS_DIAGONAL = "diagonal"


@dataclass(frozen=True)
class StatisticsReport:
    mode: EvalMode
    mean_n: float
    var_n: float
    q_mandel: float
    Q_mandel: float
    Q_imag_magnitude: float
    dx2: float
    dp2: float
    distribution: np.ndarray
    raw_prob_sum: float
    truncation: TruncationReport


def _basis_for(state: DeformedState, basis: DeformedBasis | None) -> DeformedBasis:
    if basis is not None and basis.params == state.params and basis.cutoff == state.cutoff:
        return basis
    return build_basis(state.params, state.cutoff)


def distribution(state: DeformedState, basis: DeformedBasis | None = None) -> np.ndarray:
    """Raw P(n) = |<n_deformed|state>|^2 over the deformed index."""
    basis = _basis_for(state, basis)
    amps = basis.basis_matrix.T @ state.fock_vector.coeffs
    p = np.abs(amps) ** 2
    return np.clip(p, 0.0, None)


def _normalized_moments(p: np.ndarray) -> tuple[float, float, float]:
    """(raw sum, normalized first moment, normalized second moment)."""
    n = np.arange(len(p))
    total = float(np.sum(p))
    if total <= 0.0:
        return total, 0.0, 0.0
    return total, float(np.sum(n * p) / total), float(np.sum(n * n * p) / total)


def _exact_number_moments(state: DeformedState) -> tuple[float, float]:
    w = np.abs(state.fock_vector.coeffs) ** 2
    n = np.arange(len(w))
    return float(np.sum(n * w)), float(np.sum(n * n * w))


def mandel_q(
    state: DeformedState,
    mode: EvalMode = EvalMode.BASIS_DIAGONAL,
    basis: DeformedBasis | None = None,
) -> float:
    """Mandel parameter from standard-number moments.

    BASIS_DIAGONAL uses normalized distribution moments; EXACT uses operator
    moments of n = a^dagger a (for which coherent states give 0 regardless of
    the deformation).
    """
    if mode is EvalMode.EXACT:
        mean, second = _exact_number_moments(state)
    else:
        _, mean, second = _normalized_moments(distribution(state, basis))
    if mean <= 1e-12:
        raise DomainError("Mandel parameter undefined at zero mean occupation")
    return (second - mean**2) / mean - 1.0


def mandel_Q(
    state: DeformedState,
    mode: EvalMode = EvalMode.EXACT,
    basis: DeformedBasis | None = None,
) -> tuple[float, float]:
    """Deformed Mandel parameter from the (non-Hermitian) deformed number
    operator; returns (Q, magnitude of the discarded imaginary parts)."""
    if mode is EvalMode.BASIS_DIAGONAL:
        # eigenvalue form: the deformed number operator is diagonal on the
        # deformed basis, so Q coincides with the distribution-based q
        return mandel_q(state, mode, basis), 0.0
    num = build_operator(OperatorLabel.NUMBER_DEF, state.params, state.cutoff).entries
    v = state.fock_vector.coeffs
    nv = num @ v
    mean = complex(np.vdot(v, nv))
    second = complex(np.vdot(v, num @ nv))
    if mean.real <= 0.0:
        raise DomainError("deformed Mandel parameter undefined at zero mean")
    q_val = (second.real - mean.real**2) / mean.real - 1.0
    return q_val, max(abs(mean.imag), abs(second.imag))


def _quadratures_from_expectations(
    params: DeformationParams,
    e_a: complex,
    e_a2: complex,
    e_adag: complex,
    e_adag2: complex,
    e_num_def: complex,
) -> tuple[float, float]:
    l1, l2 = params.lambda1, params.lambda2
    dx2 = 0.5 * (
        1.0
        + (1.0 - 2.0 * l1) * e_a2
        + e_adag2
        + 2.0 * e_num_def
        - 2.0 * l2 * e_a
        - e_a**2
        - e_adag**2
        - 2.0 * e_a * e_adag
    )
    dp2 = 0.5 * (
        1.0
        - (1.0 + 2.0 * l1) * e_a2
        - e_adag2
        + 2.0 * e_num_def
        - 2.0 * l2 * e_a
        + e_a**2
        + e_adag**2
        - 2.0 * e_a * e_adag
    )
    return float(np.real(dx2)), float(np.real(dp2))


def quadrature_variances(
    state: DeformedState,
    mode: EvalMode = EvalMode.EXACT,
    basis: DeformedBasis | None = None,
) -> tuple[float, float]:
    a = build_operator(OperatorLabel.A, None, state.cutoff).entries
    num = build_operator(OperatorLabel.NUMBER_DEF, state.params, state.cutoff).entries
    if mode is EvalMode.EXACT:
        v = state.fock_vector.coeffs
        e_a = complex(np.vdot(v, a @ v))
        e_a2 = complex(np.vdot(v, a @ (a @ v)))
        e_num = complex(np.vdot(v, num @ v))
        return _quadratures_from_expectations(
            state.params, e_a, e_a2, np.conj(e_a), np.conj(e_a2), e_num
        )
    basis = _basis_for(state, basis)
    p = distribution(state, basis)
    total = float(np.sum(p))
    if total > 0.0:
        p = p / total
    b = basis.basis_matrix.astype(complex)
    d_a = np.sum(b.conj() * (a @ b), axis=0)
    d_a2 = np.sum(b.conj() * ((a @ a) @ b), axis=0)
    e_a = complex(np.sum(p * d_a))
    e_a2 = complex(np.sum(p * d_a2))
    # the deformed number operator is diagonal with eigenvalue n on the basis
    e_num = complex(np.sum(p * np.arange(len(p))))
    return _quadratures_from_expectations(
        state.params, e_a, e_a2, np.conj(e_a), np.conj(e_a2), e_num
    )


def compute_statistics(
    state: DeformedState,
    mode: EvalMode = EvalMode.EXACT,
    basis: DeformedBasis | None = None,
) -> StatisticsReport:
    basis = _basis_for(state, basis)
    p = distribution(state, basis)
    s0, s1, s2 = _normalized_moments(p)
    if mode is EvalMode.EXACT:
        mean, second = _exact_number_moments(state)
    else:
        mean, second = s1, s2
    var = second - mean**2
    # the Mandel parameters are undefined at zero (or, for the non-Hermitian
    # deformed number operator, negative) mean occupation; the report carries
    # NaN there while the individual operations keep raising
    try:
        q_val = mandel_q(state, mode, basis)
    except DomainError:
        q_val = math.nan
    try:
        big_q, imag = mandel_Q(state, mode, basis)
    except DomainError:
        big_q, imag = math.nan, math.nan
    dx2, dp2 = quadrature_variances(state, mode, basis)
    return StatisticsReport(
        mode=mode,
        mean_n=mean,
        var_n=var,
        q_mandel=q_val,
        Q_mandel=big_q,
        Q_imag_magnitude=imag,
        dx2=dx2,
        dp2=dp2,
        distribution=p,
        raw_prob_sum=s0,
        truncation=state.truncation,
    )
