"""Coherent and squeezed states over the deformed basis.

A state is stored twice: as coefficients over the deformed-basis index and as
the translated standard-Fock vector (basis_matrix @ coefficients).  Coherent
states are annihilation-operator eigenstates and coincide with canonical
coherent states up to the phase exp[i((1/2) lambda1 Im(alpha^2)
+ lambda2 Im(alpha))]; squeezed states are annihilated by
a - eta * adag_def and genuinely differ from canonical squeezed vacua.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NormalizationError, RangeError, TruncationError
from .basis import DeformedBasis, build_basis, deformation_poly
from .fock import (
    DEFAULT_CUTOFF,
    GUARD_BAND,
    TAIL_TOL,
    DeformationParams,
    FockVector,
    OperatorLabel,
    TruncationReport,
    build_operator,
    log_factorial,
    log_double_factorial,
)

# relative squared-weight threshold for the adaptive expansion length
# (1e-20 in squared mass keeps trailing amplitudes near 1e-10)
_SERIES_TAIL = 1e-20

# The squeezed expansion over the deformed basis converges only while
# |eta| * exp(|lambda1|) < 1 (the deformed column norms grow like
# exp(|lambda1| n / 2)), and slowly near that edge, so squeezed builds carry
# a looser default convergence tolerance than coherent ones.
SQUEEZED_TAIL_TOL = 1e-3


class StateKind(Enum):
    COHERENT = "coherent"
    SQUEEZED = "squeezed"


@dataclass(frozen=True)
class DeformedState:
    kind: StateKind
    label: complex  # alpha for coherent, eta for squeezed
    params: DeformationParams
    deformed_coeffs: np.ndarray
    fock_vector: FockVector
    norm_constant: float
    truncation: TruncationReport

    @property
    def cutoff(self) -> int:
        return self.fock_vector.cutoff


def _tail_report(v: np.ndarray, cutoff: int, guard_band: int, tail_tol: float) -> TruncationReport:
    tail = float(np.sum(np.abs(v[cutoff + 1 - guard_band:]) ** 2))
    return TruncationReport(cutoff=cutoff, tail_mass=tail, guard_band=guard_band, tail_tol=tail_tol)


def _series_length(weights: np.ndarray, guard_band: int) -> int:
    """Smallest length whose trailing guard band carries < _SERIES_TAIL of the
    total squared weight; falls back to the full length."""
    total = float(np.sum(weights**2))
    if total == 0.0:
        return 1
    suffix = np.cumsum(weights[::-1] ** 2)[::-1]
    for n_terms in range(guard_band, len(weights) + 1):
        lo = n_terms - guard_band
        if suffix[lo] < _SERIES_TAIL * total:
            return n_terms
    return len(weights)


def coherent_phase(alpha: complex, params: DeformationParams) -> float:
    """Phase by which the deformed coherent state differs from the canonical one."""
    return 0.5 * params.lambda1 * (alpha**2).imag + params.lambda2 * alpha.imag


def canonical_coherent_vector(alpha: complex, cutoff: int) -> FockVector:
    n = np.arange(cutoff + 1)
    lf = np.array([log_factorial(int(k)) for k in n])
    if alpha == 0:
        coeffs = np.zeros(cutoff + 1, dtype=complex)
        coeffs[0] = 1.0
        return FockVector(coeffs, cutoff)
    logmag = n * math.log(abs(alpha)) - 0.5 * lf - 0.5 * abs(alpha) ** 2
    phase = np.exp(1j * n * cmath.phase(alpha))
    return FockVector(np.exp(logmag) * phase, cutoff)


def build_coherent(
    alpha: complex,
    params: DeformationParams,
    cutoff: int = DEFAULT_CUTOFF,
    tail_tol: float = TAIL_TOL,
    basis: DeformedBasis | None = None,
) -> DeformedState:
    alpha = complex(alpha)
    if basis is None:
        basis = build_basis(params, cutoff)
    elif basis.params != params or basis.cutoff != cutoff:
        basis = build_basis(params, cutoff)

    log_c0 = (
        -0.5 * params.lambda1 * (alpha**2).real
        - params.lambda2 * alpha.real
        - 0.5 * abs(alpha) ** 2
    )
    if not -745.0 < log_c0 < 709.0:  # double exp() under/overflow bounds
        raise RangeError(
            "coherent normalization constant outside double range",
            lambda1=params.lambda1, lambda2=params.lambda2,
        )
    c0 = math.exp(log_c0)

    n = np.arange(basis.n_basis + 1)
    lf = np.array([log_factorial(int(k)) for k in n])
    with np.errstate(divide="ignore"):
        logmag = np.where(
            n == 0,
            log_c0,
            log_c0 + n * np.log(np.maximum(abs(alpha), np.finfo(float).tiny))
            - 0.5 * lf - basis.log_xi,
        )
    if alpha == 0:
        coeffs = np.zeros(basis.n_basis + 1, dtype=complex)
        coeffs[0] = c0
    else:
        coeffs = np.exp(logmag) * np.exp(1j * n * cmath.phase(alpha))
    if not np.all(np.isfinite(coeffs.view(float))):
        raise RangeError(
            "coherent coefficients overflowed",
            lambda1=params.lambda1, lambda2=params.lambda2,
        )

    # Convergence is judged on the expansion weights: the translated vector's
    # top rows are structurally zero (columns reach only row n_basis), so only
    # the relative trailing mass of the series can expose truncation.
    weights_sq = np.abs(coeffs) ** 2
    series_tail = float(
        np.sum(weights_sq[-basis.guard_band:]) / np.sum(weights_sq)
    )

    n_terms = _series_length(np.abs(coeffs), basis.guard_band)
    coeffs = coeffs[:n_terms].copy()
    fock = basis.basis_matrix[:, :n_terms].astype(complex) @ coeffs

    fock_report = _tail_report(fock, cutoff, basis.guard_band, tail_tol)
    report = TruncationReport(
        cutoff=cutoff,
        tail_mass=max(fock_report.tail_mass, series_tail),
        guard_band=basis.guard_band,
        tail_tol=tail_tol,
    )
    if not report.converged:
        raise TruncationError(
            f"coherent state alpha={alpha} not converged at cutoff {cutoff}",
            report=report,
        )
    return DeformedState(
        kind=StateKind.COHERENT,
        label=alpha,
        params=params,
        deformed_coeffs=coeffs,
        fock_vector=FockVector(fock, cutoff),
        norm_constant=c0,
        truncation=report,
    )


def coherent_overlap(
    alpha: complex,
    beta: complex,
    params: DeformationParams,
    max_order: int = DEFAULT_CUTOFF - GUARD_BAND,
) -> complex:
    """Closed-form double series for <alpha, params | beta, params>.

    The series runs over conj(alpha)^m beta^n with the per-order kernels
    h folded in; the diagonal beta = alpha case reduces to the single-label
    normalization identity.
    """
    alpha, beta = complex(alpha), complex(beta)
    log_n = (
        -0.5 * params.lambda1 * ((alpha**2).real + (beta**2).real)
        - params.lambda2 * (alpha.real + beta.real)
        - 0.5 * (abs(alpha) ** 2 + abs(beta) ** 2)
    )
    h = deformation_poly(params, max_order)
    inv_fact = np.exp(-np.array([log_factorial(k) for k in range(max_order + 1)]))

    # sum_{m,n} conj(a)^m b^n sum_r h_{m-r} h_{n-r} / r!
    # regrouped over r: (1/r!) * (sum_j conj(a)^{r+j} h_j) * (sum_j b^{r+j} h_j)
    powers_a = np.conj(alpha) ** np.arange(max_order + 1)
    powers_b = beta ** np.arange(max_order + 1)
    sa = np.array(
        [np.sum(powers_a[r:] * h[: max_order + 1 - r]) for r in range(max_order + 1)]
    )
    sb = np.array(
        [np.sum(powers_b[r:] * h[: max_order + 1 - r]) for r in range(max_order + 1)]
    )
    partial = np.cumsum(inv_fact * sa * sb)
    if not np.all(np.isfinite(partial.view(float))):
        raise TruncationError(
            f"overlap series diverged below order {max_order}"
        )
    return complex(math.exp(log_n) * partial[-1])


def phase_identity_check(
    alpha: complex,
    params: DeformationParams,
    cutoff: int = DEFAULT_CUTOFF,
) -> tuple[float, float]:
    """(fidelity, phase residual) against the canonical coherent state."""
    state = build_coherent(alpha, params, cutoff)
    canonical = canonical_coherent_vector(alpha, cutoff)
    ov = canonical.dot(state.fock_vector)
    fidelity = abs(ov)
    expected = coherent_phase(complex(alpha), params)
    delta = cmath.phase(ov * cmath.exp(-1j * expected))
    return fidelity, abs(delta)


def evolve_coherent(state: DeformedState, t: float) -> DeformedState:
    """Free evolution: rotate the label and attach the ground-energy phase."""
    if state.kind is not StateKind.COHERENT:
        raise DomainError("evolve_coherent expects a coherent state")
    rotated = build_coherent(
        complex(state.label) * cmath.exp(-1j * t),
        state.params,
        state.cutoff,
        tail_tol=state.truncation.tail_tol,
    )
    phase = cmath.exp(-0.5j * t)
    return DeformedState(
        kind=rotated.kind,
        label=rotated.label,
        params=rotated.params,
        deformed_coeffs=rotated.deformed_coeffs * phase,
        fock_vector=FockVector(rotated.fock_vector.coeffs * phase, rotated.cutoff),
        norm_constant=rotated.norm_constant,
        truncation=rotated.truncation,
    )


def build_squeezed(
    eta: complex,
    params: DeformationParams,
    cutoff: int = DEFAULT_CUTOFF,
    tail_tol: float = SQUEEZED_TAIL_TOL,
    basis: DeformedBasis | None = None,
) -> DeformedState:
    eta = complex(eta)
    if abs(eta) >= 1.0:
        raise DomainError(f"squeezing label |eta| = {abs(eta)} outside the unit disk")
    if basis is None:
        basis = build_basis(params, cutoff)
    elif basis.params != params or basis.cutoff != cutoff:
        basis = build_basis(params, cutoff)

    n_even = basis.n_basis // 2  # highest deformed index used is 2*n_even
    k = np.arange(n_even + 1)
    # sqrt((2k-1)!! / (2k)!!)
    log_w = 0.5 * np.array(
        [log_double_factorial(2 * int(j) - 1) - log_double_factorial(2 * int(j)) for j in k]
    )
    if eta == 0:
        unnorm = np.zeros(n_even + 1, dtype=complex)
        unnorm[0] = math.exp(-float(basis.log_xi[0]))
    else:
        unnorm = np.exp(
            k * math.log(abs(eta)) + log_w - basis.log_xi[2 * k]
        ) * np.exp(1j * k * cmath.phase(eta))
    if not np.all(np.isfinite(unnorm.view(float))):
        raise RangeError(
            "squeezed coefficients overflowed",
            lambda1=params.lambda1, lambda2=params.lambda2,
        )

    # Convergence is judged on the expansion weights themselves: the translated
    # vector's top rows are structurally zero (columns reach only row n_basis),
    # so only the relative trailing mass of the series can expose a truncated
    # or divergent expansion.
    guard_s = max(1, basis.guard_band // 2)
    weights_sq = np.abs(unnorm) ** 2
    series_tail = float(np.sum(weights_sq[-guard_s:]) / np.sum(weights_sq))

    n_terms = _series_length(np.abs(unnorm), guard_s)
    unnorm = unnorm[:n_terms]
    fock_unnorm = basis.basis_matrix[:, 2 * k[:n_terms]].astype(complex) @ unnorm
    norm = float(np.linalg.norm(fock_unnorm))
    if not math.isfinite(norm) or norm <= 0.0:
        raise NormalizationError(
            f"squeezed state normalization is {norm} at eta={eta}, params={params}"
        )
    c0 = 1.0 / norm
    fock = fock_unnorm * c0

    coeffs = np.zeros(2 * (n_terms - 1) + 1, dtype=complex)
    coeffs[::2] = unnorm * c0

    fock_report = _tail_report(fock, cutoff, basis.guard_band, tail_tol)
    report = TruncationReport(
        cutoff=cutoff,
        tail_mass=max(fock_report.tail_mass, series_tail),
        guard_band=basis.guard_band,
        tail_tol=tail_tol,
    )
    if not report.converged:
        raise TruncationError(
            f"squeezed state eta={eta} not converged at cutoff {cutoff}", report=report
        )
    return DeformedState(
        kind=StateKind.SQUEEZED,
        label=eta,
        params=params,
        deformed_coeffs=coeffs,
        fock_vector=FockVector(fock, cutoff),
        norm_constant=c0,
        truncation=report,
    )


def squeezed_expansion_cutoff(
    eta: complex,
    params: DeformationParams,
    rel_tail: float = 1e-10,
    max_cutoff: int = 1024,
) -> int | None:
    """Estimated cutoff at which the squeezed expansion's trailing terms fall
    below ``rel_tail`` of their peak.

    The k-th term of the expansion carries |eta|^k / xi_{2k}, and the column
    norms grow like exp(|lambda1| k + |lambda2| sqrt(2k)), so the log term
    magnitude is modelled as f(k) = k (ln|eta| + |lambda1|) + |lambda2| sqrt(2k).
    Returns None when no cutoff up to ``max_cutoff`` suffices (the expansion
    diverges, or converges too slowly to be usable in doubles).
    """
    r = abs(complex(eta))
    if r == 0.0:
        return DEFAULT_CUTOFF
    slope = math.log(r) + abs(params.lambda1)
    if slope >= 0.0:
        return None

    def f(k: float) -> float:
        return slope * k + abs(params.lambda2) * math.sqrt(2.0 * k)

    k_peak = abs(params.lambda2) ** 2 / (2.0 * slope**2)
    f_max = f(k_peak) if k_peak > 0 else 0.0
    target = f_max + math.log(rel_tail)
    for k in range(max(1, math.ceil(k_peak)), max_cutoff // 2 + 1):
        if f(float(k)) <= target:
            cutoff = 2 * k + GUARD_BAND
            return max(DEFAULT_CUTOFF, cutoff)
    return None


def squeezed_defining_residual(state: DeformedState) -> float:
    """Interior-block norm of (a - eta * adag_def) applied to the state.

    The top guard-band rows of the truncated ladder action are excluded; they
    are dominated by truncation junk for any finitely supported vector.
    """
    if state.kind is not StateKind.SQUEEZED:
        raise DomainError("defining residual is for squeezed states")
    cutoff = state.cutoff
    a = build_operator(OperatorLabel.A, None, cutoff).entries
    adag_def = build_operator(OperatorLabel.ADAG_DEF, state.params, cutoff).entries
    res = (a - complex(state.label) * adag_def) @ state.fock_vector.coeffs
    interior = cutoff + 1 - state.truncation.guard_band
    return float(np.linalg.norm(res[:interior]))


def coherent_eigen_residual(state: DeformedState) -> float:
    """Norm of (a - alpha) applied to a coherent state, interior block."""
    if state.kind is not StateKind.COHERENT:
        raise DomainError("eigen residual is for coherent states")
    cutoff = state.cutoff
    a = build_operator(OperatorLabel.A, None, cutoff).entries
    res = a @ state.fock_vector.coeffs - complex(state.label) * state.fock_vector.coeffs
    interior = cutoff + 1 - state.truncation.guard_band
    return float(np.linalg.norm(res[:interior]))


def squeezed_norm_series(
    eta: complex, params: DeformationParams, max_order: int
) -> float:
    """Cross-check value of the squeezed normalization constant from the
    explicit double series (cancellation-prone for negative lambda; the
    builder derives C0 from the translated vector's norm instead)."""
    eta = complex(eta)
    h = deformation_poly(params, 2 * max_order)
    total = 0.0 + 0.0j
    for n in range(max_order + 1):
        for m in range(max_order + 1):
            ldf = log_double_factorial(2 * n - 1) + log_double_factorial(2 * m - 1)
            inner = math.fsum(
                h[2 * m - r] * h[2 * n - r] * math.exp(ldf - log_factorial(r))
                for r in range(min(2 * m, 2 * n) + 1)
            )
            total += (eta**n) * (np.conj(eta) ** m) * inner
    value = total.real
    if value <= 0.0 or not math.isfinite(value):
        raise NormalizationError(f"norm series evaluated to {value}")
    return value ** -0.5


def identity_resolution_residual(
    params: DeformationParams,
    grid_radius: float = 6.0,
    grid_points: int = 128,
    cutoff: int = 160,
    n_check: int = 8,
) -> float:
    """Max entry deviation from the identity of (1/pi) * integral of
    |alpha><alpha| over the disk of radius ``grid_radius``.

    Gauss-Legendre radially, uniform angularly; only the n <= n_check block is
    examined (the guard keeps canonical tail mass at the rim negligible).
    """
    basis = build_basis(params, cutoff)
    nodes, weights = np.polynomial.legendre.leggauss(grid_points)
    rho = 0.5 * grid_radius * (nodes + 1.0)
    w_r = 0.5 * grid_radius * weights * rho
    theta = 2.0 * math.pi * np.arange(grid_points) / grid_points
    w_t = 2.0 * math.pi / grid_points

    alphas = rho[:, None] * np.exp(1j * theta[None, :])
    alphas = alphas.ravel()
    w = (w_r[:, None] * np.full((1, grid_points), w_t)).ravel() / math.pi

    # vectorized coherent build over the grid; entrywise identical to
    # build_coherent (same basis matrix, same coefficient formula)
    n = np.arange(basis.n_basis + 1)
    lf = np.array([log_factorial(int(k)) for k in n])
    log_c0 = (
        -0.5 * params.lambda1 * (alphas**2).real
        - params.lambda2 * alphas.real
        - 0.5 * np.abs(alphas) ** 2
    )
    mags = np.abs(alphas)
    mags[mags == 0.0] = np.finfo(float).tiny
    logmag = log_c0[None, :] + n[:, None] * np.log(mags)[None, :] - 0.5 * lf[:, None] \
        - basis.log_xi[:, None]
    coeffs = np.exp(logmag) * np.exp(1j * n[:, None] * np.angle(alphas)[None, :])
    vectors = basis.basis_matrix.astype(complex) @ coeffs

    block = vectors[: n_check + 1, :]
    resolved = (block * w[None, :]) @ block.conj().T
    return float(np.max(np.abs(resolved - np.eye(n_check + 1))))
