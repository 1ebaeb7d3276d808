"""Construction of the two-parameter non-orthogonal deformed Fock basis.

Column n of the basis is a finite superposition of |0>..|n> whose coefficient
on |r> is

    xi_n * sqrt(n!/r!) * h_{n-r},
    h_m = sum_k (1/2)^k lambda1^k lambda2^{m-2k} / (k! (m-2k)!),

with xi_n the positive normalization constant.  The same column is produced by
exponentiating the generator (1/2) lambda1 a^2 + lambda2 a on |n> and
normalizing; that matrix route is kept as an independent oracle.

Every factorial ratio is evaluated in the log domain with explicit sign
tracking, and alternating-sign series (negative lambda) are combined with
exact compensated summation (math.fsum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, TruncationError
from .fock import (
    DEFAULT_CUTOFF,
    GUARD_BAND,
    DeformationParams,
    FockVector,
    OperatorLabel,
    annihilation_matrix,
    build_operator,
    log_factorial,
    matrix_exponential,
)


def deformation_poly(params: DeformationParams, max_order: int) -> np.ndarray:
    """h_0..h_{max_order}: the per-order column-coefficient kernels.

    h_m is the coefficient of t^m in exp(lambda2 t + (1/2) lambda1 t^2).
    Evaluated term by term (0^0 = 1) so lambda = 0 limits are exact.
    """
    l1, l2 = params.lambda1, params.lambda2
    h = np.zeros(max_order + 1)
    for m in range(max_order + 1):
        terms = []
        for k in range(m // 2 + 1):
            p2 = m - 2 * k  # exponent of lambda2
            if (l1 == 0.0 and k > 0) or (l2 == 0.0 and p2 > 0):
                continue
            sign = 1.0
            logmag = -log_factorial(k) - log_factorial(p2)
            if k > 0:
                logmag += k * math.log(abs(l1) / 2.0)
                if l1 < 0.0 and k % 2:
                    sign = -sign
            if p2 > 0:
                logmag += p2 * math.log(abs(l2))
                if l2 < 0.0 and p2 % 2:
                    sign = -sign
            terms.append(sign * math.exp(logmag))
        h[m] = math.fsum(terms)
    if not np.all(np.isfinite(h)):
        raise RangeError(
            "column kernel overflow", n=max_order, lambda1=l1, lambda2=l2
        )
    return h


def xi(n: int, params: DeformationParams) -> float:
    """Positive normalization constant of deformed basis vector n.

    Direct evaluation of the (r, k, k') double-sum normalization formula;
    lambda2 only ever appears with even exponent so only sign(lambda1)
    alternates.
    """
    if n < 0:
        raise DomainError(f"xi undefined for n={n}")
    l1, l2 = params.lambda1, params.lambda2
    terms = []
    for r in range(n + 1):
        m = n - r
        base = log_factorial(n) - log_factorial(r)
        for k in range(m // 2 + 1):
            for kp in range(m // 2 + 1):
                p2 = 2 * m - 2 * (k + kp)  # total lambda2 exponent
                if (l1 == 0.0 and k + kp > 0) or (l2 == 0.0 and p2 > 0):
                    continue
                sign = 1.0
                logmag = (
                    base
                    - log_factorial(k)
                    - log_factorial(m - 2 * k)
                    - log_factorial(kp)
                    - log_factorial(m - 2 * kp)
                )
                if k + kp > 0:
                    logmag += (k + kp) * math.log(abs(l1) / 2.0)
                    if l1 < 0.0 and (k + kp) % 2:
                        sign = -sign
                if p2 > 0:
                    logmag += p2 * math.log(abs(l2))
                terms.append(sign * math.exp(logmag))
    total = math.fsum(terms)
    if not math.isfinite(total) or total <= 0.0:
        raise RangeError(
            f"normalization sum {total} out of range", n=n, lambda1=l1, lambda2=l2
        )
    return total ** -0.5


def _normalized_columns(
    params: DeformationParams, cutoff: int, n_basis: int
) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm columns and the log of each unnormalized column norm.

    Column entries sqrt(n!/r!) h_{n-r} span a dynamic range that overflows
    doubles well before the cutoff does, so each column is built from
    log-magnitudes shifted by their maximum before exponentiating; the shift
    is folded back into the returned log-norms (log 1/xi_n).
    """
    h = deformation_poly(params, n_basis)
    with np.errstate(divide="ignore"):
        log_h = np.log(np.abs(h))
    sign_h = np.sign(h)
    lf = np.array([log_factorial(k) for k in range(cutoff + 1)])
    cols = np.zeros((cutoff + 1, n_basis + 1))
    log_norms = np.zeros(n_basis + 1)
    for n in range(n_basis + 1):
        r = np.arange(n + 1)
        logmag = 0.5 * (lf[n] - lf[r]) + log_h[n - r]
        shift = float(np.max(logmag))
        shifted = sign_h[n - r] * np.exp(logmag - shift)
        nrm = float(np.linalg.norm(shifted))
        if not (math.isfinite(shift) and math.isfinite(nrm) and nrm > 0.0):
            raise RangeError(
                "basis column out of range",
                n=n,
                lambda1=params.lambda1,
                lambda2=params.lambda2,
            )
        cols[: n + 1, n] = shifted / nrm
        log_norms[n] = shift + math.log(nrm)
    return cols, log_norms


@dataclass(frozen=True)
class DeformedBasis:
    """Per-(lambda1, lambda2, cutoff) bundle of xi values and basis columns.

    ``basis_matrix`` column n is the unit-norm deformed vector n expressed in
    the standard Fock basis; xi is derived as the reciprocal norm of the
    unnormalized closed-form column, which makes the normalization
    self-validating against :func:`xi`.
    """

    params: DeformationParams
    cutoff: int
    n_basis: int
    xi: np.ndarray
    log_xi: np.ndarray  # log xi_n; xi itself underflows at large cutoff
    basis_matrix: np.ndarray
    guard_band: int = GUARD_BAND

    def column(self, n: int) -> FockVector:
        if not 0 <= n <= self.n_basis:
            raise DomainError(f"basis index {n} outside 0..{self.n_basis}")
        return FockVector(self.basis_matrix[:, n].astype(complex), self.cutoff)

    def gram(self, size: int | None = None) -> np.ndarray:
        """Gram matrix of the first ``size`` columns (real symmetric)."""
        k = self.n_basis + 1 if size is None else size
        b = self.basis_matrix[:, :k]
        return b.T @ b


def build_basis(
    params: DeformationParams,
    cutoff: int = DEFAULT_CUTOFF,
    n_basis: int | None = None,
    guard_band: int = GUARD_BAND,
) -> DeformedBasis:
    if n_basis is None:
        n_basis = cutoff - guard_band
    if n_basis + guard_band > cutoff:
        raise TruncationError(
            f"n_basis={n_basis} needs cutoff >= {n_basis + guard_band}, got {cutoff}"
        )
    cols, log_norms = _normalized_columns(params, cutoff, n_basis)
    with np.errstate(under="ignore"):
        xi_values = np.exp(-log_norms)
    return DeformedBasis(
        params=params,
        cutoff=cutoff,
        n_basis=n_basis,
        xi=xi_values,
        log_xi=-log_norms,
        basis_matrix=cols,
        guard_band=guard_band,
    )


def basis_column(
    n: int, params: DeformationParams, cutoff: int = DEFAULT_CUTOFF
) -> FockVector:
    """Closed-form deformed basis vector n as a unit-norm FockVector."""
    if n < 0:
        raise DomainError(f"basis index must be >= 0, got {n}")
    if n + GUARD_BAND > cutoff:
        raise TruncationError(f"basis index {n} too close to cutoff {cutoff}")
    cols, _ = _normalized_columns(params, cutoff, n)
    return FockVector(cols[:, n].astype(complex), cutoff)


def basis_column_oracle(
    n: int, params: DeformationParams, cutoff: int = DEFAULT_CUTOFF
) -> FockVector:
    """Matrix-exponential route to the same column: normalize exp(G)|n> where
    G = (1/2) lambda1 A^2 + lambda2 A is the column generator."""
    if n < 0:
        raise DomainError(f"basis index must be >= 0, got {n}")
    if n + GUARD_BAND > cutoff:
        raise TruncationError(f"basis index {n} too close to cutoff {cutoff}")
    a = annihilation_matrix(cutoff)
    gen = 0.5 * params.lambda1 * (a @ a) + params.lambda2 * a
    u = matrix_exponential(gen).entries
    col = u[:, n]
    return FockVector(col / np.linalg.norm(col), cutoff)


def inner_product(m: int, n: int, params: DeformationParams) -> float:
    """Closed-form overlap of deformed basis vectors m and n.

    sqrt(m! n!) xi_m xi_n sum_r h_{m-r} h_{n-r} / r!, summed with fsum.
    """
    if m < 0 or n < 0:
        raise DomainError("basis indices must be >= 0")
    h = deformation_poly(params, max(m, n))
    pref = 0.5 * (log_factorial(m) + log_factorial(n))
    terms = [
        h[m - r] * h[n - r] * math.exp(pref - log_factorial(r))
        for r in range(min(m, n) + 1)
    ]
    total = math.fsum(terms) * xi(m, params) * xi(n, params)
    if not math.isfinite(total):
        raise RangeError(
            "inner product overflow", n=max(m, n),
            lambda1=params.lambda1, lambda2=params.lambda2,
        )
    return total


def ladder_check(
    n: int, params: DeformationParams, cutoff: int | None = None
) -> tuple[float, float]:
    """Residuals of the lowering and deformed-raising actions on column n."""
    if n < 1:
        raise DomainError("lowering branch needs n >= 1")
    if cutoff is None:
        cutoff = max(DEFAULT_CUTOFF, n + 1 + GUARD_BAND)
    basis = build_basis(params, cutoff, n_basis=n + 1)
    a = build_operator(OperatorLabel.A, None, cutoff).entries
    adag_def = build_operator(OperatorLabel.ADAG_DEF, params, cutoff).entries
    col_prev = basis.basis_matrix[:, n - 1]
    col = basis.basis_matrix[:, n]
    col_next = basis.basis_matrix[:, n + 1]
    r_down = a @ col - math.exp(basis.log_xi[n] - basis.log_xi[n - 1]) * math.sqrt(n) * col_prev
    r_up = adag_def @ col - math.exp(basis.log_xi[n] - basis.log_xi[n + 1]) * math.sqrt(n + 1) * col_next
    return float(np.linalg.norm(r_down)), float(np.linalg.norm(r_up))


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float
    passed: bool


@dataclass(frozen=True)
class FockConditionReport:
    params: DeformationParams
    cutoff: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def validate_fock_conditions(
    params: DeformationParams, cutoff: int = DEFAULT_CUTOFF
) -> FockConditionReport:
    """Check the defining conditions of the deformed Fock space.

    Failures are reported, not raised.
    """
    a = build_operator(OperatorLabel.A, None, cutoff).entries
    adag_def = build_operator(OperatorLabel.ADAG_DEF, params, cutoff).entries
    num = build_operator(OperatorLabel.NUMBER_DEF, params, cutoff).entries
    ham = build_operator(OperatorLabel.HAMILTONIAN_DEF, params, cutoff).entries
    basis = build_basis(params, cutoff)
    interior = cutoff - GUARD_BAND

    vac = basis.basis_matrix[:, 0]
    vacuum_res = float(np.linalg.norm(a @ vac))
    aad_vac = float(np.real(vac @ (a @ adag_def) @ vac))

    comm = (a @ adag_def) @ (adag_def @ a) - (adag_def @ a) @ (a @ adag_def)
    comm_res = float(np.max(np.abs(comm[:interior, :interior])))
    order_gap = float(
        np.max(np.abs((a @ adag_def - adag_def @ a)[:interior, :interior]))
    )

    ns = np.arange(basis.n_basis + 1)
    num_res = float(
        np.max(np.linalg.norm(num @ basis.basis_matrix - basis.basis_matrix * ns, axis=0))
    )
    ham_res = float(
        np.max(
            np.linalg.norm(ham @ basis.basis_matrix - basis.basis_matrix * (ns + 0.5), axis=0)
        )
    )

    checks = (
        CheckResult("vacuum_annihilated", vacuum_res, 1e-12, vacuum_res <= 1e-12),
        CheckResult("a_adag_def_vacuum_positive", aad_vac, 0.0, aad_vac > 0.0),
        CheckResult("number_products_commute", comm_res, 1e-10, comm_res <= 1e-10),
        CheckResult("operator_ordering_distinct", order_gap, 0.5, order_gap > 0.5),
        CheckResult("number_eigen_relation", num_res, 1e-9, num_res <= 1e-9),
        CheckResult("energy_eigen_relation", ham_res, 1e-9, ham_res <= 1e-9),
    )
    return FockConditionReport(params=params, cutoff=cutoff, checks=checks)
