"""Truncated standard-Fock-space numerics.

Dense ladder/quadrature operator matrices, stable factorial kernels and the
matrix exponential used both for the deformed-basis construction and as an
independent propagation oracle.

All matrices are dense complex arrays of size (cutoff+1) x (cutoff+1), row and
column index = occupation number 0..cutoff.  The top ``guard_band`` rows of any
truncated ladder-algebra identity are meaningless, so identity checks are made
on the interior block only (see ``interior_block``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import expm as _scipy_expm

from .errors import DomainError, UsageError

DEFAULT_CUTOFF = 64
GUARD_BAND = 8
TAIL_TOL = 1e-6

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DeformationParams:
    """The real pair (lambda1, lambda2) defining the deformed creation operator."""

    lambda1: float
    lambda2: float

    def __post_init__(self):
        if not (math.isfinite(self.lambda1) and math.isfinite(self.lambda2)):
            raise DomainError("deformation parameters must be finite reals")

    @property
    def is_trivial(self) -> bool:
        return self.lambda1 == 0.0 and self.lambda2 == 0.0


@dataclass(frozen=True)
class FockVector:
    """Complex coefficient vector over the truncated standard Fock basis."""

    coeffs: np.ndarray
    cutoff: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.cutoff + 1,):
            raise UsageError(
                f"coefficient vector of length {c.shape} does not match cutoff {self.cutoff}"
            )
        if not np.all(np.isfinite(c.view(float))):
            raise DomainError("FockVector entries must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-10

    def normalized(self) -> "FockVector":
        n = self.norm
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return FockVector(self.coeffs / n, self.cutoff)

    def dot(self, other: "FockVector") -> complex:
        if other.cutoff != self.cutoff:
            raise UsageError("cutoff mismatch in FockVector dot product")
        return complex(np.vdot(self.coeffs, other.coeffs))


@dataclass(frozen=True)
class TruncationReport:
    """Tail-mass diagnostic for a truncated computation."""

    cutoff: int
    tail_mass: float
    guard_band: int = GUARD_BAND
    tail_tol: float = TAIL_TOL

    @property
    def converged(self) -> bool:
        return self.tail_mass <= self.tail_tol


class OperatorLabel(Enum):
    A = "a"
    ADAG = "adag"
    ADAG_DEF = "adag_def"
    HAMILTONIAN_DEF = "hamiltonian_def"
    NUMBER_DEF = "number_def"
    IDENTITY = "identity"
    X = "x"
    P = "p"


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense truncated operator with provenance label."""

    entries: np.ndarray
    label: OperatorLabel | str
    cutoff: int = field(default=-1)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise UsageError("operator matrix must be square")
        object.__setattr__(self, "entries", m)
        if self.cutoff < 0:
            object.__setattr__(self, "cutoff", m.shape[0] - 1)
        elif m.shape[0] != self.cutoff + 1:
            raise UsageError("matrix shape does not match declared cutoff")


def log_factorial(n: int) -> float:
    """ln(n!) via the log-gamma kernel."""
    if n < 0:
        raise DomainError(f"log_factorial undefined for n={n}")
    return math.lgamma(n + 1)


def log_double_factorial(n: int) -> float:
    """ln(n!!), with (-1)!! = 0!! = 1.

    Even n = 2m: n!! = 2^m m!.  Odd n = 2m-1: n!! = (2m)! / (2^m m!).
    """
    if n < -1:
        raise DomainError(f"log_double_factorial undefined for n={n}")
    if n <= 0:
        return 0.0
    if n % 2 == 0:
        m = n // 2
        return m * math.log(2.0) + math.lgamma(m + 1)
    m = (n + 1) // 2
    return math.lgamma(2 * m + 1) - m * math.log(2.0) - math.lgamma(m + 1)


def annihilation_matrix(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, cutoff + 1)), 1).astype(complex)


def build_operator(
    label: OperatorLabel, params: DeformationParams | None, cutoff: int
) -> OperatorMatrix:
    """Truncated matrix for one of the labelled operators.

    ``params`` may be None for the undeformed labels (A, ADAG, IDENTITY, X, P).
    """
    if cutoff < 2:
        raise UsageError(f"cutoff must be >= 2, got {cutoff}")
    if not isinstance(label, OperatorLabel):
        raise UsageError(f"unknown operator label {label!r}")
    a = annihilation_matrix(cutoff)
    adag = a.T.copy()
    eye = np.eye(cutoff + 1, dtype=complex)
    if label is OperatorLabel.A:
        m = a
    elif label is OperatorLabel.ADAG:
        m = adag
    elif label is OperatorLabel.IDENTITY:
        m = eye
    elif label is OperatorLabel.X:
        m = (a + adag) / _SQRT2
    elif label is OperatorLabel.P:
        m = (a - adag) / (1j * _SQRT2)
    else:
        if params is None:
            raise UsageError(f"label {label} requires deformation parameters")
        adag_def = adag + params.lambda1 * a + params.lambda2 * eye
        if label is OperatorLabel.ADAG_DEF:
            m = adag_def
        elif label is OperatorLabel.NUMBER_DEF:
            m = adag_def @ a
        elif label is OperatorLabel.HAMILTONIAN_DEF:
            m = adag_def @ a + 0.5 * eye
        else:  # pragma: no cover - enum is exhausted above
            raise UsageError(f"unknown operator label {label!r}")
    return OperatorMatrix(m, label, cutoff)


def _is_strictly_triangular(m: np.ndarray) -> bool:
    return not np.any(np.tril(m)) or not np.any(np.triu(m))


def _nilpotent_expm(m: np.ndarray) -> np.ndarray:
    """Terminating Taylor series; exact for strictly triangular arguments."""
    dim = m.shape[0]
    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, dim + 1):
        term = term @ m / k
        if not np.any(term):
            break
        result += term
    return result

def matrix_exponential(op: OperatorMatrix | np.ndarray) -> OperatorMatrix:
    """exp(M); exact terminating series for nilpotent (strictly triangular)
    arguments, scaling-and-squaring otherwise."""
    m = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op, dtype=complex)
    if not np.all(np.isfinite(m.view(float))):
        raise DomainError("matrix exponential of a non-finite matrix")
    if _is_strictly_triangular(m):
        e = _nilpotent_expm(m)
    else:
        e = _scipy_expm(m)
    return OperatorMatrix(e, "exp", m.shape[0] - 1)


def expectation(op: OperatorMatrix, v: FockVector) -> complex:
    """v^dagger M v for a normalized Fock vector."""
    if op.cutoff != v.cutoff:
        raise UsageError(
            f"operator cutoff {op.cutoff} does not match vector cutoff {v.cutoff}"
        )
    if not v.is_normalized:
        raise UsageError("expectation requires a normalized vector")
    return complex(np.vdot(v.coeffs, op.entries @ v.coeffs))


def interior_block(m: np.ndarray | OperatorMatrix, guard_band: int = GUARD_BAND) -> np.ndarray:
    """Rows/columns below cutoff - guard_band, where truncated identities hold."""
    a = m.entries if isinstance(m, OperatorMatrix) else np.asarray(m)
    k = a.shape[0] - guard_band
    return a[:k, :k]


def commutator(x: OperatorMatrix, y: OperatorMatrix) -> np.ndarray:
    return x.entries @ y.entries - y.entries @ x.entries
