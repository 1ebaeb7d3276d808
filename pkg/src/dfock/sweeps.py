"""Parameter sweeps behind the eight reference figures, plus validation suites.

Sweeps stream flat rows with a single CSV schema shared by all figures:

    figure_id, mode, state_kind, state_label_re, state_label_im,
    fixed_param_name, fixed_param_value, sweep_param_name, sweep_param_value,
    observable, value, imag_diagnostic, tail_mass, cutoff

Values are written with 17 significant digits so doubles round-trip exactly;
non-converged points carry the literal "NA" (null in JSON) and keep their
tail-mass flag when one is available.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import DfockError, DomainError, UsageError
from . import basis as basis_mod
from .basis import build_basis, basis_column, basis_column_oracle, inner_product, xi
from .fock import (
    DEFAULT_CUTOFF,
    GUARD_BAND,
    DeformationParams,
    OperatorLabel,
    build_operator,
    commutator,
    interior_block,
)
from .states import (
    DeformedState,
    StateKind,
    build_coherent,
    build_squeezed,
    coherent_eigen_residual,
    phase_identity_check,
    squeezed_defining_residual,
    squeezed_expansion_cutoff,
)
from .statistics import EvalMode, compute_statistics

CSV_COLUMNS = (
    "figure_id",
    "mode",
    "state_kind",
    "state_label_re",
    "state_label_im",
    "fixed_param_name",
    "fixed_param_value",
    "sweep_param_name",
    "sweep_param_value",
    "observable",
    "value",
    "imag_diagnostic",
    "tail_mass",
    "cutoff",
)


class SweepAxis(Enum):
    LAMBDA1 = "l1"
    LAMBDA2 = "l2"

    @property
    def fixed_axis(self) -> "SweepAxis":
        return SweepAxis.LAMBDA2 if self is SweepAxis.LAMBDA1 else SweepAxis.LAMBDA1


class Observable(Enum):
    DX2 = "dx2"
    DP2 = "dp2"
    MANDEL_Q = "Q"
    MANDEL_LITTLE_Q = "q"


# default single-axis ranges: lambda1 sweeps cover [-1, 1], lambda2 sweeps
# cover [-2, 8]; both with 201 points unless overridden
DEFAULT_RANGE = {
    SweepAxis.LAMBDA1: (-1.0, 1.0, 201),
    SweepAxis.LAMBDA2: (-2.0, 8.0, 201),
}


@dataclass(frozen=True)
class SweepSpec:
    state_kind: StateKind
    state_label: complex
    sweep_axis: SweepAxis
    sweep_range: tuple[float, float, int]
    fixed_values: tuple[float, ...]
    observable: Observable
    mode: EvalMode = EvalMode.BASIS_DIAGONAL
    cutoff: int = DEFAULT_CUTOFF
    figure_id: int | None = None

    def __post_init__(self):
        lo, hi, steps = self.sweep_range
        if steps < 2:
            raise UsageError(f"sweep needs at least 2 steps, got {steps}")
        if not lo < hi:
            raise UsageError(f"sweep range must have lo < hi, got {lo}..{hi}")
        if not self.fixed_values:
            raise UsageError("at least one fixed parameter value is required")


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    fixed_value: float
    observable_value: float | None
    imag_diagnostic: float | None
    tail_mass: float | None
    mode: EvalMode


# Squeezed presets carry a larger cutoff: the squeezed expansion over the
# deformed basis converges slowly (or not at all) away from small |lambda1|,
# and points it cannot represent are emitted as NA.
_SQUEEZED_CUTOFF = 192

FIGURE_PRESETS: dict[int, SweepSpec] = {
    1: SweepSpec(StateKind.COHERENT, 0.8, SweepAxis.LAMBDA1,
                 DEFAULT_RANGE[SweepAxis.LAMBDA1], (0.01, 2.0, 5.5, 8.0),
                 Observable.DX2, figure_id=1),
    2: SweepSpec(StateKind.COHERENT, 0.8, SweepAxis.LAMBDA1,
                 DEFAULT_RANGE[SweepAxis.LAMBDA1], (0.8, 1.4, 2.0, 5.0),
                 Observable.DP2, figure_id=2),
    3: SweepSpec(StateKind.SQUEEZED, 0.8, SweepAxis.LAMBDA2,
                 DEFAULT_RANGE[SweepAxis.LAMBDA2], (-0.8, -0.4, 0.001, 0.6),
                 Observable.DX2, cutoff=_SQUEEZED_CUTOFF, figure_id=3),
    4: SweepSpec(StateKind.SQUEEZED, 0.8, SweepAxis.LAMBDA2,
                 DEFAULT_RANGE[SweepAxis.LAMBDA2], (-0.001, 0.5, 0.8),
                 Observable.DP2, cutoff=_SQUEEZED_CUTOFF, figure_id=4),
    5: SweepSpec(StateKind.COHERENT, 2.0, SweepAxis.LAMBDA1,
                 DEFAULT_RANGE[SweepAxis.LAMBDA1], (-0.2, 0.0001, 0.5, 0.9),
                 Observable.MANDEL_Q, figure_id=5),
    6: SweepSpec(StateKind.SQUEEZED, 0.8, SweepAxis.LAMBDA2,
                 DEFAULT_RANGE[SweepAxis.LAMBDA2], (-0.6, -0.3, 0.1, 0.8),
                 Observable.MANDEL_Q, cutoff=_SQUEEZED_CUTOFF, figure_id=6),
    7: SweepSpec(StateKind.COHERENT, 0.8, SweepAxis.LAMBDA2,
                 DEFAULT_RANGE[SweepAxis.LAMBDA2], (-0.8, -0.1, 0.2, 0.8),
                 Observable.MANDEL_LITTLE_Q, figure_id=7),
    8: SweepSpec(StateKind.SQUEEZED, 0.8, SweepAxis.LAMBDA1,
                 DEFAULT_RANGE[SweepAxis.LAMBDA1], (-0.8, -0.2, 0.01, 0.6),
                 Observable.MANDEL_LITTLE_Q, cutoff=_SQUEEZED_CUTOFF, figure_id=8),
}


def _params_at(axis: SweepAxis, sweep_value: float, fixed_value: float) -> DeformationParams:
    if axis is SweepAxis.LAMBDA1:
        return DeformationParams(sweep_value, fixed_value)
    return DeformationParams(fixed_value, sweep_value)


def _build_state(spec: SweepSpec, params: DeformationParams, basis) -> DeformedState:
    if spec.state_kind is StateKind.COHERENT:
        return build_coherent(spec.state_label, params, spec.cutoff, basis=basis)
    return build_squeezed(spec.state_label, params, spec.cutoff, basis=basis)


def _evaluate(spec: SweepSpec, params: DeformationParams) -> tuple[float, float, float]:
    """(observable value, imag diagnostic, tail mass) at one parameter point."""
    basis = build_basis(params, spec.cutoff)
    state = _build_state(spec, params, basis)
    report = compute_statistics(state, spec.mode, basis)
    value = {
        Observable.DX2: report.dx2,
        Observable.DP2: report.dp2,
        Observable.MANDEL_Q: report.Q_mandel,
        Observable.MANDEL_LITTLE_Q: report.q_mandel,
    }[spec.observable]
    return value, report.Q_imag_magnitude, report.truncation.tail_mass


def iter_rows(spec: SweepSpec) -> Iterator[SweepRow]:
    lo, hi, steps = spec.sweep_range
    grid = np.linspace(lo, hi, steps)
    for fixed in spec.fixed_values:
        for sweep_value in grid:
            params = _params_at(spec.sweep_axis, float(sweep_value), float(fixed))
            try:
                value, imag, tail = _evaluate(spec, params)
                if not math.isfinite(value):
                    # observable undefined at this point (e.g. nonpositive
                    # mean occupation); emitted as NA with the tail flag kept
                    value, imag = None, None
                row = SweepRow(float(sweep_value), float(fixed), value, imag, tail, spec.mode)
            except DfockError as exc:
                tail = None
                report = getattr(exc, "report", None)
                if report is not None:
                    tail = report.tail_mass
                row = SweepRow(float(sweep_value), float(fixed), None, None, tail, spec.mode)
            yield row


def run_figure(
    figure_id: int,
    mode: EvalMode = EvalMode.BASIS_DIAGONAL,
    cutoff: int | None = None,
    sweep_range: tuple[float, float, int] | None = None,
) -> tuple[SweepSpec, Iterator[SweepRow]]:
    if figure_id not in FIGURE_PRESETS:
        raise UsageError(f"figure id must be 1..8, got {figure_id}")
    preset = FIGURE_PRESETS[figure_id]
    spec = SweepSpec(
        state_kind=preset.state_kind,
        state_label=preset.state_label,
        sweep_axis=preset.sweep_axis,
        sweep_range=sweep_range or preset.sweep_range,
        fixed_values=preset.fixed_values,
        observable=preset.observable,
        mode=mode,
        cutoff=cutoff or preset.cutoff,
        figure_id=figure_id,
    )
    return spec, iter_rows(spec)


run_custom = iter_rows


def _fmt(x: float | None) -> str:
    return "NA" if x is None else format(x, ".17g")


def row_record(spec: SweepSpec, row: SweepRow) -> dict:
    axis = spec.sweep_axis
    return {
        "figure_id": spec.figure_id if spec.figure_id is not None else "custom",
        "mode": row.mode.value,
        "state_kind": spec.state_kind.value,
        "state_label_re": complex(spec.state_label).real,
        "state_label_im": complex(spec.state_label).imag,
        "fixed_param_name": axis.fixed_axis.value,
        "fixed_param_value": row.fixed_value,
        "sweep_param_name": axis.value,
        "sweep_param_value": row.sweep_value,
        "observable": spec.observable.value,
        "value": row.observable_value,
        "imag_diagnostic": row.imag_diagnostic,
        "tail_mass": row.tail_mass,
        "cutoff": spec.cutoff,
    }


def write_csv(spec: SweepSpec, rows: Iterable[SweepRow], stream: TextIO) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    count = 0
    for row in rows:
        rec = row_record(spec, row)
        writer.writerow(
            [
                rec["figure_id"],
                rec["mode"],
                rec["state_kind"],
                _fmt(rec["state_label_re"]),
                _fmt(rec["state_label_im"]),
                rec["fixed_param_name"],
                _fmt(rec["fixed_param_value"]),
                rec["sweep_param_name"],
                _fmt(rec["sweep_param_value"]),
                rec["observable"],
                _fmt(rec["value"]),
                _fmt(rec["imag_diagnostic"]),
                _fmt(rec["tail_mass"]),
                rec["cutoff"],
            ]
        )
        count += 1
    return count


def write_json(spec: SweepSpec, rows: Iterable[SweepRow], stream: TextIO) -> int:
    records = [row_record(spec, row) for row in rows]
    json.dump(records, stream, indent=2)
    stream.write("\n")
    return len(records)


# ---------------------------------------------------------------------------
# validation suites


class ValidationSuite(Enum):
    ALGEBRA = "algebra"
    BASIS = "basis"
    STATES = "states"
    STATS = "stats"


@dataclass(frozen=True)
class ValidationEntry:
    name: str
    lambda1: float
    lambda2: float
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class ValidationReport:
    suite: ValidationSuite
    entries: tuple[ValidationEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)


def default_grid(suite: ValidationSuite) -> list[DeformationParams]:
    if suite is ValidationSuite.ALGEBRA:
        l1s, l2s = np.linspace(-1, 1, 5), np.linspace(-2, 2, 5)
    elif suite is ValidationSuite.BASIS:
        l1s, l2s = np.linspace(-1, 1, 5), np.linspace(-8, 8, 5)
    else:
        l1s, l2s = np.array([-0.8, 0.0, 0.5]), np.array([-0.8, 0.0, 1.0])
    return [DeformationParams(float(a), float(b)) for a in l1s for b in l2s]


def _laguerre(n: int, x: float) -> float:
    """Laguerre polynomial by the three-term recurrence (validation oracle)."""
    prev, curr = 1.0, 1.0 - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, curr = curr, ((2 * k + 1 - x) * curr - k * prev) / (k + 1)
    return curr


def _algebra_entries(params: DeformationParams, cutoff: int) -> list[ValidationEntry]:
    a = build_operator(OperatorLabel.A, None, cutoff)
    adag_def = build_operator(OperatorLabel.ADAG_DEF, params, cutoff)
    ham = build_operator(OperatorLabel.HAMILTONIAN_DEF, params, cutoff)
    eye = np.eye(cutoff + 1)

    def maxent(m):
        return float(np.max(np.abs(interior_block(m))))

    l1, l2 = params.lambda1, params.lambda2
    return [
        ValidationEntry("canonical_commutator", l1, l2,
                        maxent(commutator(a, adag_def) - eye), 1e-10),
        ValidationEntry("raising_commutator", l1, l2,
                        maxent(commutator(ham, adag_def) - adag_def.entries), 1e-10),
        ValidationEntry("lowering_commutator", l1, l2,
                        maxent(commutator(ham, a) + a.entries), 1e-10),
        ValidationEntry("number_products_commute", l1, l2,
                        maxent((a.entries @ adag_def.entries) @ (adag_def.entries @ a.entries)
                               - (adag_def.entries @ a.entries) @ (a.entries @ adag_def.entries)),
                        1e-10),
    ]


def _basis_entries(params: DeformationParams, cutoff: int) -> list[ValidationEntry]:
    l1, l2 = params.lambda1, params.lambda2
    entries = []
    b = build_basis(params, cutoff)
    # closed form vs matrix-exponential oracle
    res = 0.0
    for n in range(0, min(21, b.n_basis + 1), 5):
        oracle = basis_column_oracle(n, params, cutoff)
        res = max(res, float(np.max(np.abs(b.basis_matrix[:, n] - oracle.coeffs))))
    entries.append(ValidationEntry("column_vs_oracle", l1, l2, res, 1e-10))
    # closed-form normalization against the column norms
    xi_res = max(
        abs(xi(n, params) - b.xi[n]) / b.xi[n] for n in range(min(21, b.n_basis + 1))
    )
    entries.append(ValidationEntry("xi_closed_form", l1, l2, xi_res, 1e-10))
    # closed-form inner products against column dot products
    ip_res = 0.0
    for m in range(0, 13, 4):
        for n in range(0, 13, 4):
            ip_res = max(
                ip_res,
                abs(inner_product(m, n, params)
                    - float(np.real(np.vdot(b.basis_matrix[:, m], b.basis_matrix[:, n])))),
            )
    entries.append(ValidationEntry("inner_product_closed_form", l1, l2, ip_res, 1e-10))
    # ladder actions
    lad = 0.0
    for n in (1, 3, 7):
        down, up = basis_mod.ladder_check(n, params, cutoff)
        lad = max(lad, down, up)
    entries.append(ValidationEntry("ladder_actions", l1, l2, lad, 1e-10))
    # Gram positive definiteness for a modest leading block; at extreme
    # lambda2 the columns are numerically near-dependent, so negativity is
    # only flagged beyond roundoff
    gram = b.gram(13)
    min_eig = float(np.min(np.linalg.eigvalsh((gram + gram.T) / 2)))
    entries.append(
        ValidationEntry("gram_positive_definite", l1, l2, max(0.0, -min_eig), 1e-12)
    )
    if l1 == 0.0:
        lag = max(
            abs(xi(n, params) * math.sqrt(_laguerre(n, -l2 * l2)) - 1.0)
            for n in range(31)
        )
        entries.append(ValidationEntry("laguerre_limit", l1, l2, lag, 1e-10))
    return entries


def _states_entries(params: DeformationParams, cutoff: int) -> list[ValidationEntry]:
    l1, l2 = params.lambda1, params.lambda2
    entries = []
    for alpha in (0.8, 0.5 + 0.5j):
        state = build_coherent(alpha, params, cutoff)
        entries.append(
            ValidationEntry(f"coherent_eigen_alpha={alpha}", l1, l2,
                            coherent_eigen_residual(state), 1e-8)
        )
        fid, phase = phase_identity_check(alpha, params, cutoff)
        entries.append(
            ValidationEntry(f"coherent_fidelity_alpha={alpha}", l1, l2,
                            abs(fid - 1.0), 1e-8)
        )
        entries.append(
            ValidationEntry(f"coherent_phase_alpha={alpha}", l1, l2, phase, 1e-6)
        )
    for eta in (0.3, 0.8):
        # the squeezed expansion only converges on part of the parameter
        # plane; points it cannot represent are left out of the suite
        sq_cutoff = squeezed_expansion_cutoff(eta, params)
        if sq_cutoff is None:
            continue
        state = build_squeezed(eta, params, max(cutoff, sq_cutoff))
        entries.append(
            ValidationEntry(f"squeezed_defining_eta={eta}", l1, l2,
                            squeezed_defining_residual(state), 1e-6)
        )
    # the unit-disk precondition must be enforced
    try:
        build_squeezed(1.2, params, cutoff)
        rejected = 1.0
    except DomainError:
        rejected = 0.0
    entries.append(
        ValidationEntry("squeezed_rejects_eta_outside_unit_disk", l1, l2, rejected, 0.0)
    )
    return entries


def _stats_entries(params: DeformationParams, cutoff: int) -> list[ValidationEntry]:
    l1, l2 = params.lambda1, params.lambda2
    entries = []
    state = build_coherent(0.8, params, cutoff)
    exact = compute_statistics(state, EvalMode.EXACT)
    entries.append(
        ValidationEntry("coherent_exact_dx2", l1, l2, abs(exact.dx2 - 0.5), 1e-8)
    )
    entries.append(
        ValidationEntry("coherent_exact_dp2", l1, l2, abs(exact.dp2 - 0.5), 1e-8)
    )
    entries.append(
        ValidationEntry("coherent_exact_q", l1, l2, abs(exact.q_mandel), 1e-8)
    )
    entries.append(
        ValidationEntry("heisenberg_floor_coherent", l1, l2,
                        max(0.0, 0.25 - exact.dx2 * exact.dp2), 1e-9)
    )
    # strongest representable squeezing at this parameter point
    for eta in (0.8, 0.3):
        sq_cutoff = squeezed_expansion_cutoff(eta, params)
        if sq_cutoff is not None:
            squeezed = build_squeezed(eta, params, max(cutoff, sq_cutoff))
            sq = compute_statistics(squeezed, EvalMode.EXACT)
            entries.append(
                ValidationEntry(f"heisenberg_floor_squeezed_eta={eta}", l1, l2,
                                max(0.0, 0.25 - sq.dx2 * sq.dp2), 1e-9)
            )
            break
    if params.is_trivial:
        diag = compute_statistics(state, EvalMode.BASIS_DIAGONAL)
        entries.append(
            ValidationEntry("mode_consistency_q", l1, l2,
                            abs(exact.q_mandel - diag.q_mandel), 1e-8)
        )
        entries.append(
            ValidationEntry("mode_consistency_mean", l1, l2,
                            abs(exact.mean_n - diag.mean_n), 1e-8)
        )
    return entries


_SUITE_RUNNERS = {
    ValidationSuite.ALGEBRA: _algebra_entries,
    ValidationSuite.BASIS: _basis_entries,
    ValidationSuite.STATES: _states_entries,
    ValidationSuite.STATS: _stats_entries,
}


def run_validate(
    suite: ValidationSuite,
    grid: list[DeformationParams] | None = None,
    cutoff: int = DEFAULT_CUTOFF,
) -> ValidationReport:
    runner = _SUITE_RUNNERS[suite]
    entries: list[ValidationEntry] = []
    for params in grid if grid is not None else default_grid(suite):
        entries.extend(runner(params, cutoff))
    return ValidationReport(suite=suite, entries=tuple(entries))
