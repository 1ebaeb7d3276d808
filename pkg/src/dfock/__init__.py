"""Two-parameter deformed Fock basis, coherent/squeezed states and statistics."""

from .errors import (
    DfockError,
    DomainError,
    NormalizationError,
    RangeError,
    TruncationError,
    UsageError,
)
from .fock import (
    DEFAULT_CUTOFF,
    GUARD_BAND,
    TAIL_TOL,
    DeformationParams,
    FockVector,
    OperatorLabel,
    OperatorMatrix,
    TruncationReport,
    build_operator,
    expectation,
    interior_block,
    log_double_factorial,
    log_factorial,
    matrix_exponential,
)
from .basis import (
    DeformedBasis,
    basis_column,
    basis_column_oracle,
    build_basis,
    inner_product,
    ladder_check,
    validate_fock_conditions,
    xi,
)
from .states import (
    DeformedState,
    StateKind,
    build_coherent,
    build_squeezed,
    canonical_coherent_vector,
    coherent_eigen_residual,
    coherent_overlap,
    coherent_phase,
    evolve_coherent,
    identity_resolution_residual,
    phase_identity_check,
    squeezed_defining_residual,
    squeezed_expansion_cutoff,
    squeezed_norm_series,
)
from .statistics import (
    EvalMode,
    StatisticsReport,
    compute_statistics,
    distribution,
    mandel_Q,
    mandel_q,
    quadrature_variances,
)
from .sweeps import (
    FIGURE_PRESETS,
    Observable,
    SweepAxis,
    SweepSpec,
    ValidationSuite,
    iter_rows,
    run_figure,
    run_validate,
    write_csv,
    write_json,
)

__version__ = "0.1.0"
