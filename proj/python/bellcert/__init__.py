from ._core import (
    AnticommutingCertificate,
    BinaryObservable,
    BoundCheck,
    Bounds,
    CanonicalForm,
    CertificationError,
    CertificationReport,
    DensityMatrix,
    DimensionError,
    ExtractionDiagnostics,
    FalsifyCheckStat,
    FalsifyReport,
    MabkBoundChecks,
    NamedCheck,
    PreconditionError,
    Realization,
    RigidityReport,
    Scenario,
    SchemaError,
    SeesawConfig,
    SeesawResult,
    TradeoffCurve,
    TradeoffRow,
    bell_operator,
    bell_value,
    bounds,
    certification_report,
    certify_n_anticommuting,
    check_rigidity,
    chsh_operator,
    com_anticom_gap,
    effective_commutator,
    extract_canonical_pair,
    falsify_bounds,
    haar_unitary,
    mabk_operator,
    mabk_square_projective,
    matrix_modulus,
    op_norm,
    operator_sqrt,
    partial_trace,
    random_binary_observable,
    random_density_matrix,
    scan_tradeoff,
    seesaw_max_violation,
    t_alpha,
    tradeoff_bound,
    verify_chsh_squared_bound,
    verify_mabk_bounds,
    verify_talpha_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
