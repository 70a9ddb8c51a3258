//! Numeric tolerances and resource limits used across the crate.
//!
//! Every threshold that decides a comparison, a convergence test, or a
//! resource cutoff lives here so the values can be audited in one place.
//! Relative tolerances are scaled by the norm of the operand they guard.

/// Relative Frobenius tolerance for `‖A − QR‖_F` after a QR factorization.
pub const QR_RECONSTRUCTION: f64 = 1e-10;

/// Absolute tolerance for `‖QᵀQ − I‖` entries of a thin QR factor.
pub const ORTHONORMALITY: f64 = 1e-10;

/// A diagonal entry of R counts toward the rank when its magnitude exceeds
/// this fraction of the largest diagonal magnitude.
pub const QR_RANK_RELATIVE: f64 = 1e-12;

/// Relative tolerance for `basisᵀ(Y − PY)` after projecting Y onto a span.
pub const PROJECTION_ORTHOGONALITY: f64 = 1e-9;

/// Relative Frobenius tolerance for projector idempotence, `P(PY) = PY`.
pub const PROJECTOR_IDEMPOTENCE: f64 = 1e-10;

/// Jacobi sweeps allowed before the eigensolver reports non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// The Jacobi iteration stops once every off-diagonal magnitude falls below
/// this fraction of the input's Frobenius norm.
pub const JACOBI_OFF_DIAGONAL_RELATIVE: f64 = 1e-12;

/// Maximum relative asymmetry `|g_ij − g_ji|` accepted by the eigensolver.
pub const SYMMETRY_RELATIVE: f64 = 1e-12;

/// Pursuit stops early when the best atom metric drops below this fraction
/// of `‖Y‖_F`; past that point every metric is projection round-off.
pub const RESIDUAL_ORTHOGONALITY_RELATIVE: f64 = 1e-9;

/// Two atom metrics tie when they differ by at most this fraction of the
/// larger one; the smallest atom index wins a tie.
pub const ARGMAX_TIE_RELATIVE: f64 = 1e-12;

/// Absolute tolerance when cross-checking a certificate against a direct
/// recomputation from its witness support.
pub const CERTIFICATE_CROSS_CHECK: f64 = 1e-10;

/// Slack for order comparisons between exact constants (monotonicity of
/// isometry constants, orthogonality-isometry inequalities, bound dominance).
pub const CONSTANT_ORDERING_SLACK: f64 = 1e-12;

/// Observed selection ratios must stay above their certified lower bounds
/// minus this slack.
pub const RATIO_BOUND_SLACK: f64 = 1e-9;

/// A strict recovery criterion counts as borderline when the compared
/// quantities sit within this distance of each other.
pub const ERC_BORDERLINE: f64 = 1e-9;

/// Smallest magnitude allowed for a Gaussian signal amplitude; draws below
/// it are rejected and resampled.
pub const SIGNAL_MIN_MAGNITUDE: f64 = 1e-6;

/// Supports (or support pairs) an exact enumeration may visit before the
/// computation refuses to run.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 2_000_000;
