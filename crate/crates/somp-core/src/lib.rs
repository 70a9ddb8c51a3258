//! Joint sparse recovery by simultaneous orthogonal matching pursuit,
//! certified against exact restricted-isometry constants.
//!
//! The crate has four layers:
//!
//! - [`matrix`] and [`linalg`]: a small dense-matrix type with the
//!   Householder QR, least-squares, and Jacobi eigenvalue kernels the rest
//!   of the crate needs. Desk scale only; nothing here is tuned for large
//!   problems.
//! - [`pursuit`]: the greedy recovery algorithm itself, for one or many
//!   simultaneous measurement columns, with full per-iteration tracing.
//! - [`certify`]: exact isometry (`δ_s`) and orthogonality (`θ_{α,α'}`)
//!   constants by support enumeration, the recovery criteria built from
//!   them, and verification of traces against certified per-iteration
//!   selection bounds.
//! - [`harness`]: seeded, reproducible Monte-Carlo campaigns and a
//!   boundary probe that degrades a dictionary toward rank deficiency.
//!
//! Enumeration costs grow as `C(n, s)`; budgets (default
//! [`tolerances::DEFAULT_ENUMERATION_BUDGET`]) make the combinatorics an
//! explicit contract rather than a surprise.

pub mod certify;
pub mod harness;
mod jsonf;
pub mod linalg;
pub mod matrix;
pub mod pursuit;
pub mod support;
pub mod tolerances;

#[cfg(test)]
mod testutil;

pub use certify::{
    binomial, erc_evaluate, erc_evaluate_budgeted, erc_evaluate_detailed, observed_ratio,
    ric_exact, ric_exact_budgeted, roc_exact, roc_exact_budgeted, roc_one_exact,
    verify_trace_bounds, CertifyError, ErcEvaluation, ErcReport, IsometryCertificate,
    OrthogonalityCertificate, RatioObservation, TraceVerification,
};
pub use harness::{
    boundary_probe, boundary_probe_budgeted, gen_dictionary, gen_signal, run_campaign,
    run_campaign_budgeted, write_campaign_csv, AmplitudeModel, CampaignReport, HarnessError,
    ProbeReport, TrialConfig, TrialRecord,
};
pub use linalg::{
    least_squares, project_onto_span, qr_decompose, spectral_norm, symmetric_eigen_extremes,
    LinalgError, QrFactorization,
};
pub use matrix::DenseMatrix;
pub use pursuit::{
    omp, somp, IterationRecord, JointSparseSignal, PursuitError, RecoveryTrace,
};
pub use support::{SupportError, SupportSet};
