//! Simultaneous orthogonal matching pursuit over a shared dictionary.
//!
//! One pursuit run selects one atom per iteration: the atom whose summed
//! absolute correlation with the residual columns is largest. The
//! measurement block is then re-projected onto the span of everything
//! selected so far, which keeps the residual orthogonal to chosen atoms and
//! guarantees no atom is picked twice. A trace records, per iteration, the
//! winning metric and (when the true support is known) how close the
//! selection came to going wrong.

use crate::linalg::{project_onto_span, LinalgError};
use crate::matrix::DenseMatrix;
use crate::support::{SupportError, SupportSet};
use crate::tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PursuitError {
    #[error("dictionary is {dictionary:?} but measurements are {measurements:?}; row counts must match")]
    ShapeMismatch {
        dictionary: (usize, usize),
        measurements: (usize, usize),
    },
    #[error("sparsity {sparsity} outside 1..={limit}")]
    InvalidSparsity { sparsity: usize, limit: usize },
    #[error("dictionary column {index} is identically zero")]
    ZeroColumn { index: usize },
    #[error("truth support has {truth_len} atoms but the run asks for {sparsity}")]
    TruthSize { truth_len: usize, sparsity: usize },
    #[error("expected a single measurement column, got {cols}")]
    SingleMeasurementExpected { cols: usize },
    #[error("coefficient row {row} is nonzero outside the joint support")]
    SignalRowOutsideSupport { row: usize },
    #[error("joint support row {row} has no nonzero coefficient in any column")]
    SignalRowNotCovered { row: usize },
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Coefficient block whose rows are nonzero exactly on a shared support.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSparseSignal {
    coefficients: DenseMatrix,
    joint_support: SupportSet,
    sparsity: usize,
}

impl JointSparseSignal {
    /// Validates that rows outside `joint_support` are identically zero and
    /// that every supported row carries at least one nonzero coefficient.
    pub fn new(
        coefficients: DenseMatrix,
        joint_support: SupportSet,
    ) -> Result<Self, PursuitError> {
        joint_support.validate_within(coefficients.rows())?;
        for row in 0..coefficients.rows() {
            let has_nonzero = (0..coefficients.cols()).any(|c| coefficients.get(row, c) != 0.0);
            if joint_support.contains(row) {
                if !has_nonzero {
                    return Err(PursuitError::SignalRowNotCovered { row });
                }
            } else if has_nonzero {
                return Err(PursuitError::SignalRowOutsideSupport { row });
            }
        }
        let sparsity = joint_support.len();
        Ok(Self {
            coefficients,
            joint_support,
            sparsity,
        })
    }

    pub fn coefficients(&self) -> &DenseMatrix {
        &self.coefficients
    }

    pub fn joint_support(&self) -> &SupportSet {
        &self.joint_support
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }
}

/// Snapshot of one pursuit iteration, taken before the selection updates
/// the support. The metric split by correct/incorrect atoms and the
/// correct-to-incorrect ratio are present only when the true support was
/// supplied; the ratio additionally requires that no wrong atom has been
/// selected yet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub selected_atom: usize,
    pub metric_selected: f64,
    pub metric_best_correct: Option<f64>,
    pub metric_best_incorrect: Option<f64>,
    pub residual_frobenius: f64,
    #[serde(with = "crate::jsonf::opt_real")]
    pub observed_ratio: Option<f64>,
}

/// Full history of a pursuit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryTrace {
    pub records: Vec<IterationRecord>,
    pub final_support: SupportSet,
    /// Present when the true support was supplied: whether the final
    /// support equals it as a set.
    pub exact_recovery: Option<bool>,
    /// True when the residual hit orthogonality round-off before the
    /// requested number of iterations, leaving a shorter trace.
    pub early_stop: bool,
}

/// Selection metric: the summed absolute correlation of one atom against
/// every residual column. `atom` must be a single column with as many rows
/// as `residual`.
pub fn somp_metric(residual: &DenseMatrix, atom: &DenseMatrix) -> f64 {
    assert_eq!(atom.cols(), 1, "atom must be a single column");
    assert_eq!(
        atom.rows(),
        residual.rows(),
        "atom and residual row counts must match"
    );
    (0..residual.cols())
        .map(|c| atom.column_dot(0, residual, c).abs())
        .sum()
}

/// Simultaneous orthogonal matching pursuit.
///
/// Runs `sparsity` iterations (fewer if the residual collapses first).
/// When `truth` is given it must hold exactly `sparsity` atoms; the trace
/// then reports exact recovery and per-iteration selection ratios.
pub fn somp(
    dictionary: &DenseMatrix,
    measurements: &DenseMatrix,
    sparsity: usize,
    truth: Option<&SupportSet>,
) -> Result<RecoveryTrace, PursuitError> {
    let m = dictionary.rows();
    let n = dictionary.cols();
    let k = measurements.cols();
    if measurements.rows() != m {
        return Err(PursuitError::ShapeMismatch {
            dictionary: (m, n),
            measurements: (measurements.rows(), k),
        });
    }
    let limit = m.min(n);
    if sparsity == 0 || sparsity > limit {
        return Err(PursuitError::InvalidSparsity { sparsity, limit });
    }
    for j in 0..n {
        if dictionary.column_norm(j) == 0.0 {
            return Err(PursuitError::ZeroColumn { index: j });
        }
    }
    if let Some(ts) = truth {
        ts.validate_within(n)?;
        if ts.len() != sparsity {
            return Err(PursuitError::TruthSize {
                truth_len: ts.len(),
                sparsity,
            });
        }
    }

    let stop_threshold = tolerances::RESIDUAL_ORTHOGONALITY_RELATIVE * measurements.frobenius_norm();
    let mut residual = measurements.clone();
    let mut selected: Vec<usize> = Vec::with_capacity(sparsity);
    let mut records: Vec<IterationRecord> = Vec::with_capacity(sparsity);
    let mut metrics = vec![0.0_f64; n];
    let mut early_stop = false;

    for iteration in 0..sparsity {
        for (j, slot) in metrics.iter_mut().enumerate() {
            let mut acc = 0.0;
            for c in 0..k {
                acc += dictionary.column_dot(j, &residual, c).abs();
            }
            *slot = acc;
        }
        let best = metrics.iter().fold(0.0_f64, |a, &b| a.max(b));
        if best <= stop_threshold {
            early_stop = true;
            break;
        }
        // Ties go to the smallest atom index; the window is relative to the
        // best metric. Atoms already selected sit at round-off level and
        // cannot enter the window once `best` cleared the stop threshold.
        let tie_floor = best * (1.0 - tolerances::ARGMAX_TIE_RELATIVE);
        let chosen = metrics
            .iter()
            .position(|&v| v >= tie_floor)
            .expect("a maximal metric always exists");
        debug_assert!(!selected.contains(&chosen));

        let (metric_best_correct, metric_best_incorrect, observed_ratio) = match truth {
            Some(ts) => {
                let mut best_correct: Option<f64> = None;
                let mut best_incorrect: Option<f64> = None;
                for (j, &v) in metrics.iter().enumerate() {
                    let slot = if ts.contains(j) {
                        &mut best_correct
                    } else {
                        &mut best_incorrect
                    };
                    *slot = Some(slot.map_or(v, |cur| cur.max(v)));
                }
                let hypothesis_holds = selected.iter().all(|&a| ts.contains(a));
                let ratio = match (hypothesis_holds, best_correct, best_incorrect) {
                    (true, Some(num), Some(den)) => {
                        Some(if den == 0.0 { f64::INFINITY } else { num / den })
                    }
                    _ => None,
                };
                (best_correct, best_incorrect, ratio)
            }
            None => (None, None, None),
        };

        selected.push(chosen);
        let mut sorted = selected.clone();
        sorted.sort_unstable();
        let basis = dictionary.select_columns(&sorted)?;
        let projected = project_onto_span(&basis, measurements)?;
        residual = measurements.sub(&projected)?;

        records.push(IterationRecord {
            iteration,
            selected_atom: chosen,
            metric_selected: metrics[chosen],
            metric_best_correct,
            metric_best_incorrect,
            residual_frobenius: residual.frobenius_norm(),
            observed_ratio,
        });
    }

    let final_support = SupportSet::new(selected)?;
    let exact_recovery = truth.map(|ts| final_support == *ts);
    Ok(RecoveryTrace {
        records,
        final_support,
        exact_recovery,
        early_stop,
    })
}

/// Orthogonal matching pursuit: the single-measurement special case.
pub fn omp(
    dictionary: &DenseMatrix,
    measurement: &DenseMatrix,
    sparsity: usize,
    truth: Option<&SupportSet>,
) -> Result<RecoveryTrace, PursuitError> {
    if measurement.cols() != 1 {
        return Err(PursuitError::SingleMeasurementExpected {
            cols: measurement.cols(),
        });
    }
    somp(dictionary, measurement, sparsity, truth)
}
