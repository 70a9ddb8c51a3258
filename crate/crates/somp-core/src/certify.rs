//! Exact restricted-isometry and restricted-orthogonality constants, and
//! the recovery criteria built from them.
//!
//! Constants are exact in the enumeration sense: every candidate support
//! (or disjoint support pair) up to the requested order is visited and the
//! extreme eigenvalue problem on its Gram block is solved. Budgets keep the
//! combinatorics honest; a computation that would exceed its budget refuses
//! to run instead of silently sampling.
//!
//! On top of the constants sit the exact recovery criteria for greedy joint
//! recovery, two weaker isometry-only selection bounds, a set of older
//! criteria kept for comparison, and a verifier that replays a recovery
//! trace against the certified per-iteration lower bounds.

use crate::linalg::{jacobi_extremes_in_place, LinalgError};
use crate::matrix::DenseMatrix;
use crate::pursuit::RecoveryTrace;
use crate::support::{SupportError, SupportSet};
use crate::tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("isometry order {order} outside 1..={cols} for this dictionary")]
    InvalidOrder { order: usize, cols: usize },
    #[error("support sizes ({alpha}, {alpha_prime}) need alpha >= 1, alpha' >= 1, alpha + alpha' <= {cols}")]
    BadOrthogonalityOrders {
        alpha: usize,
        alpha_prime: usize,
        cols: usize,
    },
    #[error("enumeration needs {required} supports, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("dictionary has {dictionary_rows} rows but residual has {residual_rows}")]
    ResidualShape {
        dictionary_rows: usize,
        residual_rows: usize,
    },
    #[error("truth support covers every atom; no incorrect metric exists")]
    TruthCoversAllAtoms,
    #[error("trace was produced without a truth support")]
    TraceWithoutTruth,
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Exact isometry constant of one order together with the support that
/// realizes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryCertificate {
    pub order: usize,
    /// Smallest constant with `(1-delta)‖u‖² <= ‖Φ_S u‖² <= (1+delta)‖u‖²`
    /// over all supports `S` of the given order.
    pub delta: f64,
    pub witness: SupportSet,
    /// Extreme eigenvalue of the witness Gram block realizing `delta`.
    pub witness_extreme: f64,
}

/// Exact orthogonality constant for disjoint support pairs of fixed sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityCertificate {
    pub alpha: usize,
    pub alpha_prime: usize,
    /// Largest spectral norm of `Φ_Aᵀ Φ_B` over disjoint `(A, B)`.
    pub theta: f64,
    pub witness_a: SupportSet,
    pub witness_b: SupportSet,
}

/// Verdicts of every recovery criterion at one sparsity, plus the exact
/// constants and selection bounds they were derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErcReport {
    pub s: usize,
    pub delta_s: f64,
    pub delta_s_plus_1: f64,
    pub theta_1_s: f64,
    /// `(1-δ_s)/(θ_{1,s}·√s)`; infinite when `θ_{1,s} = 0`.
    #[serde(with = "crate::jsonf::real")]
    pub roc_ratio_bound: f64,
    /// `(1-δ_{s+1})/(δ_{s+1}·√s)`; infinite when `δ_{s+1} = 0`.
    #[serde(with = "crate::jsonf::real")]
    pub ric_ratio_bound_a: f64,
    /// `(1-δ_s)·√(s-1)/(δ_s·s)` for `s >= 2`; infinite when `δ_s = 0`.
    #[serde(with = "crate::jsonf::opt_real")]
    pub ric_ratio_bound_b: Option<f64>,
    /// Selection-ratio criterion: `roc_ratio_bound > 1`.
    pub erc1: bool,
    /// Isometry-step criterion: `δ_{s+1} < 1/(√s + 1)`.
    pub erc2: bool,
    /// Same-order criterion, defined for `s >= 2`:
    /// `δ_s < √(s-1)/(√(s-1) + s)`.
    pub erc3: Option<bool>,
    /// Older criterion `δ_{s+1} < 1/((1+√2)·√s)`.
    pub erc_legacy_liu: bool,
    /// Older criterion `δ_{s+1} < 1/(3·√s)`.
    pub erc_legacy_davenport: bool,
    /// `δ_{s+1} < 1/√(s+1)`. Sharp for the single-measurement case but not
    /// a joint-recovery guarantee; reported for context only.
    pub erc_mo_sharp_informational: bool,
    /// Criteria whose strict comparison sat within
    /// [`tolerances::ERC_BORDERLINE`] of the threshold.
    pub borderline: Vec<String>,
}

/// An [`ErcReport`] bundled with the certificates behind its constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErcEvaluation {
    pub report: ErcReport,
    pub delta_s_certificate: IsometryCertificate,
    pub delta_s_plus_1_certificate: IsometryCertificate,
    pub theta_certificate: OrthogonalityCertificate,
}

/// Ratio of best correct-atom metric to best incorrect-atom metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioObservation {
    /// Infinite when no incorrect atom correlates with the residual.
    #[serde(with = "crate::jsonf::real")]
    pub value: f64,
    /// Both sides were zero: the residual no longer correlates with any
    /// atom and the ratio is vacuous.
    pub degenerate: bool,
}

/// Margins of one verified iteration against each applicable lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundMargins {
    pub iteration: usize,
    #[serde(with = "crate::jsonf::real")]
    pub observed: f64,
    #[serde(with = "crate::jsonf::real")]
    pub roc_margin: f64,
    #[serde(with = "crate::jsonf::real")]
    pub ric_a_margin: f64,
    #[serde(with = "crate::jsonf::opt_real")]
    pub ric_b_margin: Option<f64>,
}

/// Outcome of replaying a recovery trace against certified bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceVerification {
    pub margins: Vec<BoundMargins>,
    pub verified_iterations: usize,
    /// Smallest margin seen; infinite when every check was vacuously safe.
    #[serde(with = "crate::jsonf::real")]
    pub min_margin: f64,
    /// No iteration qualified for verification (for example the very first
    /// selection was already wrong).
    pub vacuous: bool,
    pub pass: bool,
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `idx` to the next size-`k` combination of `0..n` in
/// lexicographic order. Returns false once the last combination is passed.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact isometry constant of order `s` with the default enumeration budget.
pub fn ric_exact(phi: &DenseMatrix, s: usize) -> Result<IsometryCertificate, CertifyError> {
    ric_exact_budgeted(phi, s, tolerances::DEFAULT_ENUMERATION_BUDGET)
}

/// Exact isometry constant of order `s`, visiting all `C(n, s)` supports.
///
/// Ties between supports realizing the same deviation go to the
/// lexicographically smallest support.
pub fn ric_exact_budgeted(
    phi: &DenseMatrix,
    s: usize,
    budget: u64,
) -> Result<IsometryCertificate, CertifyError> {
    let n = phi.cols();
    if s == 0 || s > n {
        return Err(CertifyError::InvalidOrder { order: s, cols: n });
    }
    let required = binomial(n as u64, s as u64);
    if required > budget {
        return Err(CertifyError::BudgetExceeded { required, budget });
    }

    let gram = phi.gram();
    let gd = gram.data();
    let mut idx: Vec<usize> = (0..s).collect();
    let mut buf = vec![0.0_f64; s * s];
    let mut best_dev = -1.0_f64;
    let mut best_support: Vec<usize> = Vec::new();
    let mut best_extreme = 1.0_f64;

    loop {
        for i in 0..s {
            let row = idx[i] * n;
            for j in 0..s {
                buf[i * s + j] = gd[row + idx[j]];
            }
        }
        let (lo, hi) = jacobi_extremes_in_place(&mut buf, s)?;
        let dev_low = 1.0 - lo;
        let dev_high = hi - 1.0;
        let dev = dev_low.max(dev_high).max(0.0);
        if dev > best_dev {
            best_dev = dev;
            best_support.clear();
            best_support.extend_from_slice(&idx);
            best_extreme = if dev_low >= dev_high { lo } else { hi };
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }

    Ok(IsometryCertificate {
        order: s,
        delta: best_dev,
        witness: SupportSet::new(best_support)?,
        witness_extreme: best_extreme,
    })
}

/// Exact orthogonality constant with the default enumeration budget.
pub fn roc_exact(
    phi: &DenseMatrix,
    alpha: usize,
    alpha_prime: usize,
) -> Result<OrthogonalityCertificate, CertifyError> {
    roc_exact_budgeted(phi, alpha, alpha_prime, tolerances::DEFAULT_ENUMERATION_BUDGET)
}

/// Exact orthogonality constant, visiting every ordered disjoint pair
/// `(A, B)` with `|A| = alpha`, `|B| = alpha_prime`.
pub fn roc_exact_budgeted(
    phi: &DenseMatrix,
    alpha: usize,
    alpha_prime: usize,
    budget: u64,
) -> Result<OrthogonalityCertificate, CertifyError> {
    let n = phi.cols();
    if alpha == 0 || alpha_prime == 0 || alpha + alpha_prime > n {
        return Err(CertifyError::BadOrthogonalityOrders {
            alpha,
            alpha_prime,
            cols: n,
        });
    }
    let pairs = binomial(n as u64, alpha as u64) as u128
        * binomial((n - alpha) as u64, alpha_prime as u64) as u128;
    if pairs > budget as u128 {
        return Err(CertifyError::BudgetExceeded {
            required: pairs.min(u64::MAX as u128) as u64,
            budget,
        });
    }

    let gram = phi.gram();
    let gd = gram.data();
    let mut a_idx: Vec<usize> = (0..alpha).collect();
    let mut complement: Vec<usize> = Vec::with_capacity(n - alpha);
    let mut m_buf = vec![0.0_f64; alpha * alpha_prime];
    let mut g_buf = vec![0.0_f64; alpha_prime * alpha_prime];
    let mut best_theta = -1.0_f64;
    let mut best_a: Vec<usize> = Vec::new();
    let mut best_b: Vec<usize> = Vec::new();

    loop {
        complement.clear();
        let mut cursor = 0;
        for j in 0..n {
            if cursor < alpha && a_idx[cursor] == j {
                cursor += 1;
            } else {
                complement.push(j);
            }
        }
        let c_len = complement.len();
        let mut b_rel: Vec<usize> = (0..alpha_prime).collect();
        loop {
            for (ai, &atom_a) in a_idx.iter().enumerate() {
                let row = atom_a * n;
                for (bi, &rel) in b_rel.iter().enumerate() {
                    m_buf[ai * alpha_prime + bi] = gd[row + complement[rel]];
                }
            }
            for p in 0..alpha_prime {
                for q in p..alpha_prime {
                    let mut acc = 0.0;
                    for a in 0..alpha {
                        acc += m_buf[a * alpha_prime + p] * m_buf[a * alpha_prime + q];
                    }
                    g_buf[p * alpha_prime + q] = acc;
                    g_buf[q * alpha_prime + p] = acc;
                }
            }
            let (_, hi) = jacobi_extremes_in_place(&mut g_buf, alpha_prime)?;
            let theta = hi.max(0.0).sqrt();
            if theta > best_theta {
                best_theta = theta;
                best_a.clear();
                best_a.extend_from_slice(&a_idx);
                best_b.clear();
                best_b.extend(b_rel.iter().map(|&rel| complement[rel]));
            }
            if !next_combination(&mut b_rel, c_len) {
                break;
            }
        }
        if !next_combination(&mut a_idx, n) {
            break;
        }
    }

    Ok(OrthogonalityCertificate {
        alpha,
        alpha_prime,
        theta: best_theta,
        witness_a: SupportSet::new(best_a)?,
        witness_b: SupportSet::new(best_b)?,
    })
}

/// Closed-form orthogonality constant for singleton-versus-`s` pairs:
/// for each atom `j`, the best opposing support collects the `s` largest
/// squared correlations with `j`, so
/// `θ_{1,s} = max_j sqrt(sum of the s largest ⟨φ_i, φ_j⟩², i ≠ j)`.
///
/// This path enumerates atoms, not support pairs, and serves as an
/// independent cross-check of [`roc_exact`] at `alpha = 1`.
pub fn roc_one_exact(
    phi: &DenseMatrix,
    s: usize,
) -> Result<OrthogonalityCertificate, CertifyError> {
    let n = phi.cols();
    if s == 0 || 1 + s > n {
        return Err(CertifyError::BadOrthogonalityOrders {
            alpha: 1,
            alpha_prime: s,
            cols: n,
        });
    }
    let gram = phi.gram();
    let mut best_theta = -1.0_f64;
    let mut best_atom = 0;
    let mut best_b: Vec<usize> = Vec::new();
    let mut scored: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for j in 0..n {
        scored.clear();
        for i in 0..n {
            if i != j {
                let g = gram.get(i, j);
                scored.push((g * g, i));
            }
        }
        scored.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .expect("correlations are finite")
                .then(a.1.cmp(&b.1))
        });
        let theta = scored[..s].iter().map(|(v, _)| v).sum::<f64>().sqrt();
        if theta > best_theta {
            best_theta = theta;
            best_atom = j;
            best_b = scored[..s].iter().map(|&(_, i)| i).collect();
        }
    }
    Ok(OrthogonalityCertificate {
        alpha: 1,
        alpha_prime: s,
        theta: best_theta,
        witness_a: SupportSet::new(vec![best_atom])?,
        witness_b: SupportSet::new(best_b)?,
    })
}

/// Lower bound on the correct-to-incorrect selection ratio derived from the
/// orthogonality constant: `(1-δ_s)/(θ_{1,s}·√s)`. A zero `θ_{1,s}` means
/// incorrect atoms never correlate with a supported residual; the bound is
/// then infinite.
pub fn roc_ratio_lower_bound(delta_s: f64, theta_one_s: f64, s: usize) -> f64 {
    debug_assert!(s >= 1);
    debug_assert!(delta_s >= 0.0 && theta_one_s >= 0.0);
    if theta_one_s == 0.0 {
        return f64::INFINITY;
    }
    (1.0 - delta_s) / (theta_one_s * (s as f64).sqrt())
}

/// Isometry-only relaxations of the selection-ratio bound:
/// `(1-δ_{s+1})/(δ_{s+1}·√s)` and, for `s >= 2`,
/// `(1-δ_s)·√(s-1)/(δ_s·s)`. Zero constants yield infinite bounds.
pub fn ric_ratio_lower_bounds(
    delta_s: f64,
    delta_s_plus_1: f64,
    s: usize,
) -> (f64, Option<f64>) {
    debug_assert!(s >= 1);
    let bound_a = if delta_s_plus_1 == 0.0 {
        f64::INFINITY
    } else {
        (1.0 - delta_s_plus_1) / (delta_s_plus_1 * (s as f64).sqrt())
    };
    let bound_b = if s < 2 {
        None
    } else if delta_s == 0.0 {
        Some(f64::INFINITY)
    } else {
        Some((1.0 - delta_s) * ((s - 1) as f64).sqrt() / (delta_s * s as f64))
    };
    (bound_a, bound_b)
}

/// Threshold of the isometry-step criterion: `1/(√s + 1)`.
pub fn erc2_threshold(s: usize) -> f64 {
    1.0 / ((s as f64).sqrt() + 1.0)
}

/// Threshold of the same-order criterion for `s >= 2`:
/// `√(s-1)/(√(s-1) + s)`.
pub fn erc3_threshold(s: usize) -> f64 {
    debug_assert!(s >= 2);
    let root = ((s - 1) as f64).sqrt();
    root / (root + s as f64)
}

/// A step-constant condition strong enough to imply the same-order
/// criterion: `δ_{s+1} < 1/(s + 3 - √2)`.
pub fn erc3_sufficient_ric_threshold(s: usize) -> f64 {
    1.0 / (s as f64 + 3.0 - std::f64::consts::SQRT_2)
}

fn legacy_liu_threshold(s: usize) -> f64 {
    1.0 / ((1.0 + std::f64::consts::SQRT_2) * (s as f64).sqrt())
}

fn legacy_davenport_threshold(s: usize) -> f64 {
    1.0 / (3.0 * (s as f64).sqrt())
}

fn mo_sharp_threshold(s: usize) -> f64 {
    1.0 / ((s + 1) as f64).sqrt()
}

/// Builds the criterion report from already-computed exact constants.
pub fn assemble_report(s: usize, delta_s: f64, delta_s_plus_1: f64, theta_1_s: f64) -> ErcReport {
    assert!(s >= 1, "criteria are defined for s >= 1");
    let roc_ratio_bound = roc_ratio_lower_bound(delta_s, theta_1_s, s);
    let (ric_ratio_bound_a, ric_ratio_bound_b) =
        ric_ratio_lower_bounds(delta_s, delta_s_plus_1, s);

    let erc1 = roc_ratio_bound > 1.0;
    let erc2 = delta_s_plus_1 < erc2_threshold(s);
    let erc3 = (s >= 2).then(|| delta_s < erc3_threshold(s));
    let erc_legacy_liu = delta_s_plus_1 < legacy_liu_threshold(s);
    let erc_legacy_davenport = delta_s_plus_1 < legacy_davenport_threshold(s);
    let erc_mo_sharp_informational = delta_s_plus_1 < mo_sharp_threshold(s);

    let mut borderline = Vec::new();
    if roc_ratio_bound.is_finite() && (roc_ratio_bound - 1.0).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc1".to_string());
    }
    if (delta_s_plus_1 - erc2_threshold(s)).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc2".to_string());
    }
    if s >= 2 && (delta_s - erc3_threshold(s)).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc3".to_string());
    }
    if (delta_s_plus_1 - legacy_liu_threshold(s)).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc_legacy_liu".to_string());
    }
    if (delta_s_plus_1 - legacy_davenport_threshold(s)).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc_legacy_davenport".to_string());
    }
    if (delta_s_plus_1 - mo_sharp_threshold(s)).abs() <= tolerances::ERC_BORDERLINE {
        borderline.push("erc_mo_sharp_informational".to_string());
    }

    ErcReport {
        s,
        delta_s,
        delta_s_plus_1,
        theta_1_s,
        roc_ratio_bound,
        ric_ratio_bound_a,
        ric_ratio_bound_b,
        erc1,
        erc2,
        erc3,
        erc_legacy_liu,
        erc_legacy_davenport,
        erc_mo_sharp_informational,
        borderline,
    }
}

/// Evaluates every recovery criterion at sparsity `s` with the default
/// enumeration budget.
pub fn erc_evaluate(phi: &DenseMatrix, s: usize) -> Result<ErcReport, CertifyError> {
    Ok(erc_evaluate_detailed(phi, s, tolerances::DEFAULT_ENUMERATION_BUDGET)?.report)
}

/// Evaluates every recovery criterion at sparsity `s` with an explicit
/// budget.
pub fn erc_evaluate_budgeted(
    phi: &DenseMatrix,
    s: usize,
    budget: u64,
) -> Result<ErcReport, CertifyError> {
    Ok(erc_evaluate_detailed(phi, s, budget)?.report)
}

/// Full evaluation keeping the certificates alongside the report. Needs
/// isometry orders `s` and `s+1`, so `s + 1 <= n` is required.
pub fn erc_evaluate_detailed(
    phi: &DenseMatrix,
    s: usize,
    budget: u64,
) -> Result<ErcEvaluation, CertifyError> {
    let n = phi.cols();
    if s == 0 || s + 1 > n {
        return Err(CertifyError::InvalidOrder {
            order: s.max(1) + 1,
            cols: n,
        });
    }
    let delta_s_certificate = ric_exact_budgeted(phi, s, budget)?;
    let delta_s_plus_1_certificate = ric_exact_budgeted(phi, s + 1, budget)?;
    let theta_certificate = roc_one_exact(phi, s)?;
    let report = assemble_report(
        s,
        delta_s_certificate.delta,
        delta_s_plus_1_certificate.delta,
        theta_certificate.theta,
    );
    Ok(ErcEvaluation {
        report,
        delta_s_certificate,
        delta_s_plus_1_certificate,
        theta_certificate,
    })
}

/// Ratio of the best truth-atom metric to the best off-truth metric for a
/// given residual block. A zero denominator yields the infinity marker; a
/// zero numerator and denominator additionally set the degenerate flag.
pub fn observed_ratio(
    dictionary: &DenseMatrix,
    truth: &SupportSet,
    residual: &DenseMatrix,
) -> Result<RatioObservation, CertifyError> {
    if truth.is_empty() {
        return Err(CertifyError::Support(SupportError::Empty));
    }
    truth.validate_within(dictionary.cols())?;
    if truth.len() == dictionary.cols() {
        return Err(CertifyError::TruthCoversAllAtoms);
    }
    if residual.rows() != dictionary.rows() {
        return Err(CertifyError::ResidualShape {
            dictionary_rows: dictionary.rows(),
            residual_rows: residual.rows(),
        });
    }
    let metric = |j: usize| -> f64 {
        (0..residual.cols())
            .map(|c| dictionary.column_dot(j, residual, c).abs())
            .sum()
    };
    let numerator = truth.iter().map(metric).fold(0.0_f64, f64::max);
    let denominator = truth
        .complement(dictionary.cols())
        .into_iter()
        .map(metric)
        .fold(0.0_f64, f64::max);
    if denominator == 0.0 {
        Ok(RatioObservation {
            value: f64::INFINITY,
            degenerate: numerator == 0.0,
        })
    } else {
        Ok(RatioObservation {
            value: numerator / denominator,
            degenerate: false,
        })
    }
}

fn margin_against(observed: f64, bound: f64) -> f64 {
    if observed.is_infinite() {
        f64::INFINITY
    } else if bound.is_infinite() {
        // A finite observation can never satisfy an infinite bound; this
        // only occurs if trace and report disagree about the dictionary.
        f64::NEG_INFINITY
    } else {
        observed - bound
    }
}

/// Replays a trace against the certified selection bounds of its report.
///
/// Only the iterations before the first wrong selection qualify: a wrong
/// atom in the support voids the hypothesis behind the bounds. A trace
/// whose very first pick was wrong verifies nothing and passes vacuously.
pub fn verify_trace_bounds(
    trace: &RecoveryTrace,
    report: &ErcReport,
) -> Result<TraceVerification, CertifyError> {
    let exact = trace.exact_recovery.ok_or(CertifyError::TraceWithoutTruth)?;

    let verified_iterations = if exact {
        trace.records.len()
    } else if trace.records.is_empty() {
        0
    } else if let Some(pos) = trace
        .records
        .iter()
        .position(|r| r.observed_ratio.is_none())
    {
        // The ratio disappears one iteration after the wrong selection.
        pos.saturating_sub(1)
    } else {
        // No later iteration exposed the mistake, so it was the last one.
        trace.records.len() - 1
    };

    let mut margins = Vec::with_capacity(verified_iterations);
    let mut min_margin = f64::INFINITY;
    let mut pass = true;
    for rec in &trace.records[..verified_iterations] {
        let observed = rec
            .observed_ratio
            .expect("iterations before the first error carry a ratio");
        let roc_margin = margin_against(observed, report.roc_ratio_bound);
        let ric_a_margin = margin_against(observed, report.ric_ratio_bound_a);
        let ric_b_margin = report
            .ric_ratio_bound_b
            .map(|b| margin_against(observed, b));
        for m in [Some(roc_margin), Some(ric_a_margin), ric_b_margin]
            .into_iter()
            .flatten()
        {
            min_margin = min_margin.min(m);
            if m < -tolerances::RATIO_BOUND_SLACK {
                pass = false;
            }
        }
        margins.push(BoundMargins {
            iteration: rec.iteration,
            observed,
            roc_margin,
            ric_a_margin,
            ric_b_margin,
        });
    }

    Ok(TraceVerification {
        margins,
        verified_iterations,
        min_margin,
        vacuous: verified_iterations == 0,
        pass,
    })
}
