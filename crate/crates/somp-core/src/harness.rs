//! Seeded Monte-Carlo campaigns tying recovery-criterion verdicts to
//! observed greedy-recovery behavior, plus a randomized boundary probe that
//! blends a dictionary toward rank deficiency.
//!
//! Every random draw comes from a counter-based stream keyed by
//! `(seed, trial index, purpose)`, so trials are reproducible in isolation
//! and campaigns parallelize without changing their output.

use crate::certify::{
    erc_evaluate_detailed, verify_trace_bounds, CertifyError, ErcReport, TraceVerification,
};
use crate::linalg::{qr_decompose, LinalgError};
use crate::matrix::DenseMatrix;
use crate::pursuit::{omp, somp, JointSparseSignal, PursuitError, RecoveryTrace};
use crate::support::SupportSet;
use crate::tolerances;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {}", problems.join("; "))]
    InvalidConfig { problems: Vec<String> },
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Pursuit(#[from] PursuitError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Distribution of the nonzero signal coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeModel {
    /// Unit magnitude with equiprobable sign.
    #[default]
    Unit,
    /// Standard normal, resampled while any entry would fall below
    /// [`tolerances::SIGNAL_MIN_MAGNITUDE`].
    Gaussian,
    /// Equiprobable ±1.
    Rademacher,
}

/// Everything that defines one campaign; echoed verbatim into the report so
/// results stay auditable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    /// Measurement dimension (rows of the dictionary).
    pub m: usize,
    /// Number of atoms (columns of the dictionary).
    pub n: usize,
    /// Number of jointly sparse measurement columns.
    pub k: usize,
    /// Joint sparsity of the generated signals.
    pub s: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub amplitude_model: AmplitudeModel,
    #[serde(default = "default_true")]
    pub normalize_columns: bool,
    /// Replace the dictionary by the orthonormal factor of its QR
    /// decomposition; requires `m >= n`.
    #[serde(default)]
    pub orthogonalize: bool,
    /// Probability of zeroing each supported entry independently. Nonzero
    /// values give strict-subset per-column supports; recovery is then
    /// judged against the realized union support.
    #[serde(default)]
    pub per_column_drop_probability: f64,
}

fn default_true() -> bool {
    true
}

impl TrialConfig {
    /// Collects every constraint violation instead of stopping at the first.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let mut problems = Vec::new();
        if self.m == 0 {
            problems.push("m must be at least 1".to_string());
        }
        if self.n == 0 {
            problems.push("n must be at least 1".to_string());
        }
        if self.k == 0 {
            problems.push("k must be at least 1".to_string());
        }
        if self.trials == 0 {
            problems.push("trials must be at least 1".to_string());
        }
        if self.s == 0 {
            problems.push("s must be at least 1".to_string());
        } else {
            if self.s > self.m.min(self.n) {
                problems.push(format!(
                    "s = {} exceeds min(m, n) = {}",
                    self.s,
                    self.m.min(self.n)
                ));
            }
            if self.s + 1 > self.n {
                problems.push(format!(
                    "criteria need isometry order s + 1 = {} but n = {}",
                    self.s + 1,
                    self.n
                ));
            }
        }
        if !(0.0..1.0).contains(&self.per_column_drop_probability) {
            problems.push(format!(
                "per_column_drop_probability = {} outside [0, 1)",
                self.per_column_drop_probability
            ));
        }
        if self.orthogonalize && self.m < self.n {
            problems.push(format!(
                "orthogonalize needs m >= n, got m = {}, n = {}",
                self.m, self.n
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(HarnessError::InvalidConfig { problems })
        }
    }
}

const TAG_DICTIONARY: u64 = 1;
const TAG_SUPPORT: u64 = 2;
const TAG_AMPLITUDE: u64 = 3;
const TAG_DROP: u64 = 4;
const TAG_PROBE: u64 = 5;

/// Independent random stream for one `(seed, trial, purpose)` triple.
fn stream_rng(seed: u64, trial: u64, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&tag.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn fill_gaussian_column(mat: &mut DenseMatrix, col: usize, rng: &mut ChaCha8Rng) {
    for row in 0..mat.rows() {
        mat.set(row, col, rng.sample(StandardNormal));
    }
}

/// Draws the dictionary for one trial: independent standard normal entries,
/// then unit-norm columns or full orthogonalization per the config.
pub fn gen_dictionary(config: &TrialConfig, trial: u64) -> DenseMatrix {
    let mut rng = stream_rng(config.seed, trial, TAG_DICTIONARY);
    let mut phi = DenseMatrix::zeros(config.m, config.n);
    for col in 0..config.n {
        loop {
            fill_gaussian_column(&mut phi, col, &mut rng);
            if phi.column_norm(col) > 1e-12 {
                break;
            }
        }
        if config.normalize_columns && !config.orthogonalize {
            phi.scale_column(col, 1.0 / phi.column_norm(col));
        }
    }
    if config.orthogonalize {
        qr_decompose(&phi)
            .expect("a validated config admits a QR factorization")
            .q
    } else {
        phi
    }
}

/// Draws the jointly sparse coefficient block for one trial.
pub fn gen_signal(config: &TrialConfig, trial: u64) -> JointSparseSignal {
    let mut support_rng = stream_rng(config.seed, trial, TAG_SUPPORT);
    let drawn = rand::seq::index::sample(&mut support_rng, config.n, config.s).into_vec();
    let support = SupportSet::new(drawn).expect("sampled indices are distinct and in range");

    let mut amplitude_rng = stream_rng(config.seed, trial, TAG_AMPLITUDE);
    let mut coefficients = DenseMatrix::zeros(config.n, config.k);
    for &row in support.indices() {
        for col in 0..config.k {
            let value = match config.amplitude_model {
                AmplitudeModel::Unit | AmplitudeModel::Rademacher => {
                    if amplitude_rng.gen::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
                AmplitudeModel::Gaussian => loop {
                    let v: f64 = amplitude_rng.sample(StandardNormal);
                    if v.abs() >= tolerances::SIGNAL_MIN_MAGNITUDE {
                        break v;
                    }
                },
            };
            coefficients.set(row, col, value);
        }
    }

    if config.per_column_drop_probability > 0.0 {
        let mut drop_rng = stream_rng(config.seed, trial, TAG_DROP);
        loop {
            let mut dropped = coefficients.clone();
            let mut union: Vec<usize> = Vec::new();
            for &row in support.indices() {
                let mut kept_any = false;
                for col in 0..config.k {
                    if drop_rng.gen::<f64>() < config.per_column_drop_probability {
                        dropped.set(row, col, 0.0);
                    } else {
                        kept_any = true;
                    }
                }
                if kept_any {
                    union.push(row);
                }
            }
            if !union.is_empty() {
                let realized =
                    SupportSet::new(union).expect("union rows are distinct and in range");
                return JointSparseSignal::new(dropped, realized)
                    .expect("dropped block matches its realized union support");
            }
        }
    }

    JointSparseSignal::new(coefficients, support)
        .expect("generated block matches its drawn support")
}

/// One campaign trial: criterion verdicts, recovery outcome, and the
/// smallest verified-iteration margin against the certified bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    /// Realized joint sparsity (differs from `config.s` only under
    /// per-column drops).
    pub sparsity: usize,
    pub erc1: bool,
    pub erc2: bool,
    pub erc3: Option<bool>,
    pub erc_any: bool,
    pub exact_recovery: bool,
    pub early_stop: bool,
    #[serde(with = "crate::jsonf::real")]
    pub min_ratio_margin: f64,
    pub verified_iterations: usize,
    pub delta_s: f64,
    pub delta_s_plus_1: f64,
    pub theta_1_s: f64,
    #[serde(with = "crate::jsonf::real")]
    pub roc_ratio_bound: f64,
    #[serde(with = "crate::jsonf::real")]
    pub ric_ratio_bound_a: f64,
    #[serde(with = "crate::jsonf::opt_real")]
    pub ric_ratio_bound_b: Option<f64>,
}

/// Recovery counts within the sub-population where one criterion held.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketStats {
    pub count: usize,
    pub recovered: usize,
    /// `None` when the bucket is empty: the conditional rate is not
    /// applicable rather than zero.
    pub rate: Option<f64>,
}

fn bucket<'a, I: Iterator<Item = &'a TrialRecord>>(records: I, held: fn(&TrialRecord) -> bool) -> BucketStats {
    let mut count = 0;
    let mut recovered = 0;
    for r in records.filter(|r| held(r)) {
        count += 1;
        if r.exact_recovery {
            recovered += 1;
        }
    }
    BucketStats {
        count,
        recovered,
        rate: (count > 0).then(|| recovered as f64 / count as f64),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignAggregates {
    pub trials: usize,
    pub recovered: usize,
    pub recovery_rate: f64,
    pub erc1: BucketStats,
    pub erc2: BucketStats,
    pub erc3: BucketStats,
    pub erc_any: BucketStats,
    /// Trials where some criterion held yet recovery failed. Soundness of
    /// the criteria demands zero.
    pub erc_true_but_failed: usize,
    #[serde(with = "crate::jsonf::real")]
    pub min_ratio_margin: f64,
}

/// Full campaign output. The wall time is reported to callers but excluded
/// from serialization so identical configs produce byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub config: TrialConfig,
    pub trials: Vec<TrialRecord>,
    pub aggregates: CampaignAggregates,
    #[serde(skip)]
    pub wall_time_seconds: f64,
}

fn run_trial(config: &TrialConfig, trial: u64, budget: u64) -> Result<TrialRecord, HarnessError> {
    let phi = gen_dictionary(config, trial);
    let signal = gen_signal(config, trial);
    let measurements = phi.matmul(signal.coefficients())?;
    let truth = signal.joint_support();
    let sparsity = truth.len();
    let report = erc_evaluate_detailed(&phi, sparsity, budget)?.report;
    let trace = somp(&phi, &measurements, sparsity, Some(truth))?;
    let verification = verify_trace_bounds(&trace, &report)?;
    Ok(trial_record(trial, sparsity, &report, &trace, &verification))
}

fn trial_record(
    trial_index: u64,
    sparsity: usize,
    report: &ErcReport,
    trace: &RecoveryTrace,
    verification: &TraceVerification,
) -> TrialRecord {
    TrialRecord {
        trial_index,
        sparsity,
        erc1: report.erc1,
        erc2: report.erc2,
        erc3: report.erc3,
        erc_any: report.erc1 || report.erc2 || report.erc3 == Some(true),
        exact_recovery: trace.exact_recovery == Some(true),
        early_stop: trace.early_stop,
        min_ratio_margin: verification.min_margin,
        verified_iterations: verification.verified_iterations,
        delta_s: report.delta_s,
        delta_s_plus_1: report.delta_s_plus_1,
        theta_1_s: report.theta_1_s,
        roc_ratio_bound: report.roc_ratio_bound,
        ric_ratio_bound_a: report.ric_ratio_bound_a,
        ric_ratio_bound_b: report.ric_ratio_bound_b,
    }
}

/// Runs a campaign with the default enumeration budget.
pub fn run_campaign(config: &TrialConfig) -> Result<CampaignReport, HarnessError> {
    run_campaign_budgeted(config, tolerances::DEFAULT_ENUMERATION_BUDGET)
}

/// Runs every trial of a campaign, in parallel, and reduces the records in
/// trial order.
pub fn run_campaign_budgeted(
    config: &TrialConfig,
    budget: u64,
) -> Result<CampaignReport, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Result<TrialRecord, HarnessError>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| run_trial(config, trial, budget))
        .collect();
    let mut records = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        records.push(outcome?);
    }

    let recovered = records.iter().filter(|r| r.exact_recovery).count();
    let erc_true_but_failed = records
        .iter()
        .filter(|r| r.erc_any && !r.exact_recovery)
        .count();
    let min_ratio_margin = records
        .iter()
        .map(|r| r.min_ratio_margin)
        .fold(f64::INFINITY, f64::min);
    let aggregates = CampaignAggregates {
        trials: records.len(),
        recovered,
        recovery_rate: recovered as f64 / records.len() as f64,
        erc1: bucket(records.iter(), |r| r.erc1),
        erc2: bucket(records.iter(), |r| r.erc2),
        erc3: bucket(records.iter(), |r| r.erc3 == Some(true)),
        erc_any: bucket(records.iter(), |r| r.erc_any),
        erc_true_but_failed,
        min_ratio_margin,
    };
    Ok(CampaignReport {
        config: config.clone(),
        trials: records,
        aggregates,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

fn csv_real(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

/// Writes one row per trial, suitable for plotting tools.
pub fn write_campaign_csv<W: Write>(report: &CampaignReport, out: &mut W) -> io::Result<()> {
    writeln!(
        out,
        "trial_index,sparsity,erc1,erc2,erc3,erc_any,exact_recovery,early_stop,\
         min_ratio_margin,verified_iterations,delta_s,delta_s_plus_1,theta_1_s,\
         roc_ratio_bound,ric_ratio_bound_a,ric_ratio_bound_b"
    )?;
    for r in &report.trials {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.trial_index,
            r.sparsity,
            r.erc1,
            r.erc2,
            r.erc3.map_or_else(|| "na".to_string(), |b| b.to_string()),
            r.erc_any,
            r.exact_recovery,
            r.early_stop,
            csv_real(r.min_ratio_margin),
            r.verified_iterations,
            csv_real(r.delta_s),
            csv_real(r.delta_s_plus_1),
            csv_real(r.theta_1_s),
            csv_real(r.roc_ratio_bound),
            csv_real(r.ric_ratio_bound_a),
            r.ric_ratio_bound_b
                .map_or_else(|| "na".to_string(), csv_real),
        )?;
    }
    Ok(())
}

/// One step of the boundary probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeInstance {
    pub step: usize,
    /// Blend weight toward the rank-one target; 0 is the unperturbed
    /// random dictionary, 1 collapses every column onto one direction.
    pub blend: f64,
    pub delta_s: f64,
    pub delta_s_plus_1: f64,
    pub theta_1_s: f64,
    pub erc1: bool,
    pub erc2: bool,
    pub erc3: Option<bool>,
    pub erc_any: bool,
    pub exact_recovery: bool,
    pub early_stop: bool,
    /// On failures: whether greedy recovery on replicated copies of the
    /// first measurement column selected the same atoms as the
    /// single-measurement run. `None` when recovery succeeded.
    pub replicated_equivalence: Option<bool>,
}

/// Boundary-probe output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub config: TrialConfig,
    pub steps: usize,
    pub instances: Vec<ProbeInstance>,
    pub failures: usize,
    /// Failures where some criterion still held; soundness demands zero.
    pub failures_with_some_erc_true: usize,
    /// Successful recoveries with every criterion false: evidence the
    /// criteria are sufficient but not necessary.
    pub successes_with_all_erc_false: usize,
    pub replicated_equivalence_failures: usize,
}

fn replicate_column(y: &DenseMatrix, copies: usize) -> DenseMatrix {
    let mut rep = DenseMatrix::zeros(y.rows(), copies);
    for row in 0..y.rows() {
        for col in 0..copies {
            rep.set(row, col, y.get(row, 0));
        }
    }
    rep
}

fn selected_atoms(trace: &RecoveryTrace) -> Vec<usize> {
    trace.records.iter().map(|r| r.selected_atom).collect()
}

/// Gradually correlates a random dictionary toward a rank-one target and
/// records how the criteria and recovery degrade along the way.
pub fn boundary_probe(
    base: &TrialConfig,
    perturbation_steps: usize,
) -> Result<ProbeReport, HarnessError> {
    boundary_probe_budgeted(base, perturbation_steps, tolerances::DEFAULT_ENUMERATION_BUDGET)
}

pub fn boundary_probe_budgeted(
    base: &TrialConfig,
    perturbation_steps: usize,
    budget: u64,
) -> Result<ProbeReport, HarnessError> {
    base.validate()?;
    let origin = gen_dictionary(base, 0);
    let mut probe_rng = stream_rng(base.seed, 0, TAG_PROBE);
    let mut target = DenseMatrix::zeros(base.m, 1);
    loop {
        fill_gaussian_column(&mut target, 0, &mut probe_rng);
        if target.column_norm(0) > 1e-12 {
            break;
        }
    }
    target.scale_column(0, 1.0 / target.column_norm(0));

    let mut instances = Vec::with_capacity(perturbation_steps);
    for step in 0..perturbation_steps {
        let blend = if perturbation_steps > 1 {
            step as f64 / (perturbation_steps - 1) as f64
        } else {
            0.0
        };
        let mut phi = DenseMatrix::zeros(base.m, base.n);
        for col in 0..base.n {
            for row in 0..base.m {
                let v = (1.0 - blend) * origin.get(row, col) + blend * target.get(row, 0);
                phi.set(row, col, v);
            }
            let norm = phi.column_norm(col);
            if norm <= 1e-12 {
                // The blend cancelled this column; fall back to the target
                // direction so the dictionary stays usable.
                for row in 0..base.m {
                    phi.set(row, col, target.get(row, 0));
                }
            } else {
                phi.scale_column(col, 1.0 / norm);
            }
        }

        let signal = gen_signal(base, step as u64);
        let truth = signal.joint_support();
        let sparsity = truth.len();
        let measurements = phi.matmul(signal.coefficients())?;
        let report = erc_evaluate_detailed(&phi, sparsity, budget)?.report;
        let trace = somp(&phi, &measurements, sparsity, Some(truth))?;
        let exact = trace.exact_recovery == Some(true);

        let replicated_equivalence = if exact {
            None
        } else {
            let y0 = measurements.column(0);
            let single = omp(&phi, &y0, sparsity, Some(truth))?;
            let mut holds = true;
            for copies in [2_usize, 4] {
                let rep = replicate_column(&y0, copies);
                let joint = somp(&phi, &rep, sparsity, Some(truth))?;
                if selected_atoms(&joint) != selected_atoms(&single)
                    || joint.exact_recovery != single.exact_recovery
                {
                    holds = false;
                }
            }
            Some(holds)
        };

        instances.push(ProbeInstance {
            step,
            blend,
            delta_s: report.delta_s,
            delta_s_plus_1: report.delta_s_plus_1,
            theta_1_s: report.theta_1_s,
            erc1: report.erc1,
            erc2: report.erc2,
            erc3: report.erc3,
            erc_any: report.erc1 || report.erc2 || report.erc3 == Some(true),
            exact_recovery: exact,
            early_stop: trace.early_stop,
            replicated_equivalence,
        });
    }

    let failures = instances.iter().filter(|i| !i.exact_recovery).count();
    let failures_with_some_erc_true = instances
        .iter()
        .filter(|i| !i.exact_recovery && i.erc_any)
        .count();
    let successes_with_all_erc_false = instances
        .iter()
        .filter(|i| i.exact_recovery && !i.erc_any)
        .count();
    let replicated_equivalence_failures = instances
        .iter()
        .filter(|i| i.replicated_equivalence == Some(false))
        .count();
    Ok(ProbeReport {
        config: base.clone(),
        steps: perturbation_steps,
        instances,
        failures,
        failures_with_some_erc_true,
        successes_with_all_erc_false,
        replicated_equivalence_failures,
    })
}
