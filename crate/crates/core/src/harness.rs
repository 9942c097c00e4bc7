//! Experiment orchestration behind the `bks` command line: the invariant
//! suite, the hidden-variable table, Born probabilities, and N-shot
//! simulations with a per-shot verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, c, matmul, matvec, tensor, CMatrix, DEFAULT_TOL};
use crate::nchv::{self, Pattern};
use crate::observables::{
    build_maximal_observable, build_product_observable_from, build_proposition_basis,
    eigen_residuals, recover_projectors, validate_coefficients, MaximalObservable, ObservableError,
    ProductLabel, PropositionBasis, SpinObservables, DEFAULT_COEFFICIENTS, PROPOSITIONS,
    RECOVERY_TOL,
};
use crate::qm::{self, Depolarizing, Preset, QmError, StateDescriptor};
use crate::rng::ShotStreams;
use crate::stats;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Qm(#[from] QmError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Whether the error stems from bad user input rather than a runtime fault.
    pub fn is_usage(&self) -> bool {
        match self {
            HarnessError::InvalidConfig(_) => true,
            HarnessError::Qm(e) => matches!(
                e,
                QmError::MalformedSpec(..)
                    | QmError::ZeroVector
                    | QmError::InvalidOrder(_)
                    | QmError::InvalidNoise(_)
            ),
            HarnessError::Observable(e) => matches!(
                e,
                ObservableError::DuplicateCoefficients(_)
                    | ObservableError::NonFiniteCoefficient(_)
            ),
            HarnessError::Io(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Joint,
    Sequential,
    Maximal,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Joint => "joint",
            Mode::Sequential => "sequential",
            Mode::Maximal => "maximal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub state_spec: String,
    pub shots: u64,
    pub master_seed: u64,
    pub mode: Mode,
    /// Eigenvalues of `H`; only used in maximal mode.
    pub coefficients: [f64; 4],
    /// 1-based measurement order for sequential mode.
    pub order: [usize; 4],
    pub noise_p: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    /// Fan shots out over the rayon pool. Output does not depend on it.
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(state_spec: impl Into<String>, shots: u64, master_seed: u64) -> Self {
        Self {
            state_spec: state_spec.into(),
            shots,
            master_seed,
            mode: Mode::Joint,
            coefficients: DEFAULT_COEFFICIENTS,
            order: [1, 2, 3, 4],
            noise_p: 0.0,
            output_format: OutputFormat::Json,
            output_path: None,
            parallel: true,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.shots == 0 {
            return Err(HarnessError::InvalidConfig(
                "shots must be at least 1".into(),
            ));
        }
        Depolarizing::new(self.noise_p)?;
        qm::validate_order(self.order)?;
        if self.mode == Mode::Maximal {
            validate_coefficients(self.coefficients)?;
        }
        self.state_spec.parse::<StateDescriptor>()?;
        Ok(())
    }
}

/// Configuration as echoed into the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub state: String,
    pub shots: u64,
    pub seed: u64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<[usize; 4]>,
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub shot_index: u64,
    /// 1-based index of the true proposition.
    pub outcome: usize,
    pub truth: [bool; 4],
    pub pattern: Pattern,
    /// Random stream the shot drew from: `chacha8:<master seed>:<stream>`.
    pub stream: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    QM,
    NCHV,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Verdict {
    /// QM when every shot shows exactly one true proposition; NCHV when some
    /// shot fits the hidden-variable patterns and none fits QM; inconclusive
    /// otherwise.
    pub fn decide(shots: u64, nchv_consistent: u64, qm_consistent: u64) -> Self {
        if qm_consistent == shots && nchv_consistent == 0 {
            Verdict::QM
        } else if nchv_consistent > 0 && qm_consistent == 0 {
            Verdict::NCHV
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::QM => "QM",
            Verdict::NCHV => "NCHV",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeStat {
    pub outcome: usize,
    pub count: u64,
    pub frequency: f64,
    pub born: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub born_probabilities: [f64; 4],
    pub counts_per_outcome: [u64; 4],
    pub outcome_stats: Vec<OutcomeStat>,
    pub counts_per_pattern: BTreeMap<Pattern, u64>,
    pub nchv_consistent_shots: u64,
    pub qm_consistent_shots: u64,
    pub verdict: Verdict,
    pub records: Vec<ExperimentRecord>,
}

struct ShotPlan<'a> {
    state: qm::TwoQubitState,
    basis: &'a PropositionBasis,
    mode: Mode,
    order: [usize; 4],
    maximal: Option<(MaximalObservable, [CMatrix; 4])>,
    noise: Depolarizing,
    streams: ShotStreams,
}

impl ShotPlan<'_> {
    fn run(&self, shot_index: u64) -> Result<ExperimentRecord, QmError> {
        let mut rng = self.streams.stream(shot_index);
        let (result, eigenvalue) = match self.noise.strike(&mut rng) {
            Some(forced) => {
                let value = self.maximal.as_ref().map(|(h, _)| h.coefficients()[forced]);
                (qm::forced_result(self.basis, forced)?, value)
            }
            None => match (self.mode, &self.maximal) {
                (Mode::Joint, _) => (qm::sample(&self.state, self.basis, &mut rng)?, None),
                (Mode::Sequential, _) => (
                    qm::sample_sequential(&self.state, self.basis, self.order, &mut rng)?,
                    None,
                ),
                (Mode::Maximal, Some((h, projectors))) => {
                    let (value, r) = qm::maximal_outcome(&self.state, h, projectors, &mut rng)?;
                    (r, Some(value))
                }
                (Mode::Maximal, None) => {
                    unreachable!("maximal observable prepared for maximal mode")
                }
            },
        };
        Ok(ExperimentRecord {
            shot_index,
            outcome: result.outcome_index,
            truth: result.truth,
            pattern: result.pattern(),
            stream: format!("chacha8:{}:{}", self.streams.master_seed(), shot_index),
            eigenvalue,
        })
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<VerdictReport, HarnessError> {
    config.validate()?;
    let descriptor: StateDescriptor = config.state_spec.parse()?;
    let state = qm::prepare(&descriptor)?;
    let basis = build_proposition_basis()?;
    let maximal = match config.mode {
        Mode::Maximal => {
            let h = build_maximal_observable(config.coefficients, &basis)?;
            let projectors = recover_projectors(&h);
            Some((h, projectors))
        }
        _ => None,
    };
    let plan = ShotPlan {
        state,
        basis: &basis,
        mode: config.mode,
        order: config.order,
        maximal,
        noise: Depolarizing::new(config.noise_p)?,
        streams: ShotStreams::new(config.master_seed),
    };
    let records: Vec<ExperimentRecord> = if config.parallel {
        (0..config.shots)
            .into_par_iter()
            .map(|k| plan.run(k))
            .collect::<Result<_, _>>()?
    } else {
        (0..config.shots)
            .map(|k| plan.run(k))
            .collect::<Result<_, _>>()?
    };
    let born = qm::born(&plan.state, &basis).probs();
    Ok(summarize(config, &descriptor, born, records))
}

fn summarize(
    config: &ExperimentConfig,
    descriptor: &StateDescriptor,
    born: [f64; 4],
    records: Vec<ExperimentRecord>,
) -> VerdictReport {
    let shots = config.shots;
    let mut counts_per_outcome = [0u64; 4];
    let mut counts_per_pattern: BTreeMap<Pattern, u64> =
        Pattern::ALL.into_iter().map(|p| (p, 0)).collect();
    for r in &records {
        counts_per_outcome[r.outcome - 1] += 1;
        *counts_per_pattern.entry(r.pattern).or_default() += 1;
    }
    let nchv_consistent_shots = counts_per_pattern
        .iter()
        .filter(|(p, _)| p.nchv_allowed())
        .map(|(_, n)| n)
        .sum();
    let qm_consistent_shots = counts_per_pattern[&Pattern::ExactlyOneTrue];
    let outcome_stats = (0..4)
        .map(|i| OutcomeStat {
            outcome: i + 1,
            count: counts_per_outcome[i],
            frequency: counts_per_outcome[i] as f64 / shots as f64,
            born: born[i],
            std_error: stats::binomial_std_error(born[i], shots),
        })
        .collect();
    VerdictReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            state: descriptor.to_string(),
            shots,
            seed: config.master_seed,
            mode: config.mode,
            coefficients: (config.mode == Mode::Maximal).then_some(config.coefficients),
            order: (config.mode == Mode::Sequential).then_some(config.order),
            noise: config.noise_p,
        },
        born_probabilities: born,
        counts_per_outcome,
        outcome_stats,
        counts_per_pattern,
        nchv_consistent_shots,
        qm_consistent_shots,
        verdict: Verdict::decide(shots, nchv_consistent_shots, qm_consistent_shots),
        records,
    }
}

/// Formats `x` with 12 significant digits in positional notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

const RECORD_HEADER: &str = "shot_index,outcome,P1,P2,P3,P4,pattern";

pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(RECORD_HEADER);
    out.push('\n');
    for r in records {
        let t = r.truth.map(u8::from);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.shot_index, r.outcome, t[0], t[1], t[2], t[3], r.pattern
        );
    }
    out
}

pub fn render_report(report: &VerdictReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => records_csv(&report.records),
    }
}

/// Human-readable summary of a run.
pub fn summary_text(report: &VerdictReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "state {} | {} shots | seed {} | mode {} | noise {}",
        report.config.state,
        report.config.shots,
        report.config.seed,
        report.config.mode.name(),
        report.config.noise
    );
    for s in &report.outcome_stats {
        let _ = writeln!(
            out,
            "  P{}: {:>8} shots  freq {}  born {}  +/- {}",
            s.outcome,
            s.count,
            sig12(s.frequency),
            sig12(s.born),
            sig12(s.std_error)
        );
    }
    for (p, n) in &report.counts_per_pattern {
        let _ = writeln!(out, "  {p:<15} {n}");
    }
    let _ = writeln!(
        out,
        "  nchv-consistent shots {} | qm-consistent shots {} | verdict {}",
        report.nchv_consistent_shots, report.qm_consistent_shots, report.verdict
    );
    out
}

#[derive(Debug, Serialize)]
struct NchvRow {
    #[serde(rename = "vA")]
    v_a_upper: i8,
    #[serde(rename = "vB")]
    v_b_upper: i8,
    va: i8,
    vb: i8,
    #[serde(rename = "P1")]
    p1: u8,
    #[serde(rename = "P2")]
    p2: u8,
    #[serde(rename = "P3")]
    p3: u8,
    #[serde(rename = "P4")]
    p4: u8,
    pattern: Pattern,
}

/// The 16-row hidden-variable table in canonical order.
pub fn run_nchv_table(format: OutputFormat) -> String {
    let rows: Vec<NchvRow> = nchv::enumerate_all()
        .into_iter()
        .map(|(h, o)| {
            let [a, b, al, bl] = h.values();
            let t = o.truth.map(u8::from);
            NchvRow {
                v_a_upper: a,
                v_b_upper: b,
                va: al,
                vb: bl,
                p1: t[0],
                p2: t[1],
                p3: t[2],
                p4: t[3],
                pattern: o.pattern,
            }
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("vA,vB,va,vb,P1,P2,P3,P4,pattern\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.v_a_upper, r.v_b_upper, r.va, r.vb, r.p1, r.p2, r.p3, r.p4, r.pattern
                );
            }
            out
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ProbsReport {
    schema_version: u32,
    state: String,
    born_probabilities: [f64; 4],
}

/// Born probabilities of the four propositions for a state descriptor.
pub fn run_qm_probs(state_spec: &str, format: OutputFormat) -> Result<String, HarnessError> {
    let descriptor: StateDescriptor = state_spec.parse()?;
    let state = qm::prepare(&descriptor)?;
    let probs = qm::born(&state, &build_proposition_basis()?).probs();
    Ok(match format {
        OutputFormat::Csv => {
            let mut out = String::from("outcome,probability\n");
            for (i, p) in probs.iter().enumerate() {
                let _ = writeln!(out, "{},{}", i + 1, sig12(*p));
            }
            out
        }
        OutputFormat::Json => {
            let report = ProbsReport {
                schema_version: SCHEMA_VERSION,
                state: descriptor.to_string(),
                born_probabilities: probs,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("probs serialize");
            s.push('\n');
            s
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn push_defect(&mut self, name: impl Into<String>, defect: f64, tol: f64) {
        self.push(
            name,
            defect < tol,
            format!("max deviation {defect:.3e} (tol {tol:e})"),
        );
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        let failed = self.failures().count();
        if failed == 0 {
            writeln!(f, "all {} checks passed", self.checks.len())
        } else {
            writeln!(f, "{failed} of {} checks FAILED", self.checks.len())
        }
    }
}

/// Every sampling-free invariant, against the canonical Pauli operators.
pub fn run_verify() -> VerifyReport {
    run_verify_with(&SpinObservables::canonical())
}

/// Runs the invariant suite with the given one-particle operators standing
/// in for A, B, a, b. The proposition states are always the canonical
/// construction, so a faulty operator shows up as failed eigenvalue
/// equations.
pub fn run_verify_with(spins: &SpinObservables) -> VerifyReport {
    let mut report = VerifyReport::default();
    let id2 = CMatrix::identity(2).expect("dim 2");

    for (name, m) in [
        ("A", &spins.z1),
        ("B", &spins.z2),
        ("a", &spins.x1),
        ("b", &spins.x2),
    ] {
        let sq = matmul(m, m)
            .map(|s| s.approx_eq(&id2, DEFAULT_TOL))
            .unwrap_or(false);
        report.push(
            format!("{name} is a Hermitian operator with eigenvalues +1, -1"),
            linalg::is_hermitian(m, DEFAULT_TOL) && sq,
            if sq {
                "squares to identity"
            } else {
                "does not square to identity"
            },
        );
    }
    let zz = tensor(&linalg::sigma_z(), &linalg::sigma_z());
    report.push(
        "tensor product basis ordering |m1 m2> -> 2 m1 + m2",
        zz.map(|m| m == CMatrix::diag_real(&[1.0, -1.0, -1.0, 1.0]).unwrap())
            .unwrap_or(false),
        "sigma_z (x) sigma_z = diag(1, -1, -1, 1)",
    );
    for label in ProductLabel::ALL {
        let ok = build_product_observable_from(spins, label).is_ok();
        report.push(
            format!("product observable {label} is a Hermitian involution"),
            ok,
            if ok { "ok" } else { "violated" },
        );
    }

    let basis = match build_proposition_basis() {
        Ok(b) => b,
        Err(e) => {
            report.push("proposition state construction", false, e.to_string());
            return report;
        }
    };
    match eigen_residuals(&basis, spins) {
        Ok(res) => {
            for (i, prop) in PROPOSITIONS.iter().enumerate() {
                report.push_defect(
                    format!("eigenvalue equations of psi_{} ({})", i + 1, prop.equation),
                    res[i][0].max(res[i][1]),
                    DEFAULT_TOL,
                );
            }
        }
        Err(e) => report.push("eigenvalue equations", false, e.to_string()),
    }
    let norm_defect = basis
        .states
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    report.push_defect("psi_1..psi_4 have unit norm", norm_defect, DEFAULT_TOL);
    report.push(
        "P_i = |psi_i><psi_i| are projectors",
        basis
            .projectors
            .iter()
            .all(|p| linalg::is_projector(p, DEFAULT_TOL)),
        "Hermitian and idempotent",
    );
    let orth = basis.orthogonality_defect().unwrap_or(f64::INFINITY);
    report.push_defect(
        "mutual orthogonality P_i P_j = 0 (i != j)",
        orth,
        DEFAULT_TOL,
    );
    let comp = basis.completeness_defect().unwrap_or(f64::INFINITY);
    report.push_defect(
        "resolution of identity P_1 + P_2 + P_3 + P_4 = 1",
        comp,
        DEFAULT_TOL,
    );
    let comm = basis.commutation_defect().unwrap_or(f64::INFINITY);
    report.push_defect("projectors commute pairwise", comm, DEFAULT_TOL);

    let product_identity = (|| {
        let zz_xx = matmul(
            &spins.product(ProductLabel::ZZ)?,
            &spins.product(ProductLabel::XX)?,
        )?;
        let zx_xz = matmul(
            &spins.product(ProductLabel::ZX)?,
            &spins.product(ProductLabel::XZ)?,
        )?;
        zz_xx.max_abs_diff(&zx_xz.scale(c(-1.0, 0.0)))
    })()
    .unwrap_or(f64::INFINITY);
    report.push_defect("(AB)(ab) = -(Ab)(aB)", product_identity, DEFAULT_TOL);

    match build_maximal_observable(DEFAULT_COEFFICIENTS, &basis) {
        Ok(h) => {
            let hermitian = linalg::is_hermitian(h.matrix(), DEFAULT_TOL);
            let spectral = basis
                .states
                .iter()
                .zip(h.coefficients())
                .map(|(psi, ci)| {
                    matvec(h.matrix(), psi)
                        .and_then(|hv| hv.sub(&psi.scale(c(ci, 0.0))))
                        .map(|d| d.norm())
                        .unwrap_or(f64::INFINITY)
                })
                .fold(0.0, f64::max);
            report.push(
                "H = sum c_i P_i is Hermitian and nondegenerate with H psi_i = c_i psi_i",
                hermitian && spectral < DEFAULT_TOL,
                format!("c = {DEFAULT_COEFFICIENTS:?}, max eigen-residual {spectral:.3e}"),
            );
            let recovery = recover_projectors(&h)
                .iter()
                .zip(&basis.projectors)
                .map(|(r, p)| r.max_abs_diff(p).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            report.push_defect(
                "projector recovery P_i = prod_{j!=i} (H - c_j)/(c_i - c_j)",
                recovery,
                RECOVERY_TOL,
            );
        }
        Err(e) => report.push("maximal observable H", false, e.to_string()),
    }

    let rows = nchv::enumerate_all();
    let nchv_report = nchv::verify_nchv_theorems();
    let witness = |h: Option<nchv::HiddenState>| {
        h.map(|h| format!("witness (vA, vB, va, vb) = {:?}", h.values()))
            .unwrap_or_else(|| "no witness".into())
    };
    report.push(
        "NCHV: propositions are not mutually exclusive",
        nchv_report.not_exclusive,
        witness(nchv_report.not_exclusive_witness),
    );
    report.push(
        "NCHV: propositions are not exhaustive",
        nchv_report.not_exhaustive,
        witness(nchv_report.not_exhaustive_witness),
    );
    let counts = nchv::pattern_counts(&rows);
    report.push(
        "NCHV: every assignment gives 4 false or 2 true",
        nchv_report.zero_or_two,
        format!(
            "{} states: AllFalse {}, ExactlyOneTrue {}, TwoTrue {}, Other {}",
            rows.len(),
            counts[0],
            counts[1],
            counts[2],
            counts[3]
        ),
    );

    let qm_report = qm::verify_qm_theorems(&basis);
    report.push(
        "QM: propositions are mutually exclusive",
        qm_report.exclusive,
        "from orthogonality",
    );
    report.push(
        "QM: propositions are exhaustive",
        qm_report.exhaustive,
        "from resolution of identity",
    );
    report.push(
        "QM: exactly one proposition true in every joint measurement",
        qm_report.one_and_only_one,
        "exclusive and exhaustive",
    );
    let worst_sum = Preset::ALL
        .into_iter()
        .map(|p| {
            qm::prepare(&StateDescriptor::Preset(p))
                .map(|s| (qm::born(&s, &basis).probs().iter().sum::<f64>() - 1.0).abs())
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    report.push_defect(
        "Born probabilities sum to 1 on every preset",
        worst_sum,
        DEFAULT_TOL,
    );
    report
}
