//! Quantum side of the test: state preparation, Born probabilities for the
//! joint measurement of P1..P4, seeded sampling with collapse, sequential
//! measurement of the commuting projectors, and measurement of the
//! maximal observable `H`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{c, inner, matvec, CMatrix, CVector, LinalgError, DEFAULT_TOL};
use crate::nchv::Pattern;
use crate::observables::{
    recover_projectors, MaximalObservable, ObservableError, PropositionBasis,
};
use crate::rng::uniform;

/// Probabilities below this are treated as exactly zero.
pub const PROB_FLOOR: f64 = 1e-14;

/// States whose norm falls below this cannot be normalized.
pub const MIN_NORM: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error("malformed state descriptor {0:?}: {1}")]
    MalformedSpec(String, String),
    #[error("explicit amplitudes form the zero vector")]
    ZeroVector,
    #[error("degenerate state (norm {0:e})")]
    DegenerateState(f64),
    #[error("measurement order {0:?} is not a permutation of 1..4")]
    InvalidOrder([usize; 4]),
    #[error("noise probability {0} outside [0, 1]")]
    InvalidNoise(f64),
    #[error("sequential measurement produced {0} true propositions")]
    SequentialInconsistency(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    PhiPlus,
    PsiMinus,
    Psi3,
    Psi4,
    UpUp,
    PlusPlus,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::PhiPlus,
        Preset::PsiMinus,
        Preset::Psi3,
        Preset::Psi4,
        Preset::UpUp,
        Preset::PlusPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::PhiPlus => "phi+",
            Preset::PsiMinus => "psi-",
            Preset::Psi3 => "psi3",
            Preset::Psi4 => "psi4",
            Preset::UpUp => "up-up",
            Preset::PlusPlus => "plus-plus",
        }
    }

    fn amplitudes(self) -> [f64; 4] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Preset::PhiPlus => [s, 0.0, 0.0, s],
            Preset::PsiMinus => [0.0, s, -s, 0.0],
            Preset::Psi3 => [0.5, 0.5, 0.5, -0.5],
            Preset::Psi4 => [0.5, -0.5, -0.5, -0.5],
            Preset::UpUp => [1.0, 0.0, 0.0, 0.0],
            Preset::PlusPlus => [0.5, 0.5, 0.5, 0.5],
        }
    }
}

/// Parsed form of `preset:<name>`, `amps:<re,im;re,im;re,im;re,im>` or
/// `random:<seed>`.
#[derive(Debug, Clone, PartialEq)]
pub enum StateDescriptor {
    Preset(Preset),
    Amplitudes([Complex64; 4]),
    Random(u64),
}

impl FromStr for StateDescriptor {
    type Err = QmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| QmError::MalformedSpec(s.to_string(), why.to_string());
        let (kind, body) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match kind {
            "preset" => Preset::ALL
                .into_iter()
                .find(|p| p.name() == body)
                .map(StateDescriptor::Preset)
                .ok_or_else(|| bad("unknown preset")),
            "amps" => {
                let parts: Vec<&str> = body.split(';').collect();
                if parts.len() != 4 {
                    return Err(bad("expected four re,im pairs"));
                }
                let mut amps = [Complex64::new(0.0, 0.0); 4];
                for (slot, part) in amps.iter_mut().zip(parts) {
                    let (re, im) = part.split_once(',').ok_or_else(|| bad("expected re,im"))?;
                    let re: f64 = re.trim().parse().map_err(|_| bad("bad real part"))?;
                    let im: f64 = im.trim().parse().map_err(|_| bad("bad imaginary part"))?;
                    if !re.is_finite() || !im.is_finite() {
                        return Err(bad("non-finite amplitude"));
                    }
                    *slot = c(re, im);
                }
                Ok(StateDescriptor::Amplitudes(amps))
            }
            "random" => body
                .parse()
                .map(StateDescriptor::Random)
                .map_err(|_| bad("seed must be an unsigned 64-bit integer")),
            _ => Err(bad("unknown kind")),
        }
    }
}

impl fmt::Display for StateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateDescriptor::Preset(p) => write!(f, "preset:{}", p.name()),
            StateDescriptor::Amplitudes(a) => {
                let parts: Vec<String> = a.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
                write!(f, "amps:{}", parts.join(";"))
            }
            StateDescriptor::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Preset(Preset),
    Explicit,
    Random {
        seed: u64,
    },
    /// Post-measurement state after the given outcome (1-based).
    Collapsed {
        outcome: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    amplitudes: CVector,
    provenance: Provenance,
}

impl TwoQubitState {
    /// Normalizes `amplitudes`; fails on vectors too short to normalize.
    pub fn from_vector(amplitudes: &CVector, provenance: Provenance) -> Result<Self, QmError> {
        if amplitudes.dim() != 4 {
            return Err(LinalgError::DimensionMismatch {
                expected: 4,
                actual: amplitudes.dim(),
            }
            .into());
        }
        let unit = amplitudes
            .normalized(MIN_NORM)
            .ok_or(QmError::DegenerateState(amplitudes.norm()))?;
        Ok(Self {
            amplitudes: unit,
            provenance,
        })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.scale(Complex64::from_polar(1.0, theta)),
            provenance: self.provenance.clone(),
        }
    }

    /// `<state| m |state>`.
    pub fn expectation(&self, m: &CMatrix) -> Result<Complex64, LinalgError> {
        inner(&self.amplitudes, &matvec(m, &self.amplitudes)?)
    }
}

/// Haar-random pure state: eight independent standard normals, normalized.
pub fn haar_random_state(seed: u64) -> TwoQubitState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let entries: Vec<Complex64> = (0..4)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            })
            .collect();
        let v = CVector::new(entries).expect("four finite entries");
        if let Ok(state) = TwoQubitState::from_vector(&v, Provenance::Random { seed }) {
            return state;
        }
    }
}

pub fn prepare(spec: &StateDescriptor) -> Result<TwoQubitState, QmError> {
    match spec {
        StateDescriptor::Preset(p) => TwoQubitState::from_vector(
            &CVector::from_real(&p.amplitudes())?,
            Provenance::Preset(*p),
        ),
        StateDescriptor::Amplitudes(a) => {
            let v = CVector::new(a.to_vec())?;
            if v.norm() == 0.0 {
                return Err(QmError::ZeroVector);
            }
            TwoQubitState::from_vector(&v, Provenance::Explicit)
        }
        StateDescriptor::Random(seed) => Ok(haar_random_state(*seed)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BornDistribution {
    probs: [f64; 4],
}

impl BornDistribution {
    /// Clamps values below [`PROB_FLOOR`] to zero.
    pub fn from_raw(raw: [f64; 4]) -> Self {
        Self {
            probs: raw.map(|p| if p < PROB_FLOOR { 0.0 } else { p.min(1.0) }),
        }
    }

    pub fn uniform() -> Self {
        Self { probs: [0.25; 4] }
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    /// 0-based outcome for one uniform draw `u` in [0, 1): the first index
    /// whose cumulative probability exceeds `u`, in order P1..P4. Draws that
    /// land past the rounded total fall to the last outcome with nonzero
    /// probability.
    pub fn inverse_cdf(&self, u: f64) -> usize {
        let mut cumulative = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            cumulative += p;
            if u < cumulative {
                return i;
            }
        }
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("at least one outcome has nonzero probability")
    }
}

/// `|<psi_i|state>|^2` for each proposition state.
pub fn born(state: &TwoQubitState, basis: &PropositionBasis) -> BornDistribution {
    let raw = std::array::from_fn(|i| {
        inner(basis.state(i), state.amplitudes())
            .expect("both dimension 4")
            .norm_sqr()
    });
    BornDistribution::from_raw(raw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult {
    /// 1-based index of the true proposition.
    pub outcome_index: usize,
    pub post_state: TwoQubitState,
    pub truth: [bool; 4],
}

impl MeasurementResult {
    pub fn pattern(&self) -> Pattern {
        Pattern::classify(&self.truth)
    }
}

fn one_hot(index: usize) -> [bool; 4] {
    std::array::from_fn(|i| i == index)
}

fn collapse(
    state: &TwoQubitState,
    projector: &CMatrix,
    outcome: usize,
) -> Result<TwoQubitState, QmError> {
    let projected = matvec(projector, state.amplitudes())?;
    TwoQubitState::from_vector(&projected, Provenance::Collapsed { outcome })
}

fn result_for(
    state: &TwoQubitState,
    projector: &CMatrix,
    index: usize,
) -> Result<MeasurementResult, QmError> {
    Ok(MeasurementResult {
        outcome_index: index + 1,
        post_state: collapse(state, projector, index + 1)?,
        truth: one_hot(index),
    })
}

fn check_state(state: &TwoQubitState) -> Result<(), QmError> {
    let n = state.amplitudes().norm();
    if n < MIN_NORM || !n.is_finite() {
        return Err(QmError::DegenerateState(n));
    }
    Ok(())
}

/// Joint measurement of P1..P4: one uniform draw, inverse CDF, collapse.
pub fn sample<R: Rng + ?Sized>(
    state: &TwoQubitState,
    basis: &PropositionBasis,
    rng: &mut R,
) -> Result<MeasurementResult, QmError> {
    check_state(state)?;
    let index = born(state, basis).inverse_cdf(uniform(rng));
    result_for(state, basis.projector(index), index)
}

/// Measures the binary observables P_k one at a time in `order` (1-based
/// permutation), collapsing onto `P_k` or `1 - P_k` after each.
pub fn sample_sequential<R: Rng + ?Sized>(
    state: &TwoQubitState,
    basis: &PropositionBasis,
    order: [usize; 4],
    rng: &mut R,
) -> Result<MeasurementResult, QmError> {
    validate_order(order)?;
    check_state(state)?;
    let id = CMatrix::identity(4)?;
    let mut current = state.clone();
    let mut truth = [false; 4];
    for &k in &order {
        let projector = basis.projector(k - 1);
        let p = current.expectation(projector)?.re;
        let p = if p < PROB_FLOOR {
            0.0
        } else if p > 1.0 - PROB_FLOOR {
            1.0
        } else {
            p
        };
        let yes = uniform(rng) < p;
        truth[k - 1] = yes;
        current = if yes {
            collapse(&current, projector, k)?
        } else {
            let complement = id.sub(projector)?;
            let projected = matvec(&complement, current.amplitudes())?;
            TwoQubitState::from_vector(&projected, current.provenance().clone())?
        };
    }
    let count = truth.iter().filter(|&&t| t).count();
    if count != 1 {
        return Err(QmError::SequentialInconsistency(count));
    }
    let index = truth.iter().position(|&t| t).expect("one true");
    Ok(MeasurementResult {
        outcome_index: index + 1,
        post_state: TwoQubitState {
            amplitudes: current.amplitudes,
            provenance: Provenance::Collapsed { outcome: index + 1 },
        },
        truth,
    })
}

pub fn validate_order(order: [usize; 4]) -> Result<(), QmError> {
    let mut seen = [false; 4];
    for &k in &order {
        if !(1..=4).contains(&k) || seen[k - 1] {
            return Err(QmError::InvalidOrder(order));
        }
        seen[k - 1] = true;
    }
    Ok(())
}

/// Measures `H` and reports the eigenvalue `c_i` alongside the outcome. The
/// outcome probabilities come from the projectors recovered as polynomials
/// in `H`.
pub fn measure_maximal<R: Rng + ?Sized>(
    state: &TwoQubitState,
    h: &MaximalObservable,
    rng: &mut R,
) -> Result<(f64, MeasurementResult), QmError> {
    check_state(state)?;
    let projectors = recover_projectors(h);
    maximal_outcome(state, h, &projectors, rng)
}

/// Same as [`measure_maximal`] with projectors recovered once by the caller.
pub fn maximal_outcome<R: Rng + ?Sized>(
    state: &TwoQubitState,
    h: &MaximalObservable,
    projectors: &[CMatrix; 4],
    rng: &mut R,
) -> Result<(f64, MeasurementResult), QmError> {
    let mut raw = [0.0; 4];
    for (slot, p) in raw.iter_mut().zip(projectors) {
        *slot = state.expectation(p)?.re;
    }
    let index = BornDistribution::from_raw(raw).inverse_cdf(uniform(rng));
    let result = result_for(state, &projectors[index], index)?;
    Ok((h.coefficients()[index], result))
}

/// Optional noise stand-in: with probability `p` a shot's outcome is drawn
/// uniformly instead of from the Born distribution. Off by default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Depolarizing {
    p: f64,
}

impl Depolarizing {
    pub fn new(p: f64) -> Result<Self, QmError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QmError::InvalidNoise(p));
        }
        Ok(Self { p })
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    /// Draws nothing when the knob is off, so noise-free runs keep their
    /// random streams untouched. Otherwise returns the forced 0-based outcome
    /// when noise strikes.
    pub fn strike<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.p == 0.0 {
            return None;
        }
        if uniform(rng) < self.p {
            Some(BornDistribution::uniform().inverse_cdf(uniform(rng)))
        } else {
            None
        }
    }
}

/// Result of a forced outcome: the post-measurement state is the outcome's
/// basis state itself, since the input may have no weight there.
pub fn forced_result(basis: &PropositionBasis, index: usize) -> Result<MeasurementResult, QmError> {
    Ok(MeasurementResult {
        outcome_index: index + 1,
        post_state: TwoQubitState::from_vector(
            basis.state(index),
            Provenance::Collapsed { outcome: index + 1 },
        )?,
        truth: one_hot(index),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmReport {
    /// P_i P_j = 0 for i != j.
    pub exclusive: bool,
    /// sum_i P_i = 1.
    pub exhaustive: bool,
    /// Exactly one proposition true per joint measurement.
    pub one_and_only_one: bool,
}

impl QmReport {
    pub fn all_hold(&self) -> bool {
        self.exclusive && self.exhaustive && self.one_and_only_one
    }
}

pub fn verify_qm_theorems(basis: &PropositionBasis) -> QmReport {
    let exclusive = matches!(basis.orthogonality_defect(), Ok(d) if d < DEFAULT_TOL);
    let exhaustive = matches!(basis.completeness_defect(), Ok(d) if d < DEFAULT_TOL);
    QmReport {
        exclusive,
        exhaustive,
        one_and_only_one: exclusive && exhaustive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{build_maximal_observable, build_proposition_basis};
    use crate::rng::ShotStreams;
    use crate::stats;

    fn basis() -> PropositionBasis {
        build_proposition_basis().unwrap()
    }

    fn preset(p: Preset) -> TwoQubitState {
        prepare(&StateDescriptor::Preset(p)).unwrap()
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(
            "preset:phi+".parse::<StateDescriptor>().unwrap(),
            StateDescriptor::Preset(Preset::PhiPlus)
        );
        assert_eq!(
            "random:42".parse::<StateDescriptor>().unwrap(),
            StateDescriptor::Random(42)
        );
        let amps: StateDescriptor = "amps:1,0;0,0.5;0,0;-1,0".parse().unwrap();
        assert_eq!(
            amps,
            StateDescriptor::Amplitudes([c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.0), c(-1.0, 0.0)])
        );
        assert_eq!(amps.to_string().parse::<StateDescriptor>().unwrap(), amps);
        for bad in [
            "phi+",
            "preset:bogus",
            "amps:1,0;0,0",
            "amps:1;0;0;0",
            "amps:x,0;0,0;0,0;0,0",
            "amps:NaN,0;0,0;0,0;0,0",
            "random:-3",
            "mixed:1",
        ] {
            assert!(
                matches!(
                    bad.parse::<StateDescriptor>(),
                    Err(QmError::MalformedSpec(..))
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn prepare_examples() {
        let b = basis();
        let phi = preset(Preset::PhiPlus);
        assert!(phi.amplitudes().sub(b.state(0)).unwrap().max_abs() < 1e-15);
        let up: StateDescriptor = "amps:1,0;0,0;0,0;0,0".parse().unwrap();
        assert_eq!(
            prepare(&up).unwrap().amplitudes(),
            &CVector::basis(4, 0).unwrap()
        );
        let two: StateDescriptor = "amps:2,0;0,0;0,0;0,0".parse().unwrap();
        assert_eq!(
            prepare(&two).unwrap().amplitudes(),
            &CVector::basis(4, 0).unwrap()
        );
        let zero: StateDescriptor = "amps:0,0;0,0;0,0;0,0".parse().unwrap();
        assert_eq!(prepare(&zero), Err(QmError::ZeroVector));
        for p in Preset::ALL {
            assert!((preset(p).amplitudes().norm() - 1.0).abs() < 1e-12);
        }
        // presets for the proposition states coincide with the constructed basis
        for (i, p) in [
            Preset::PhiPlus,
            Preset::PsiMinus,
            Preset::Psi3,
            Preset::Psi4,
        ]
        .into_iter()
        .enumerate()
        {
            assert!(preset(p).amplitudes().sub(b.state(i)).unwrap().max_abs() < 1e-15);
        }
    }

    #[test]
    fn random_states_are_normalized_and_seeded() {
        let a = haar_random_state(42);
        assert!((a.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert_eq!(a, haar_random_state(42));
        assert_ne!(a, haar_random_state(43));
        assert_eq!(a.provenance(), &Provenance::Random { seed: 42 });
    }

    #[test]
    fn born_examples() {
        let b = basis();
        assert_eq!(
            born(&preset(Preset::PsiMinus), &b).probs(),
            [0.0, 1.0, 0.0, 0.0]
        );
        let p = born(&preset(Preset::UpUp), &b).probs();
        for (got, want) in p.iter().zip([0.5, 0.0, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(p[1], 0.0);
        for seed in 0..20 {
            let s: f64 = born(&haar_random_state(seed), &b).probs().iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn born_ignores_global_phase() {
        let b = basis();
        for seed in 0..20u64 {
            let s = haar_random_state(seed);
            let theta = 0.37 * seed as f64;
            let (p, q) = (
                born(&s, &b).probs(),
                born(&s.with_global_phase(theta), &b).probs(),
            );
            for i in 0..4 {
                assert!((p[i] - q[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_cdf_edges() {
        let d = BornDistribution::from_raw([0.5, 1e-17, 0.25, 0.25]);
        assert_eq!(d.probs()[1], 0.0);
        assert_eq!(d.inverse_cdf(0.0), 0);
        assert_eq!(d.inverse_cdf(0.4999), 0);
        assert_eq!(d.inverse_cdf(0.5), 2);
        assert_eq!(d.inverse_cdf(0.75), 3);
        assert_eq!(d.inverse_cdf(0.999_999_999_999_999_9), 3);
        let d = BornDistribution::from_raw([0.0, 0.0, 1.0 - 1e-16, 0.0]);
        assert_eq!(d.inverse_cdf(0.999_999_999_999_999_9), 2);
    }

    #[test]
    fn sample_certain_outcome() {
        let b = basis();
        let s = preset(Preset::Psi4);
        for seed in 0..50 {
            let r = sample(&s, &b, &mut ShotStreams::new(seed).stream(0)).unwrap();
            assert_eq!(r.outcome_index, 4);
            assert_eq!(r.truth, [false, false, false, true]);
            assert_eq!(r.pattern(), Pattern::ExactlyOneTrue);
        }
    }

    #[test]
    fn sample_golden_outcomes() {
        // Frozen from a first run; guards the RNG and CDF conventions.
        let b = basis();
        let s = preset(Preset::UpUp);
        let streams = ShotStreams::new(2024);
        let outcomes: Vec<usize> = (0..12u64)
            .map(|k| {
                sample(&s, &b, &mut streams.stream(k))
                    .unwrap()
                    .outcome_index
            })
            .collect();
        assert_eq!(outcomes, GOLDEN_UP_UP_2024);
    }

    const GOLDEN_UP_UP_2024: [usize; 12] = [1, 4, 4, 1, 1, 1, 3, 1, 4, 1, 3, 1];

    #[test]
    fn collapse_is_idempotent() {
        let b = basis();
        let streams = ShotStreams::new(9);
        for seed in 0..10u64 {
            let s = haar_random_state(seed);
            let first = sample(&s, &b, &mut streams.stream(seed)).unwrap();
            let expected = b
                .state(first.outcome_index - 1)
                .scale(inner(b.state(first.outcome_index - 1), s.amplitudes()).unwrap());
            let expected = expected.normalized(1e-12).unwrap();
            assert!(
                first
                    .post_state
                    .amplitudes()
                    .sub(&expected)
                    .unwrap()
                    .max_abs()
                    < 1e-12
            );
            let p = born(&first.post_state, &b).probs();
            assert!((p[first.outcome_index - 1] - 1.0).abs() < 1e-12);
            for k in 0..20 {
                let again = sample(&first.post_state, &b, &mut streams.stream(1000 + k)).unwrap();
                assert_eq!(again.outcome_index, first.outcome_index);
            }
        }
    }

    #[test]
    fn sample_frequencies_on_up_up() {
        let b = basis();
        let s = preset(Preset::UpUp);
        let streams = ShotStreams::new(11);
        let shots = 100_000u64;
        let mut counts = [0u64; 4];
        for k in 0..shots {
            counts[sample(&s, &b, &mut streams.stream(k))
                .unwrap()
                .outcome_index
                - 1] += 1;
        }
        assert_eq!(counts[1], 0);
        for (i, p) in [0.5, 0.0, 0.25, 0.25].into_iter().enumerate() {
            assert!(stats::within_sigma(counts[i], shots, p, 3.0), "{counts:?}");
        }
    }

    #[test]
    fn sequential_examples() {
        let b = basis();
        let phi = preset(Preset::PhiPlus);
        for order in [[1, 2, 3, 4], [4, 3, 2, 1], [2, 4, 1, 3]] {
            let r = sample_sequential(&phi, &b, order, &mut ShotStreams::new(1).stream(0)).unwrap();
            assert_eq!(r.truth, [true, false, false, false]);
        }
        assert_eq!(
            sample_sequential(&phi, &b, [1, 1, 2, 3], &mut ShotStreams::new(1).stream(0)),
            Err(QmError::InvalidOrder([1, 1, 2, 3]))
        );
        assert!(validate_order([0, 1, 2, 3]).is_err());
    }

    #[test]
    fn sequential_orders_agree_with_born() {
        let b = basis();
        let s = preset(Preset::UpUp);
        let born_p = born(&s, &b).probs();
        let shots = 100_000u64;
        let mut hists = Vec::new();
        for (seed, order) in [(21, [1, 2, 3, 4]), (22, [4, 3, 2, 1])] {
            let streams = ShotStreams::new(seed);
            let mut counts = [0u64; 4];
            for k in 0..shots {
                let r = sample_sequential(&s, &b, order, &mut streams.stream(k)).unwrap();
                assert_eq!(r.pattern(), Pattern::ExactlyOneTrue);
                counts[r.outcome_index - 1] += 1;
            }
            assert!(
                stats::goodness_of_fit(&counts, &born_p).p_value > 0.001,
                "{counts:?}"
            );
            hists.push(counts);
        }
        assert!(stats::homogeneity(&hists[0], &hists[1]).p_value > 0.001);
    }

    #[test]
    fn maximal_examples() {
        let b = basis();
        let h = build_maximal_observable([1.0, 2.0, 3.0, 4.0], &b).unwrap();
        let h10 = build_maximal_observable([10.0, 20.0, 30.0, 40.0], &b).unwrap();
        let psi3 = preset(Preset::Psi3);
        for seed in 0..20 {
            let (value, r) =
                measure_maximal(&psi3, &h, &mut ShotStreams::new(seed).stream(0)).unwrap();
            assert_eq!(value, 3.0);
            assert_eq!(r.outcome_index, 3);
        }
        let s = haar_random_state(5);
        let streams = ShotStreams::new(77);
        for k in 0..500 {
            let (_, a) = measure_maximal(&s, &h, &mut streams.stream(k)).unwrap();
            let (v, b10) = measure_maximal(&s, &h10, &mut streams.stream(k)).unwrap();
            assert_eq!(a.outcome_index, b10.outcome_index);
            assert_eq!(v, 10.0 * a.outcome_index as f64);
        }
    }

    #[test]
    fn maximal_frequencies_on_plus_plus() {
        let b = basis();
        let h = build_maximal_observable([1.0, 2.0, 3.0, 4.0], &b).unwrap();
        let s = preset(Preset::PlusPlus);
        let streams = ShotStreams::new(31);
        let projectors = recover_projectors(&h);
        let shots = 100_000u64;
        let mut counts = [0u64; 4];
        for k in 0..shots {
            let (_, r) = maximal_outcome(&s, &h, &projectors, &mut streams.stream(k)).unwrap();
            counts[r.outcome_index - 1] += 1;
        }
        assert_eq!(counts[1], 0);
        for (i, p) in [0.5, 0.0, 0.25, 0.25].into_iter().enumerate() {
            assert!(stats::within_sigma(counts[i], shots, p, 3.0), "{counts:?}");
        }
    }

    #[test]
    fn expectation_matches_weighted_probabilities() {
        let b = basis();
        for seed in 0..30u64 {
            let s = haar_random_state(seed);
            let coeffs = [
                seed as f64 - 7.25,
                2.5,
                -3.5 * (seed as f64 + 1.0) - 10.0,
                100.0,
            ];
            let h = build_maximal_observable(coeffs, &b).unwrap();
            let lhs: f64 = coeffs
                .iter()
                .zip(born(&s, &b).probs())
                .map(|(c, p)| c * p)
                .sum();
            let rhs = s.expectation(h.matrix()).unwrap();
            assert!((lhs - rhs.re).abs() < 1e-10 && rhs.im.abs() < 1e-10);
        }
    }

    #[test]
    fn noise_knob() {
        assert!(Depolarizing::new(1.5).is_err());
        assert!(Depolarizing::new(-0.1).is_err());
        let off = Depolarizing::default();
        let mut rng = ShotStreams::new(3).stream(0);
        let before = rng.clone();
        assert_eq!(off.strike(&mut rng), None);
        assert_eq!(rng, before);
        let on = Depolarizing::new(1.0).unwrap();
        let mut counts = [0u64; 4];
        let streams = ShotStreams::new(4);
        for k in 0..40_000 {
            counts[on.strike(&mut streams.stream(k)).unwrap()] += 1;
        }
        for c in counts {
            assert!(stats::within_sigma(c, 40_000, 0.25, 3.0), "{counts:?}");
        }
        let r = forced_result(&basis(), 1).unwrap();
        assert_eq!(r.truth, [false, true, false, false]);
    }

    #[test]
    fn theorem_checks() {
        let b = basis();
        let report = verify_qm_theorems(&b);
        assert_eq!(
            report,
            QmReport {
                exclusive: true,
                exhaustive: true,
                one_and_only_one: true
            }
        );
        let mut projectors = b.projectors.clone();
        projectors[3] = projectors[2].clone();
        let dup = PropositionBasis::from_parts(b.states.clone(), projectors);
        let r = verify_qm_theorems(&dup);
        assert!(!r.exclusive && !r.one_and_only_one);
        let mut projectors = b.projectors.clone();
        projectors[3] = CMatrix::zeros(4).unwrap();
        let missing = PropositionBasis::from_parts(b.states.clone(), projectors);
        let r = verify_qm_theorems(&missing);
        assert!(r.exclusive && !r.exhaustive && !r.one_and_only_one);
    }

    #[test]
    fn degenerate_state_rejected() {
        let v = CVector::from_real(&[1e-12, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            TwoQubitState::from_vector(&v, Provenance::Explicit),
            Err(QmError::DegenerateState(_))
        ));
    }
}
