//! Noncontextual hidden-variable model.
//!
//! Every one-particle observable A, B, a, b carries a predefined value in
//! {+1, -1}; a product observable takes the product of the factor values.
//! Nothing here depends on the linear-algebra or quantum modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A predefined spin value, in units of hbar/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Values v(A), v(B), v(a), v(b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HiddenState {
    pub v_a_upper: Sign,
    pub v_b_upper: Sign,
    pub v_a_lower: Sign,
    pub v_b_lower: Sign,
}

impl HiddenState {
    pub fn new(v_a_upper: Sign, v_b_upper: Sign, v_a_lower: Sign, v_b_lower: Sign) -> Self {
        Self {
            v_a_upper,
            v_b_upper,
            v_a_lower,
            v_b_lower,
        }
    }

    /// From integer values in the order (A, B, a, b). Returns `None` unless
    /// every value is exactly +1 or -1.
    pub fn from_values(values: [i8; 4]) -> Option<Self> {
        let to_sign = |v: i8| match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        };
        Some(Self::new(
            to_sign(values[0])?,
            to_sign(values[1])?,
            to_sign(values[2])?,
            to_sign(values[3])?,
        ))
    }

    pub fn values(&self) -> [i8; 4] {
        [
            self.v_a_upper.value(),
            self.v_b_upper.value(),
            self.v_a_lower.value(),
            self.v_b_lower.value(),
        ]
    }

    pub fn flipped(&self) -> Self {
        Self::new(
            self.v_a_upper.flip(),
            self.v_b_upper.flip(),
            self.v_a_lower.flip(),
            self.v_b_lower.flip(),
        )
    }

    /// v(A) v(B) v(a) v(b).
    pub fn parity(&self) -> Sign {
        self.v_a_upper * self.v_b_upper * self.v_a_lower * self.v_b_lower
    }
}

/// Classification of a four-proposition truth assignment by its number of
/// true entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pattern {
    AllFalse,
    ExactlyOneTrue,
    TwoTrue,
    Other,
}

impl Pattern {
    pub const ALL: [Pattern; 4] = [
        Pattern::AllFalse,
        Pattern::ExactlyOneTrue,
        Pattern::TwoTrue,
        Pattern::Other,
    ];

    pub fn classify(truth: &[bool; 4]) -> Self {
        match truth.iter().filter(|&&t| t).count() {
            0 => Pattern::AllFalse,
            1 => Pattern::ExactlyOneTrue,
            2 => Pattern::TwoTrue,
            _ => Pattern::Other,
        }
    }

    /// Whether a noncontextual assignment can produce this pattern.
    pub fn nchv_allowed(self) -> bool {
        matches!(self, Pattern::AllFalse | Pattern::TwoTrue)
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::AllFalse => "AllFalse",
            Pattern::ExactlyOneTrue => "ExactlyOneTrue",
            Pattern::TwoTrue => "TwoTrue",
            Pattern::Other => "Other",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown pattern {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropositionOutcome {
    pub truth: [bool; 4],
    pub pattern: Pattern,
}

impl PropositionOutcome {
    pub fn from_truth(truth: [bool; 4]) -> Self {
        Self {
            truth,
            pattern: Pattern::classify(&truth),
        }
    }
}

/// Truth values of P1..P4 under the product rule v(XY) = v(X) v(Y).
pub fn evaluate(h: &HiddenState) -> PropositionOutcome {
    let ab_upper = h.v_a_upper * h.v_b_upper;
    let ab_lower = h.v_a_lower * h.v_b_lower;
    let a_b = h.v_a_upper * h.v_b_lower;
    let a_b_swapped = h.v_a_lower * h.v_b_upper;
    let both = |x: Sign, y: Sign, s: Sign| x == s && y == s;
    PropositionOutcome::from_truth([
        both(ab_upper, ab_lower, Sign::Plus),
        both(ab_upper, ab_lower, Sign::Minus),
        both(a_b, a_b_swapped, Sign::Plus),
        both(a_b, a_b_swapped, Sign::Minus),
    ])
}

/// All 16 assignments, lexicographic in (A, B, a, b) with +1 before -1.
pub fn all_hidden_states() -> Vec<HiddenState> {
    let signs = [Sign::Plus, Sign::Minus];
    let mut out = Vec::with_capacity(16);
    for &a in &signs {
        for &b in &signs {
            for &al in &signs {
                for &bl in &signs {
                    out.push(HiddenState::new(a, b, al, bl));
                }
            }
        }
    }
    out
}

pub fn enumerate_all() -> Vec<(HiddenState, PropositionOutcome)> {
    all_hidden_states()
        .into_iter()
        .map(|h| (h, evaluate(&h)))
        .collect()
}

/// Pattern counts in the order AllFalse, ExactlyOneTrue, TwoTrue, Other.
pub fn pattern_counts(rows: &[(HiddenState, PropositionOutcome)]) -> [usize; 4] {
    let mut counts = [0; 4];
    for (_, o) in rows {
        counts[Pattern::ALL.iter().position(|p| *p == o.pattern).unwrap()] += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NchvReport {
    /// Some assignment makes two or more propositions true.
    pub not_exclusive: bool,
    pub not_exclusive_witness: Option<HiddenState>,
    /// Some assignment makes every proposition false.
    pub not_exhaustive: bool,
    pub not_exhaustive_witness: Option<HiddenState>,
    /// Every assignment yields either four falses or two trues.
    pub zero_or_two: bool,
}

impl NchvReport {
    pub fn all_hold(&self) -> bool {
        self.not_exclusive && self.not_exhaustive && self.zero_or_two
    }
}

pub fn verify_nchv_theorems() -> NchvReport {
    let rows = enumerate_all();
    let not_exclusive_witness = rows
        .iter()
        .find(|(_, o)| o.truth.iter().filter(|&&t| t).count() >= 2)
        .map(|(h, _)| *h);
    let not_exhaustive_witness = rows
        .iter()
        .find(|(_, o)| o.pattern == Pattern::AllFalse)
        .map(|(h, _)| *h);
    NchvReport {
        not_exclusive: not_exclusive_witness.is_some(),
        not_exclusive_witness,
        not_exhaustive: not_exhaustive_witness.is_some(),
        not_exhaustive_witness,
        zero_or_two: rows.iter().all(|(_, o)| o.pattern.nchv_allowed()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(v: [i8; 4]) -> HiddenState {
        HiddenState::from_values(v).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(
            evaluate(&state([1, 1, 1, 1])).truth,
            [true, false, true, false]
        );
        let o = evaluate(&state([1, 1, 1, -1]));
        assert_eq!(o.truth, [false; 4]);
        assert_eq!(o.pattern, Pattern::AllFalse);
        assert_eq!(
            evaluate(&state([1, -1, -1, 1])).truth,
            [false, true, true, false]
        );
    }

    #[test]
    fn from_values_rejects_non_signs() {
        assert!(HiddenState::from_values([1, 0, 1, 1]).is_none());
        assert!(HiddenState::from_values([2, 1, 1, 1]).is_none());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let rows = enumerate_all();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0].0.values(), [1, 1, 1, 1]);
        assert_eq!(rows[1].0.values(), [1, 1, 1, -1]);
        assert_eq!(rows[15].0.values(), [-1, -1, -1, -1]);
        assert_eq!(pattern_counts(&rows), [8, 0, 8, 0]);
    }

    /// Independent oracle: brute force over integer values with the product
    /// rule written out arithmetically.
    #[test]
    fn evaluate_matches_arithmetic_oracle() {
        for h in all_hidden_states() {
            let [a, b, al, bl] = h.values();
            let expected = [
                a * b == 1 && al * bl == 1,
                a * b == -1 && al * bl == -1,
                a * bl == 1 && al * b == 1,
                a * bl == -1 && al * b == -1,
            ];
            assert_eq!(evaluate(&h).truth, expected, "{:?}", h.values());
        }
    }

    #[test]
    fn pattern_dichotomy_follows_parity() {
        for h in all_hidden_states() {
            let expected = match h.parity() {
                Sign::Minus => Pattern::AllFalse,
                Sign::Plus => Pattern::TwoTrue,
            };
            assert_eq!(evaluate(&h).pattern, expected);
        }
    }

    #[test]
    fn true_pairs_are_cross_pairs() {
        let allowed = [[0, 2], [0, 3], [1, 2], [1, 3]];
        for (_, o) in enumerate_all() {
            let idx: Vec<usize> = (0..4).filter(|&i| o.truth[i]).collect();
            if idx.len() == 2 {
                assert!(allowed.contains(&[idx[0], idx[1]]), "{idx:?}");
            }
        }
    }

    #[test]
    fn global_flip_invariance() {
        for h in all_hidden_states() {
            assert_eq!(evaluate(&h), evaluate(&h.flipped()));
        }
    }

    #[test]
    fn theorems_hold_with_first_witnesses() {
        let report = verify_nchv_theorems();
        assert!(report.all_hold());
        assert_eq!(report.not_exclusive_witness.unwrap().values(), [1, 1, 1, 1]);
        assert_eq!(
            report.not_exhaustive_witness.unwrap().values(),
            [1, 1, 1, -1]
        );
    }

    #[test]
    fn classifier_is_total() {
        assert_eq!(
            Pattern::classify(&[true, false, false, false]),
            Pattern::ExactlyOneTrue
        );
        assert_eq!(
            Pattern::classify(&[true, true, true, false]),
            Pattern::Other
        );
        assert_eq!(Pattern::classify(&[true; 4]), Pattern::Other);
        assert!(!Pattern::ExactlyOneTrue.nchv_allowed());
        assert_eq!("TwoTrue".parse::<Pattern>().unwrap(), Pattern::TwoTrue);
    }

    #[test]
    fn module_has_no_linear_algebra_dependency() {
        let src = include_str!("nchv.rs");
        let code = src.split("#[cfg(test)]").next().unwrap();
        for forbidden in ["linalg", "observables", "crate::qm", "num_complex"] {
            assert!(
                !code.contains(&format!("use crate::{forbidden}"))
                    && !code.contains(&format!("{forbidden}::")),
                "nchv must not depend on {forbidden}"
            );
        }
    }
}
