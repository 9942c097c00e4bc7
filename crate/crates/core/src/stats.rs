//! Chi-square tests and binomial error bars for outcome histograms.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn upper_tail(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    dist.sf(statistic)
}

/// Two-sample homogeneity test on a pair of histograms over the same bins.
/// Bins that are empty in both samples carry no information and are dropped.
pub fn homogeneity(a: &[u64], b: &[u64]) -> ChiSquareTest {
    assert_eq!(a.len(), b.len(), "histograms must share bins");
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    let total = na + nb;
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        used += 1;
        for (obs, n) in [(x as f64, na), (y as f64, nb)] {
            let expected = n * col / total;
            if expected > 0.0 {
                statistic += (obs - expected).powi(2) / expected;
            }
        }
    }
    let dof = used.saturating_sub(1);
    ChiSquareTest {
        statistic,
        dof,
        p_value: upper_tail(statistic, dof),
    }
}

/// Goodness of fit of observed counts against expected probabilities.
/// Bins with zero expected probability must be empty; a count there makes
/// the statistic infinite.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), probs.len());
    let n: f64 = observed.iter().sum::<u64>() as f64;
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        let expected = n * p;
        if expected <= 0.0 {
            if o > 0 {
                statistic = f64::INFINITY;
            }
            continue;
        }
        used += 1;
        statistic += (o as f64 - expected).powi(2) / expected;
    }
    let dof = used.saturating_sub(1);
    ChiSquareTest {
        statistic,
        dof,
        p_value: if statistic.is_infinite() {
            0.0
        } else {
            upper_tail(statistic, dof)
        },
    }
}

/// Standard error of an empirical frequency for `shots` Bernoulli trials.
pub fn binomial_std_error(p: f64, shots: u64) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// Whether `count / shots` lies within `k` binomial standard deviations of `p`.
pub fn within_sigma(count: u64, shots: u64, p: f64, k: f64) -> bool {
    let freq = count as f64 / shots as f64;
    (freq - p).abs() <= k * binomial_std_error(p, shots)
}
