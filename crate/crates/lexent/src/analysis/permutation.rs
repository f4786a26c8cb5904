//! Paired sign-flip permutation test.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, DOMAIN_PERMUTE};

/// Result of a paired permutation test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationResult {
    /// Observed statistic: mean of the paired differences `a - b`.
    pub observed: f64,
    /// Two-sided p-value including the identity permutation, in `(0, 1]`.
    pub p_value: f64,
    /// Number of random sign flips drawn.
    pub n_perm: usize,
}

/// Tests whether two paired error sequences differ, by randomly flipping the
/// sign of each paired difference.
///
/// The statistic is the mean difference; the two-sided p-value is
/// `(1 + #{|stat*| >= |stat|}) / (n_perm + 1)`, which counts the identity
/// permutation and so never reaches 0. Identical inputs give p = 1.
pub fn paired_permutation_test(
    errors_a: &[f64],
    errors_b: &[f64],
    n_perm: usize,
    seed: u64,
) -> Result<PermutationResult> {
    if errors_a.len() != errors_b.len() {
        return Err(Error::LengthMismatch {
            left: errors_a.len(),
            right: errors_b.len(),
        });
    }
    if errors_a.is_empty() {
        return Err(Error::EmptyInput("paired errors"));
    }
    if n_perm == 0 {
        return Err(Error::InvalidConfig(
            "permutation count must be at least 1".into(),
        ));
    }
    let diffs: Vec<f64> = errors_a
        .iter()
        .zip(errors_b)
        .map(|(a, b)| a - b)
        .collect();
    let n = diffs.len() as f64;
    let observed = diffs.iter().sum::<f64>() / n;

    let mut rng = stream_rng(&[seed, DOMAIN_PERMUTE, diffs.len() as u64]);
    let threshold = observed.abs();
    let mut at_least = 0usize;
    for _ in 0..n_perm {
        let stat = diffs
            .iter()
            .map(|&d| if rng.random::<bool>() { d } else { -d })
            .sum::<f64>()
            / n;
        if stat.abs() >= threshold {
            at_least += 1;
        }
    }
    Ok(PermutationResult {
        observed,
        p_value: (1 + at_least) as f64 / (n_perm + 1) as f64,
        n_perm,
    })
}
