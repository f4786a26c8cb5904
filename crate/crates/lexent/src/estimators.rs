//! Entropy estimators over next-word distributions.
//!
//! Three routes to the entropy of the next word given a context, all in bits:
//!
//! * **First-token approximation**: entropy of the raw next-token
//!   distribution. Cheap, and for Shannon a lower bound on the word entropy.
//! * **Monte Carlo**: sample words and average surprisals (Shannon), or
//!   combine them through a log-space power mean (Rényi). Unbiased for
//!   Shannon; works at any scale the sampler works at.
//! * **Exact enumeration**: walk every word up to a depth bound and compute
//!   the entropy of the enumerated distribution. The ground-truth oracle for
//!   small vocabularies.
//!
//! Rényi orders cover the full range: `alpha = 0` (log support size),
//! finite positive orders with `alpha = 1` dispatching to Shannon, and
//! `alpha = inf` (min-surprisal).

use rand::Rng;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, TokenId};
use crate::lm::{boundary_mass, Context, LanguageModel, TokenDistribution};
use crate::rng::{stream_rng, DOMAIN_BOOTSTRAP};
use crate::sampler::SampleSet;

/// Bootstrap resamples behind the Monte Carlo Rényi standard error.
pub const DEFAULT_RENYI_BOOTSTRAP: usize = 1000;
/// Residual mass at or above which an exact estimate is flagged approximate.
pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-6;
/// Upper bound on the estimated enumeration size.
pub const ENUMERATION_NODE_LIMIT: f64 = 1e7;

/// Rényi entropy order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RenyiOrder {
    /// `alpha = 0`: log2 of the support size.
    SupportSize,
    /// Finite `alpha > 0`; `alpha = 1` is Shannon.
    Order(f64),
    /// `alpha = inf`: surprisal of the most probable outcome.
    MinSurprisal,
}

impl RenyiOrder {
    pub const SHANNON: RenyiOrder = RenyiOrder::Order(1.0);

    /// Classifies a numeric order. Errors unless `alpha >= 0` (NaN included).
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            Err(Error::InvalidOrder(alpha))
        } else if alpha == 0.0 {
            Ok(RenyiOrder::SupportSize)
        } else if alpha.is_infinite() {
            Ok(RenyiOrder::MinSurprisal)
        } else {
            Ok(RenyiOrder::Order(alpha))
        }
    }

    /// Numeric order: 0, the finite value, or `inf`.
    #[must_use]
    pub fn alpha(self) -> f64 {
        match self {
            RenyiOrder::SupportSize => 0.0,
            RenyiOrder::Order(a) => a,
            RenyiOrder::MinSurprisal => f64::INFINITY,
        }
    }

    #[must_use]
    pub fn is_shannon(self) -> bool {
        matches!(self, RenyiOrder::Order(a) if a == 1.0)
    }
}

impl std::fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenyiOrder::SupportSize => write!(f, "0"),
            RenyiOrder::Order(a) => write!(f, "{a}"),
            RenyiOrder::MinSurprisal => write!(f, "inf"),
        }
    }
}

/// A Monte Carlo entropy estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    /// Estimated entropy in bits.
    pub bits: f64,
    /// Number of samples behind the estimate.
    pub n_samples: usize,
    /// Standard error in bits; absent for single-sample sets.
    pub stderr_bits: Option<f64>,
    /// Samples cut off by the token cap.
    pub truncated_count: usize,
}

/// An enumeration-based entropy value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactEntropy {
    /// Entropy of the enumerated word distribution in bits.
    pub bits: f64,
    /// Set when the unenumerated residual mass reaches the tolerance, so the
    /// value underestimates the true entropy.
    pub approximate: bool,
}

/// A word enumerated with its exact probability.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedWord {
    pub token_ids: Vec<TokenId>,
    pub probability: f64,
}

/// All words of up to `depth` tokens, with the probability mass not covered.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEnumeration {
    pub words: Vec<EnumeratedWord>,
    pub residual_mass: f64,
    pub depth: usize,
}

fn non_negative(bits: f64) -> f64 {
    bits + 0.0
}

/// Shannon entropy of a token distribution in bits.
#[must_use]
pub fn first_token_shannon(dist: &TokenDistribution) -> f64 {
    let h: f64 = dist
        .probs()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    non_negative(h)
}

/// Rényi entropy of a token distribution in bits.
#[must_use]
pub fn first_token_renyi(dist: &TokenDistribution, order: RenyiOrder) -> f64 {
    renyi_of_probs(dist.probs(), order)
}

fn renyi_of_probs(probs: &[f64], order: RenyiOrder) -> f64 {
    match order {
        RenyiOrder::SupportSize => {
            let support = probs.iter().filter(|&&p| p > 0.0).count();
            non_negative((support as f64).log2())
        }
        RenyiOrder::MinSurprisal => {
            let max = probs.iter().copied().fold(0.0f64, f64::max);
            non_negative(-max.log2())
        }
        RenyiOrder::Order(a) if a == 1.0 => {
            let h: f64 = probs
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.log2())
                .sum();
            non_negative(h)
        }
        RenyiOrder::Order(a) => {
            let sum: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(a)).sum();
            non_negative(sum.log2() / (1.0 - a))
        }
    }
}

/// Mean and standard error (sample sd over sqrt n; `None` when `n < 2`).
fn mean_and_sem(xs: &[f64]) -> (f64, Option<f64>) {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Some((var / n as f64).sqrt()))
}

/// Sample standard deviation (n - 1 denominator). Zero for fewer than two
/// values.
pub(crate) fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

fn log2_sum_exp2(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp2()).sum::<f64>().log2()
}

/// Shannon estimate from raw surprisals: the mean, with its standard error.
pub fn shannon_from_surprisals(surprisals: &[f64]) -> Result<(f64, Option<f64>)> {
    if surprisals.is_empty() {
        return Err(Error::EmptyInput("surprisals"));
    }
    Ok(mean_and_sem(surprisals))
}

/// Rényi estimate of finite positive order from raw surprisals, computed in
/// log space: `(log2 mean of 2^((1 - alpha) * s) ) / (1 - alpha)`. Stays
/// finite for surprisals in the hundreds of bits. `alpha = 1` falls back to
/// the mean.
pub fn renyi_from_surprisals(surprisals: &[f64], alpha: f64) -> Result<f64> {
    if surprisals.is_empty() {
        return Err(Error::EmptyInput("surprisals"));
    }
    if alpha.is_nan() || alpha <= 0.0 || alpha.is_infinite() {
        return Err(Error::InvalidOrder(alpha));
    }
    if alpha == 1.0 {
        return Ok(mean_and_sem(surprisals).0);
    }
    let c = 1.0 - alpha;
    let scaled: Vec<f64> = surprisals.iter().map(|&s| c * s).collect();
    let lse = log2_sum_exp2(&scaled);
    let n = surprisals.len() as f64;
    Ok(non_negative((lse - n.log2()) / c))
}

/// Monte Carlo Shannon entropy: mean sample surprisal.
#[must_use]
pub fn mc_shannon(samples: &SampleSet) -> EntropyEstimate {
    let surprisals = samples.surprisals();
    let (bits, stderr_bits) = mean_and_sem(&surprisals);
    EntropyEstimate {
        bits: non_negative(bits),
        n_samples: surprisals.len(),
        stderr_bits,
        truncated_count: samples.truncated_count(),
    }
}

/// Monte Carlo Rényi entropy with the default bootstrap standard error.
///
/// Finite positive orders only; `alpha = 1` dispatches to [`mc_shannon`].
/// The support-size and min-surprisal limits have no sampling estimator and
/// error with [`Error::UnsupportedOrder`]; use the exact path for those.
pub fn mc_renyi(samples: &SampleSet, order: RenyiOrder) -> Result<EntropyEstimate> {
    mc_renyi_with_bootstrap(samples, order, DEFAULT_RENYI_BOOTSTRAP)
}

/// [`mc_renyi`] with an explicit bootstrap resample count; `n_boot < 2`
/// suppresses the standard error.
pub fn mc_renyi_with_bootstrap(
    samples: &SampleSet,
    order: RenyiOrder,
    n_boot: usize,
) -> Result<EntropyEstimate> {
    let alpha = match order {
        RenyiOrder::SupportSize => {
            return Err(Error::UnsupportedOrder(
                "support size (alpha = 0) needs the exact path".into(),
            ))
        }
        RenyiOrder::MinSurprisal => {
            return Err(Error::UnsupportedOrder(
                "min-surprisal (alpha = inf) needs the exact path".into(),
            ))
        }
        RenyiOrder::Order(a) if a == 1.0 => return Ok(mc_shannon(samples)),
        RenyiOrder::Order(a) => a,
    };
    let surprisals = samples.surprisals();
    let bits = renyi_from_surprisals(&surprisals, alpha)?;
    let n = surprisals.len();
    let stderr_bits = if n >= 2 && n_boot >= 2 {
        let mut rng = stream_rng(&[
            samples.config().seed,
            samples.context_fingerprint(),
            DOMAIN_BOOTSTRAP,
            alpha.to_bits(),
        ]);
        let mut resample = vec![0.0; n];
        let mut estimates = Vec::with_capacity(n_boot);
        for _ in 0..n_boot {
            for slot in &mut resample {
                *slot = surprisals[rng.random_range(0..n)];
            }
            estimates.push(renyi_from_surprisals(&resample, alpha)?);
        }
        Some(sample_sd(&estimates))
    } else {
        None
    };
    Ok(EntropyEstimate {
        bits,
        n_samples: n,
        stderr_bits,
        truncated_count: samples.truncated_count(),
    })
}

/// Enumerates every word of at most `depth` tokens with its exact
/// probability under the boundary-renormalized word process.
///
/// Words come out in breadth-first order: by length, then by token id. The
/// estimated node count `|boundary| * |internal|^(depth-1)` must stay within
/// [`ENUMERATION_NODE_LIMIT`].
pub fn enumerate_words<M: LanguageModel + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    context: &Context,
    depth: usize,
) -> Result<WordEnumeration> {
    if depth == 0 {
        return Err(Error::InvalidConfig("enumeration depth must be at least 1".into()));
    }
    let estimate =
        lexicon.boundary_ids().len() as f64 * (lexicon.internal_ids().len() as f64).powi(depth as i32 - 1);
    if estimate > ENUMERATION_NODE_LIMIT {
        return Err(Error::Intractable {
            estimate,
            limit: ENUMERATION_NODE_LIMIT,
        });
    }

    let dist = model.next_token_distribution(context)?;
    let mass = boundary_mass(lexicon, &dist);
    if mass <= 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    let base_len = context.len();
    let mut frontier: Vec<(Context, f64)> = Vec::new();
    for &id in lexicon.boundary_ids() {
        let p = dist.prob(id) / mass;
        if p > 0.0 {
            frontier.push((context.extended(id), p));
        }
    }

    let mut words = Vec::new();
    let mut covered = 0.0;
    for level in 1..=depth {
        let mut next = Vec::new();
        for (ctx, prefix_prob) in frontier {
            let dist = model.next_token_distribution(&ctx)?;
            let end_mass = boundary_mass(lexicon, &dist);
            let p_word = prefix_prob * end_mass;
            if p_word > 0.0 {
                words.push(EnumeratedWord {
                    token_ids: ctx.tokens()[base_len..].to_vec(),
                    probability: p_word,
                });
                covered += p_word;
            }
            if level < depth {
                for &id in lexicon.internal_ids() {
                    let p = dist.prob(id);
                    if p > 0.0 {
                        next.push((ctx.extended(id), prefix_prob * p));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(WordEnumeration {
        words,
        residual_mass: (1.0 - covered).clamp(0.0, 1.0),
        depth,
    })
}

/// Shannon entropy of an enumerated word distribution, with the default
/// residual tolerance of [`DEFAULT_RESIDUAL_TOLERANCE`].
#[must_use]
pub fn exact_shannon(enumeration: &WordEnumeration) -> ExactEntropy {
    exact_shannon_with_tolerance(enumeration, DEFAULT_RESIDUAL_TOLERANCE)
}

/// Shannon entropy of an enumerated word distribution. When the residual
/// mass reaches `tolerance` the estimate is flagged approximate (it
/// underestimates the true entropy). An enumeration with no complete words
/// yields 0 bits, flagged approximate.
#[must_use]
pub fn exact_shannon_with_tolerance(enumeration: &WordEnumeration, tolerance: f64) -> ExactEntropy {
    exact_renyi_with_tolerance(enumeration, RenyiOrder::SHANNON, tolerance)
}

/// Rényi entropy of an enumerated word distribution at the default residual
/// tolerance. All orders are supported, including both limits.
#[must_use]
pub fn exact_renyi(enumeration: &WordEnumeration, order: RenyiOrder) -> ExactEntropy {
    exact_renyi_with_tolerance(enumeration, order, DEFAULT_RESIDUAL_TOLERANCE)
}

/// Rényi entropy of an enumerated word distribution with an explicit
/// residual tolerance.
#[must_use]
pub fn exact_renyi_with_tolerance(
    enumeration: &WordEnumeration,
    order: RenyiOrder,
    tolerance: f64,
) -> ExactEntropy {
    let approximate = enumeration.residual_mass >= tolerance;
    if enumeration.words.is_empty() {
        return ExactEntropy {
            bits: 0.0,
            approximate: true,
        };
    }
    let probs: Vec<f64> = enumeration.words.iter().map(|w| w.probability).collect();
    ExactEntropy {
        bits: renyi_of_probs(&probs, order),
        approximate,
    }
}
