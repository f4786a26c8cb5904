//! Monte Carlo word sampling from a subword language model.
//!
//! A word is sampled by drawing its first token from the boundary-renormalized
//! next-token distribution, then repeatedly drawing from the continuation view
//! (internal tokens plus end-of-word) until the word ends or hits the token
//! cap. The sample's surprisal is the sum of the step surprisals in bits,
//! including the final end-of-word step; capped samples are marked truncated
//! and carry no end-of-word term, which biases their surprisal low.
//!
//! Each sample is drawn from its own random stream keyed by (seed, context
//! fingerprint, stream index), so sample sets are reproducible and identical
//! under any degree of parallelism.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, TokenId};
use crate::lm::{boundary_mass, Context, LanguageModel, TokenDistribution};
use crate::rng::{stream_rng, DOMAIN_SAMPLE};

/// Default number of words per sample set.
pub const DEFAULT_SAMPLE_COUNT: usize = 512;
/// Default cap on tokens per sampled word.
pub const DEFAULT_MAX_WORD_TOKENS: usize = 20;

/// Sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub sample_count: usize,
    pub max_word_tokens: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            sample_count: DEFAULT_SAMPLE_COUNT,
            max_word_tokens: DEFAULT_MAX_WORD_TOKENS,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be at least 1".into()));
        }
        if self.max_word_tokens == 0 {
            return Err(Error::InvalidConfig(
                "max_word_tokens must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One sampled word.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSample {
    /// Token ids of the word: one boundary token, then internal tokens.
    pub token_ids: Vec<TokenId>,
    /// Total surprisal of the sample in bits, non-negative.
    pub surprisal_bits: f64,
    /// Whether the token cap cut the word short.
    pub truncated: bool,
}

/// A reproducible set of word samples for one context.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<WordSample>,
    context_fingerprint: u64,
    config: SamplerConfig,
}

impl SampleSet {
    /// Wraps already-drawn samples. The sample count must match the config.
    pub fn from_samples(
        samples: Vec<WordSample>,
        context_fingerprint: u64,
        config: SamplerConfig,
    ) -> Result<Self> {
        config.validate()?;
        if samples.len() != config.sample_count {
            return Err(Error::LengthMismatch {
                left: samples.len(),
                right: config.sample_count,
            });
        }
        Ok(Self {
            samples,
            context_fingerprint,
            config,
        })
    }

    #[must_use]
    pub fn samples(&self) -> &[WordSample] {
        &self.samples
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Surprisals of all samples, in stream order.
    #[must_use]
    pub fn surprisals(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.surprisal_bits).collect()
    }

    /// Number of samples cut off by the token cap.
    #[must_use]
    pub fn truncated_count(&self) -> usize {
        self.samples.iter().filter(|s| s.truncated).count()
    }

    #[must_use]
    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    #[must_use]
    pub fn context_fingerprint(&self) -> u64 {
        self.context_fingerprint
    }
}

/// Negative log2 with the sign of zero normalized away.
fn surprisal(p: f64) -> f64 {
    -p.log2() + 0.0
}

fn draw_word_initial(
    lexicon: &Lexicon,
    dist: &TokenDistribution,
    mass: f64,
    u: f64,
) -> Result<(TokenId, f64)> {
    let mut acc = 0.0;
    let mut last_positive = None;
    for &id in lexicon.boundary_ids() {
        let p = dist.prob(id) / mass;
        if p > 0.0 {
            last_positive = Some((id, p));
        }
        acc += p;
        if u < acc {
            return last_positive.ok_or_else(unreachable_draw);
        }
    }
    last_positive.ok_or_else(unreachable_draw)
}

enum ContinuationStep {
    Internal(TokenId, f64),
    End(f64),
}

fn draw_continuation(
    lexicon: &Lexicon,
    dist: &TokenDistribution,
    mass: f64,
    u: f64,
) -> Result<ContinuationStep> {
    let mut acc = 0.0;
    let mut last_positive = None;
    for &id in lexicon.internal_ids() {
        let p = dist.prob(id);
        if p > 0.0 {
            last_positive = Some((id, p));
        }
        acc += p;
        if u < acc {
            let (id, p) = last_positive.ok_or_else(unreachable_draw)?;
            return Ok(ContinuationStep::Internal(id, p));
        }
    }
    if mass > 0.0 {
        Ok(ContinuationStep::End(mass))
    } else {
        let (id, p) = last_positive.ok_or_else(unreachable_draw)?;
        Ok(ContinuationStep::Internal(id, p))
    }
}

fn unreachable_draw() -> Error {
    Error::Internal("draw from a distribution with no usable mass".into())
}

/// Samples one word from the model in the given context.
///
/// `stream_index` selects an independent random stream; a sample set uses
/// indices `0..sample_count`. Errors when the context puts no mass on
/// boundary tokens.
pub fn sample_word<M: LanguageModel + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    context: &Context,
    config: &SamplerConfig,
    stream_index: u64,
) -> Result<WordSample> {
    config.validate()?;
    let mut rng = stream_rng(&[
        config.seed,
        context.fingerprint(),
        DOMAIN_SAMPLE,
        stream_index,
    ]);

    let dist = model.next_token_distribution(context)?;
    let mass = boundary_mass(lexicon, &dist);
    if mass <= 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    let (first, p_first) = draw_word_initial(lexicon, &dist, mass, rng.random())?;
    let mut bits = surprisal(p_first);
    let mut token_ids = vec![first];
    let mut ctx = context.extended(first);

    loop {
        if token_ids.len() >= config.max_word_tokens {
            return Ok(WordSample {
                token_ids,
                surprisal_bits: bits,
                truncated: true,
            });
        }
        let dist = model.next_token_distribution(&ctx)?;
        let mass = boundary_mass(lexicon, &dist);
        match draw_continuation(lexicon, &dist, mass, rng.random())? {
            ContinuationStep::End(p) => {
                bits += surprisal(p);
                return Ok(WordSample {
                    token_ids,
                    surprisal_bits: bits,
                    truncated: false,
                });
            }
            ContinuationStep::Internal(id, p) => {
                bits += surprisal(p);
                token_ids.push(id);
                ctx.push(id);
            }
        }
    }
}

/// Draws `config.sample_count` words in parallel. The result is identical to
/// drawing each stream index sequentially.
pub fn sample_set<M: LanguageModel + Sync + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    context: &Context,
    config: &SamplerConfig,
) -> Result<SampleSet> {
    config.validate()?;
    let samples = (0..config.sample_count as u64)
        .into_par_iter()
        .map(|i| sample_word(model, lexicon, context, config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleSet {
        samples,
        context_fingerprint: context.fingerprint(),
        config: *config,
    })
}

/// Surprisal in bits of a specific complete word in context: the first
/// token's boundary-renormalized surprisal, each internal continuation, and
/// the final end-of-word step. Returns `+inf` when the model assigns the
/// word probability zero. The word must be one boundary token followed by
/// internal tokens.
pub fn score_word<M: LanguageModel + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    context: &Context,
    word_tokens: &[TokenId],
) -> Result<f64> {
    let (&first, rest) = word_tokens
        .split_first()
        .ok_or_else(|| Error::MalformedWord("empty token sequence".into()))?;
    if !lexicon.is_boundary(first)? {
        return Err(Error::MalformedWord(format!(
            "first token {first} is not a boundary token"
        )));
    }
    for &t in rest {
        if lexicon.is_boundary(t)? {
            return Err(Error::MalformedWord(format!(
                "non-initial token {t} is not an internal token"
            )));
        }
    }

    let dist = model.next_token_distribution(context)?;
    let mass = boundary_mass(lexicon, &dist);
    if mass <= 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    let mut bits = surprisal(dist.prob(first) / mass);
    let mut ctx = context.extended(first);
    for &t in rest {
        let dist = model.next_token_distribution(&ctx)?;
        bits += surprisal(dist.prob(t));
        ctx.push(t);
    }
    let dist = model.next_token_distribution(&ctx)?;
    bits += surprisal(boundary_mass(lexicon, &dist));
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::TokenEntry;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::collections::HashMap;
    use crate::lm::NGramModel;

    fn toy_a() -> (Lexicon, NGramModel) {
        let lex = Lexicon::build(vec![
            TokenEntry::new(0, "\u{2581}a", true),
            TokenEntry::new(1, "\u{2581}b", true),
            TokenEntry::new(2, "x", false),
        ])
        .unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![0.5, 0.25, 0.25]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        (lex, model)
    }

    fn toy_b() -> (Lexicon, NGramModel) {
        let lex = Lexicon::build(vec![
            TokenEntry::new(0, "\u{2581}a", true),
            TokenEntry::new(1, "x", false),
        ])
        .unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![0.5, 0.5]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        (lex, model)
    }

    fn single_word_model() -> (Lexicon, NGramModel) {
        let lex = Lexicon::build(vec![TokenEntry::new(0, "\u{2581}a", true)]).unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![1.0]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        (lex, model)
    }

    #[test]
    fn score_word_matches_hand_computation() {
        let (lex, model) = toy_a();
        let ctx = Context::empty();
        let s = score_word(&model, &lex, &ctx, &[0]).unwrap();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        let s = score_word(&model, &lex, &ctx, &[0, 2]).unwrap();
        assert_abs_diff_eq!(s, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn score_word_rejects_malformed_words() {
        let (lex, model) = toy_a();
        let ctx = Context::empty();
        assert!(matches!(
            score_word(&model, &lex, &ctx, &[]),
            Err(Error::MalformedWord(_))
        ));
        assert!(matches!(
            score_word(&model, &lex, &ctx, &[2]),
            Err(Error::MalformedWord(_))
        ));
        assert!(matches!(
            score_word(&model, &lex, &ctx, &[0, 1]),
            Err(Error::MalformedWord(_))
        ));
    }

    #[test]
    fn score_word_is_infinite_on_zero_probability() {
        let lex = Lexicon::build(vec![
            TokenEntry::new(0, "\u{2581}a", true),
            TokenEntry::new(1, "\u{2581}b", true),
        ])
        .unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![1.0, 0.0]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        let s = score_word(&model, &lex, &Context::empty(), &[1]).unwrap();
        assert!(s.is_infinite() && s > 0.0);
        let s = score_word(&model, &lex, &Context::empty(), &[0]).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn samples_follow_the_word_grammar() {
        let (lex, model) = toy_a();
        let config = SamplerConfig {
            sample_count: 200,
            ..SamplerConfig::default()
        };
        let set = sample_set(&model, &lex, &Context::empty(), &config).unwrap();
        assert_eq!(set.len(), 200);
        let mut saw_single = false;
        let mut saw_multi = false;
        for sample in set.samples() {
            assert!(lex.is_boundary(sample.token_ids[0]).unwrap());
            for &t in &sample.token_ids[1..] {
                assert!(!lex.is_boundary(t).unwrap());
            }
            assert!(sample.token_ids.len() <= config.max_word_tokens);
            assert!(sample.surprisal_bits >= 0.0);
            if !sample.truncated {
                let rescored =
                    score_word(&model, &lex, &Context::empty(), &sample.token_ids).unwrap();
                assert_abs_diff_eq!(sample.surprisal_bits, rescored, epsilon = 1e-9);
            }
            saw_single |= sample.token_ids.len() == 1;
            saw_multi |= sample.token_ids.len() > 1;
        }
        assert!(saw_single && saw_multi);
    }

    #[test]
    fn truncation_hits_the_cap_without_an_end_term() {
        let (lex, model) = toy_b();
        let config = SamplerConfig {
            sample_count: 64,
            max_word_tokens: 2,
            seed: 0,
        };
        let set = sample_set(&model, &lex, &Context::empty(), &config).unwrap();
        let mut saw_truncated = false;
        for sample in set.samples() {
            if sample.truncated {
                saw_truncated = true;
                assert_eq!(sample.token_ids, vec![0, 1]);
                assert_abs_diff_eq!(sample.surprisal_bits, 1.0, epsilon = 1e-12);
            } else if sample.token_ids == vec![0] {
                assert_abs_diff_eq!(sample.surprisal_bits, 1.0, epsilon = 1e-12);
            }
        }
        assert!(saw_truncated);
        assert_eq!(
            set.truncated_count(),
            set.samples().iter().filter(|s| s.truncated).count()
        );
    }

    #[test]
    fn truncation_is_rare_under_the_default_cap() {
        let (lex, model) = toy_a();
        let config = SamplerConfig {
            sample_count: 100_000,
            ..SamplerConfig::default()
        };
        let set = sample_set(&model, &lex, &Context::empty(), &config).unwrap();
        assert_eq!(set.truncated_count(), 0);
    }

    #[test]
    fn deterministic_model_yields_zero_surprisal() {
        let (lex, model) = single_word_model();
        let sample = sample_word(
            &model,
            &lex,
            &Context::empty(),
            &SamplerConfig::default(),
            3,
        )
        .unwrap();
        assert_eq!(sample.token_ids, vec![0]);
        assert_eq!(sample.surprisal_bits, 0.0);
        assert!(!sample.truncated);
    }

    #[test]
    fn sample_set_is_reproducible_and_order_independent() {
        let (lex, model) = toy_a();
        let config = SamplerConfig {
            sample_count: 128,
            ..SamplerConfig::default()
        };
        let ctx = Context::empty();
        let parallel = sample_set(&model, &lex, &ctx, &config).unwrap();
        let again = sample_set(&model, &lex, &ctx, &config).unwrap();
        assert_eq!(parallel, again);

        let sequential: Vec<WordSample> = (0..config.sample_count as u64)
            .map(|i| sample_word(&model, &lex, &ctx, &config, i).unwrap())
            .collect();
        assert_eq!(parallel.samples(), sequential.as_slice());
    }

    #[test]
    fn different_seeds_and_contexts_give_different_streams() {
        let (lex, model) = toy_a();
        let config = SamplerConfig {
            sample_count: 64,
            ..SamplerConfig::default()
        };
        let base = sample_set(&model, &lex, &Context::empty(), &config).unwrap();
        let reseeded = sample_set(
            &model,
            &lex,
            &Context::empty(),
            &SamplerConfig { seed: 1, ..config },
        )
        .unwrap();
        assert_ne!(base, reseeded);
        let shifted = sample_set(&model, &lex, &Context::new(vec![0]), &config).unwrap();
        assert_ne!(base.samples(), shifted.samples());
    }

    #[test]
    fn degenerate_context_errors() {
        let lex = Lexicon::build(vec![
            TokenEntry::new(0, "\u{2581}a", true),
            TokenEntry::new(1, "x", false),
        ])
        .unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![0.0, 1.0]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        let err = sample_word(
            &model,
            &lex,
            &Context::empty(),
            &SamplerConfig::default(),
            0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateBoundary));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let (lex, model) = toy_a();
        let bad = SamplerConfig {
            sample_count: 0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            sample_set(&model, &lex, &Context::empty(), &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn sampled_words_rescore_to_their_surprisal(
            raw in proptest::collection::vec(1e-3..1.0f64, 4),
            seed in 0u64..1000,
        ) {
            let sum: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.into_iter().map(|x| x / sum).collect();
            let lex = Lexicon::build(vec![
                TokenEntry::new(0, "\u{2581}a", true),
                TokenEntry::new(1, "\u{2581}b", true),
                TokenEntry::new(2, "x", false),
                TokenEntry::new(3, "y", false),
            ]).unwrap();
            let model = NGramModel::new(
                TokenDistribution::new(probs).unwrap(),
                HashMap::new(),
                1.0,
            ).unwrap();
            let config = SamplerConfig { sample_count: 16, max_word_tokens: 20, seed };
            let set = sample_set(&model, &lex, &Context::empty(), &config).unwrap();
            for sample in set.samples() {
                prop_assert!(sample.surprisal_bits >= 0.0);
                if !sample.truncated {
                    let rescored = score_word(&model, &lex, &Context::empty(), &sample.token_ids).unwrap();
                    prop_assert!((sample.surprisal_bits - rescored).abs() < 1e-9);
                }
            }
        }
    }
}
