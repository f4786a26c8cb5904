//! Language-model provider: next-token distributions over a lexicon.
//!
//! The [`LanguageModel`] trait is the contract the samplers and estimators
//! build on; [`NGramModel`] is the reference implementation, an interpolated
//! table model read from TSV. Derived views split a next-token distribution
//! at the word boundary: the renormalized word-initial distribution over
//! boundary tokens, and the continuation distribution over internal tokens
//! plus an end-of-word event carrying the boundary mass.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, TokenId};
use crate::rng;
use crate::tsv;

/// Absolute deviation from 1 accepted without touching the probabilities.
pub const SUM_ACCEPT: f64 = 1e-9;
/// Deviations up to this are silently renormalized; beyond it is an error.
pub const SUM_RENORMALIZE: f64 = 1e-6;

/// Token prefix conditioning a next-token query. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    tokens: Vec<TokenId>,
}

impl Context {
    #[must_use]
    pub fn empty() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn new(tokens: Vec<TokenId>) -> Self {
        Self { tokens }
    }

    #[must_use]
    pub fn tokens(&self) -> &[TokenId] {
        &self.tokens
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, id: TokenId) {
        self.tokens.push(id);
    }

    /// Copy of this context with `id` appended.
    #[must_use]
    pub fn extended(&self, id: TokenId) -> Self {
        let mut tokens = Vec::with_capacity(self.tokens.len() + 1);
        tokens.extend_from_slice(&self.tokens);
        tokens.push(id);
        Self { tokens }
    }

    /// Stable 64-bit fingerprint, used to key per-context random streams.
    #[must_use]
    pub fn fingerprint(&self) -> u64 {
        let mut parts = Vec::with_capacity(self.tokens.len() + 1);
        parts.push(self.tokens.len() as u64);
        parts.extend(self.tokens.iter().map(|&t| u64::from(t)));
        rng::mix(&parts)
    }
}

impl From<Vec<TokenId>> for Context {
    fn from(tokens: Vec<TokenId>) -> Self {
        Self::new(tokens)
    }
}

/// Probability vector over the full vocabulary, indexed by token id.
///
/// Construction enforces properness: entries must be finite and non-negative,
/// and the sum must be within [`SUM_RENORMALIZE`] of 1 (deviations beyond
/// [`SUM_ACCEPT`] are renormalized away).
#[derive(Debug, Clone, PartialEq)]
pub struct TokenDistribution {
    probs: Vec<f64>,
}

impl TokenDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyInput("token distribution"));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev <= SUM_ACCEPT {
            Ok(Self { probs })
        } else if dev <= SUM_RENORMALIZE {
            let mut probs = probs;
            for p in &mut probs {
                *p /= sum;
            }
            Ok(Self { probs })
        } else {
            Err(Error::ImproperDistribution { sum })
        }
    }

    /// Uniform distribution over `n` tokens.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput("token distribution"));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Wraps probabilities already known to be proper (internal use:
    /// convex combinations and masked renormalizations of valid inputs).
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        Self { probs }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of token `id`. Panics if `id` is out of range.
    #[must_use]
    pub fn prob(&self, id: TokenId) -> f64 {
        self.probs[id as usize]
    }

    #[must_use]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Anything that yields a next-token distribution given a token context.
pub trait LanguageModel {
    /// Size of the vocabulary this model is defined over.
    fn vocab_size(&self) -> usize;

    /// Distribution over the next token given `context`.
    fn next_token_distribution(&self, context: &Context) -> Result<TokenDistribution>;
}

/// Interpolated n-gram table model.
///
/// Prediction finds the longest context suffix with a table entry and blends
/// it with the unconditional distribution: `lambda * table + (1 - lambda) *
/// unconditional`. With no matching suffix the unconditional distribution is
/// used as-is (full backoff).
#[derive(Debug, Clone)]
pub struct NGramModel {
    unconditional: TokenDistribution,
    tables: HashMap<Vec<TokenId>, TokenDistribution>,
    lambda: f64,
    order: usize,
}

impl NGramModel {
    /// Builds a model from an unconditional distribution and per-context
    /// tables. The order is one more than the longest table context, or 1.
    pub fn new(
        unconditional: TokenDistribution,
        tables: HashMap<Vec<TokenId>, TokenDistribution>,
        lambda: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be in [0, 1], got {lambda}"
            )));
        }
        let vocab = unconditional.len();
        for (ctx, dist) in &tables {
            if dist.len() != vocab {
                return Err(Error::VocabMismatch {
                    got: dist.len(),
                    want: vocab,
                });
            }
            for &t in ctx {
                if t as usize >= vocab {
                    return Err(Error::UnknownTokenId(t));
                }
            }
        }
        let order = 1 + tables.keys().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            unconditional,
            tables,
            lambda,
            order,
        })
    }

    /// Reads a model from TSV with header `context\ttoken_id\tprob`, where
    /// `context` is a comma-joined token id list and the empty string keys
    /// the unconditional distribution (which must be present). Probabilities
    /// are sparse; omitted tokens get probability 0. Each context must sum to
    /// 1 within [`SUM_RENORMALIZE`].
    pub fn from_tsv_path(path: impl AsRef<Path>, lexicon: &Lexicon, lambda: f64) -> Result<Self> {
        let path = path.as_ref();
        let (label, rows, _) = tsv::read_table(path, &["context", "token_id", "prob"], &[])?;
        let vocab = lexicon.len();
        let mut sparse: HashMap<Vec<TokenId>, Vec<f64>> = HashMap::new();
        let mut first_line: HashMap<Vec<TokenId>, usize> = HashMap::new();
        let mut filled: HashMap<(Vec<TokenId>, TokenId), usize> = HashMap::new();
        for row in rows {
            tsv::check_width(&label, &row, 3)?;
            let ctx = parse_context(&label, row.line, &row.fields[0])?;
            for &t in &ctx {
                if !lexicon.contains(t) {
                    return Err(tsv::err(
                        &label,
                        row.line,
                        &format!("unknown token id {t} in context"),
                    ));
                }
            }
            let token: TokenId = tsv::parse_field(&label, row.line, "token_id", &row.fields[1])?;
            if !lexicon.contains(token) {
                return Err(tsv::err(&label, row.line, &format!("unknown token id {token}")));
            }
            let prob: f64 = tsv::parse_field(&label, row.line, "prob", &row.fields[2])?;
            if !prob.is_finite() || prob < 0.0 {
                return Err(tsv::err(&label, row.line, &format!("invalid probability {prob}")));
            }
            if let Some(prev) = filled.insert((ctx.clone(), token), row.line) {
                return Err(tsv::err(
                    &label,
                    row.line,
                    &format!("duplicate (context, token) pair, first seen on line {prev}"),
                ));
            }
            first_line.entry(ctx.clone()).or_insert(row.line);
            sparse.entry(ctx).or_insert_with(|| vec![0.0; vocab])[token as usize] = prob;
        }

        let mut unconditional = None;
        let mut tables = HashMap::new();
        for (ctx, probs) in sparse {
            let line = first_line[&ctx];
            let dist = TokenDistribution::new(probs).map_err(|e| {
                tsv::err(&label, line, &format!("context {:?}: {e}", join_context(&ctx)))
            })?;
            if ctx.is_empty() {
                unconditional = Some(dist);
            } else {
                tables.insert(ctx, dist);
            }
        }
        let unconditional = unconditional.ok_or_else(|| {
            tsv::err(&label, 0, "missing unconditional distribution (empty context)")
        })?;
        Self::new(unconditional, tables, lambda)
    }

    /// Interpolation weight on the matched table.
    #[must_use]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Model order: 1 plus the longest table context.
    #[must_use]
    pub fn order(&self) -> usize {
        self.order
    }

    #[must_use]
    pub fn unconditional(&self) -> &TokenDistribution {
        &self.unconditional
    }
}

fn parse_context(label: &str, line: usize, raw: &str) -> Result<Vec<TokenId>> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|part| tsv::parse_field(label, line, "context token id", part))
        .collect()
}

fn join_context(ctx: &[TokenId]) -> String {
    ctx.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl LanguageModel for NGramModel {
    fn vocab_size(&self) -> usize {
        self.unconditional.len()
    }

    fn next_token_distribution(&self, context: &Context) -> Result<TokenDistribution> {
        let vocab = self.vocab_size();
        for &t in context.tokens() {
            if t as usize >= vocab {
                return Err(Error::UnknownTokenId(t));
            }
        }
        let tokens = context.tokens();
        let longest = (self.order - 1).min(tokens.len());
        for take in (1..=longest).rev() {
            let suffix = &tokens[tokens.len() - take..];
            if let Some(table) = self.tables.get(suffix) {
                let probs = table
                    .probs()
                    .iter()
                    .zip(self.unconditional.probs())
                    .map(|(&t, &u)| self.lambda * t + (1.0 - self.lambda) * u)
                    .collect();
                return Ok(TokenDistribution::from_normalized(probs));
            }
        }
        Ok(self.unconditional.clone())
    }
}

/// Total probability on boundary tokens: the chance the next token starts a
/// new word. The distribution must cover the lexicon's vocabulary.
#[must_use]
pub fn boundary_mass(lexicon: &Lexicon, dist: &TokenDistribution) -> f64 {
    assert_eq!(
        dist.len(),
        lexicon.len(),
        "distribution and lexicon sizes differ"
    );
    lexicon.boundary_ids().iter().map(|&id| dist.prob(id)).sum()
}

/// Distribution over the first token of the next word: boundary tokens
/// renormalized by the boundary mass, zero elsewhere. Errors when no mass
/// falls on boundary tokens.
pub fn word_initial_distribution(
    lexicon: &Lexicon,
    dist: &TokenDistribution,
) -> Result<TokenDistribution> {
    let mass = boundary_mass(lexicon, dist);
    if mass <= 0.0 {
        return Err(Error::DegenerateBoundary);
    }
    let mut probs = vec![0.0; dist.len()];
    for &id in lexicon.boundary_ids() {
        probs[id as usize] = dist.prob(id) / mass;
    }
    Ok(TokenDistribution::from_normalized(probs))
}

/// Within-word continuation view of a next-token distribution: internal-token
/// probabilities plus an end-of-word event.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationDistribution {
    probs: Vec<f64>,
    eow: f64,
}

impl ContinuationDistribution {
    /// Probability of continuing with internal token `id` (zero for boundary
    /// ids). Panics if `id` is out of range.
    #[must_use]
    pub fn prob(&self, id: TokenId) -> f64 {
        self.probs[id as usize]
    }

    #[must_use]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability that the word ends here: the boundary mass of the
    /// underlying distribution.
    #[must_use]
    pub fn eow(&self) -> f64 {
        self.eow
    }
}

/// Splits a next-token distribution into internal continuations and an
/// end-of-word event carrying the boundary mass. Probabilities sum to 1.
#[must_use]
pub fn continuation_distribution(
    lexicon: &Lexicon,
    dist: &TokenDistribution,
) -> ContinuationDistribution {
    let eow = boundary_mass(lexicon, dist);
    let mut probs = vec![0.0; dist.len()];
    for &id in lexicon.internal_ids() {
        probs[id as usize] = dist.prob(id);
    }
    ContinuationDistribution { probs, eow }
}
