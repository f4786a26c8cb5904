//! Word-level contextual entropy over subword language models.
//!
//! Subword language models assign probabilities to tokens, but words are the
//! unit that reading behavior is measured in. This crate turns next-token
//! distributions into next-word entropy estimates and carries them through a
//! small analysis pipeline:
//!
//! * [`lexicon`]: vocabularies partitioned into word-initial (boundary) and
//!   word-internal tokens.
//! * [`lm`]: the [`LanguageModel`] provider contract, an interpolated n-gram
//!   reference implementation, and boundary/continuation views of a
//!   next-token distribution.
//! * [`sampler`]: Monte Carlo word sampling with reproducible per-context
//!   random streams, plus exact scoring of individual words.
//! * [`estimators`]: first-token and Monte Carlo Shannon/Rényi estimators and
//!   an exact enumeration oracle.
//! * [`corpus`]: corpora, reading-time records, and greedy word-to-token
//!   segmentation.
//! * [`analysis`]: bootstrap variance of the estimators, unigram baselines,
//!   held-out regression comparison with a permutation test, and per-tag
//!   aggregation.
//! * [`cli`]: the `lexent` command-line interface over TSV files.
//!
//! All entropies and surprisals are in bits. Every stochastic routine is
//! deterministic given its seed, independent of thread count.
//!
//! ```
//! use lexent::estimators::{first_token_shannon, first_token_renyi, RenyiOrder};
//! use lexent::lm::TokenDistribution;
//!
//! let dist = TokenDistribution::new(vec![0.5, 0.25, 0.25])?;
//! assert!((first_token_shannon(&dist) - 1.5).abs() < 1e-12);
//! let half = first_token_renyi(&dist, RenyiOrder::new(0.5)?);
//! assert!((half - 1.543107).abs() < 1e-6);
//! # Ok::<(), lexent::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod estimators;
pub mod lexicon;
pub mod lm;
mod rng;
pub mod sampler;
mod tsv;

pub use error::{Error, Result};
pub use lexicon::{Lexicon, TokenEntry, TokenId};
pub use lm::{Context, LanguageModel, NGramModel, TokenDistribution};
pub use sampler::{SampleSet, SamplerConfig, WordSample};
