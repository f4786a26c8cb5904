//! Argument definitions and run-wide defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    DEFAULT_BOOTSTRAP_RESAMPLES, DEFAULT_HELDOUT_FRAC, DEFAULT_PERMUTATIONS, DEFAULT_SAMPLE_GRID,
};
use crate::lexicon::DEFAULT_BOUNDARY_MARKER;
use crate::sampler::{DEFAULT_MAX_WORD_TOKENS, DEFAULT_SAMPLE_COUNT};

/// Resolved run parameters with the toolkit-wide defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Words per Monte Carlo sample set.
    pub sample_count: usize,
    /// Token cap per sampled word.
    pub max_word_tokens: usize,
    /// Rényi order used wherever a Rényi estimate is produced.
    pub alpha: f64,
    /// Master seed for every random stream.
    pub seed: u64,
    /// Sample-count grid for the variance analysis.
    pub ks: Vec<usize>,
    /// Bootstrap resamples per grid point.
    pub n_boot: usize,
    /// Sign flips in the permutation test.
    pub n_perm: usize,
    /// Fraction of items held out in the regression split.
    pub heldout_frac: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sample_count: DEFAULT_SAMPLE_COUNT,
            max_word_tokens: DEFAULT_MAX_WORD_TOKENS,
            alpha: 0.5,
            seed: 0,
            ks: DEFAULT_SAMPLE_GRID.to_vec(),
            n_boot: DEFAULT_BOOTSTRAP_RESAMPLES,
            n_perm: DEFAULT_PERMUTATIONS,
            heldout_frac: DEFAULT_HELDOUT_FRAC,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lexent",
    version,
    about = "Word-level contextual entropy estimation over subword language models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-word first-token and Monte Carlo entropy estimates over a corpus.
    Estimate(EstimateArgs),
    /// Exact enumeration entropies with lower-bound verdicts.
    Oracle(OracleArgs),
    /// Bootstrap CV of the Monte Carlo estimators across sample counts.
    Variance(VarianceArgs),
    /// Held-out regression comparison of entropy predictors.
    Regress(RegressArgs),
    /// Mean entropy per part-of-speech tag.
    Aggregate(AggregateArgs),
}

/// Model inputs shared by all subcommands.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Lexicon TSV: 'id\tsurface\tboundary' or 'id\tsurface'.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Language model TSV: 'context\ttoken_id\tprob'.
    #[arg(long)]
    pub lm: PathBuf,
    /// Boundary marker prefix, used for two-column lexicons and for
    /// segmenting corpus words.
    #[arg(long, default_value = DEFAULT_BOUNDARY_MARKER)]
    pub marker: String,
    /// Interpolation weight on matched n-gram tables.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

/// Sampling and estimation parameters shared by all subcommands.
#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Words per Monte Carlo sample set.
    #[arg(long, default_value_t = RunConfig::default().sample_count)]
    pub samples: usize,
    /// Rényi order for the Rényi estimators.
    #[arg(long, default_value_t = RunConfig::default().alpha)]
    pub alpha: f64,
    /// Token cap per sampled word.
    #[arg(long, default_value_t = RunConfig::default().max_word_tokens)]
    pub max_word_tokens: usize,
    /// Master seed for all random streams.
    #[arg(long, default_value_t = RunConfig::default().seed)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Corpus TSV: 'doc_id\tword_index\tword' with optional 'pos'.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Corpus TSV; without it the single empty context is analyzed.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Enumeration depth in tokens.
    #[arg(long, default_value_t = RunConfig::default().max_word_tokens)]
    pub depth: usize,
    /// Residual mass at which results are flagged approximate.
    #[arg(long, default_value_t = crate::estimators::DEFAULT_RESIDUAL_TOLERANCE)]
    pub residual_tol: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Corpus TSV providing the contexts.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Sample-count grid, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = RunConfig::default().ks)]
    pub ks: Vec<usize>,
    /// Bootstrap resamples per grid point.
    #[arg(long, default_value_t = RunConfig::default().n_boot)]
    pub n_boot: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Which entropy estimate feeds the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyVariant {
    FtShannon,
    FtRenyi,
    McShannon,
    McRenyi,
}

impl std::fmt::Display for EntropyVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            EntropyVariant::FtShannon => "ft-shannon",
            EntropyVariant::FtRenyi => "ft-renyi",
            EntropyVariant::McShannon => "mc-shannon",
            EntropyVariant::McRenyi => "mc-renyi",
        };
        f.write_str(name)
    }
}

/// Reading-time measure selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResponseArg {
    /// Self-paced reading time.
    Spr,
    /// First-pass gaze duration.
    Fp,
    /// Go-past time.
    Gp,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Corpus TSV aligned with the reading-time records.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Reading-time TSV: 'doc_id\tword_index\tsubject\trt_ms' with optional
    /// 'prev_fixated'.
    #[arg(long)]
    pub rt: PathBuf,
    /// Unigram count TSV: 'word\tcount'.
    #[arg(long)]
    pub unigram: PathBuf,
    /// Entropy variant to add to the baseline; pass twice to compare two
    /// variants with a paired permutation test.
    #[arg(long = "variant", value_enum, action = clap::ArgAction::Append, required = true)]
    pub variants: Vec<EntropyVariant>,
    /// Reading-time measure.
    #[arg(long, value_enum, default_value_t = ResponseArg::Spr)]
    pub response: ResponseArg,
    /// Regress on log reading times.
    #[arg(long)]
    pub log_rt: bool,
    /// Fraction of items held out for evaluation.
    #[arg(long, default_value_t = RunConfig::default().heldout_frac)]
    pub heldout_frac: f64,
    /// Sign flips in the permutation test.
    #[arg(long, default_value_t = RunConfig::default().n_perm)]
    pub n_perm: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Corpus TSV; every word needs a pos tag.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Entropy variant to aggregate.
    #[arg(long, value_enum, default_value_t = EntropyVariant::McShannon)]
    pub variant: EntropyVariant,
    /// Keep only the most frequent tags; 0 keeps all.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SamplingArgs {
    /// Run configuration implied by the command-line values (grid and
    /// analysis counts keep their defaults unless a subcommand overrides
    /// them).
    #[must_use]
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            sample_count: self.samples,
            max_word_tokens: self.max_word_tokens,
            alpha: self.alpha,
            seed: self.seed,
            ..RunConfig::default()
        }
    }

    #[must_use]
    pub fn sampler_config(&self) -> crate::sampler::SamplerConfig {
        crate::sampler::SamplerConfig {
            sample_count: self.samples,
            max_word_tokens: self.max_word_tokens,
            seed: self.seed,
        }
    }
}
