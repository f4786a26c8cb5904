//! Downstream analyses: estimator variance, frequency baselines, reading-time
//! regression, permutation testing, and per-tag aggregation.

mod aggregate;
mod permutation;
mod regression;
mod unigram;
mod variance;

pub use aggregate::{aggregate_by_tag, TagSummary};
pub use permutation::{paired_permutation_test, PermutationResult};
pub use regression::{
    assign_partition, build_design, delta_ll, fit_linear_model, word_predictors, Design,
    DesignConfig, DesignPair, FitResult, Partition, ResponseKind, WordPredictors,
    DEFAULT_HELDOUT_FRAC, DEFAULT_PERMUTATIONS,
};
pub use unigram::UnigramModel;
pub use variance::{
    bootstrap_cv, CvReport, EstimatorKind, DEFAULT_BOOTSTRAP_RESAMPLES, DEFAULT_SAMPLE_GRID,
};
