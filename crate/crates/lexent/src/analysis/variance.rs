//! Bootstrap variance of the Monte Carlo estimators as a function of sample
//! count.
//!
//! For each sample count `k` and each context, `k` words are sampled once,
//! then resampled with replacement `n_boot` times; the coefficient of
//! variation (bootstrap sd over mean) of the resampled entropy estimates
//! measures how noisy the estimator is at that sample budget. Averaging over
//! contexts gives one CV per `k`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{renyi_from_surprisals, sample_sd};
use crate::lexicon::Lexicon;
use crate::lm::{Context, LanguageModel};
use crate::rng::{stream_rng, DOMAIN_RESAMPLE};
use crate::sampler::{sample_set, SamplerConfig};

/// Default bootstrap resample count.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

/// Default sample-count grid: powers of two from 4 to 2048.
pub const DEFAULT_SAMPLE_GRID: [usize; 10] = [4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048];

/// Which Monte Carlo estimator the CV is measured for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    Shannon,
    /// Finite positive order; 1 behaves like Shannon.
    Renyi(f64),
}

impl EstimatorKind {
    fn validate(self) -> Result<()> {
        match self {
            EstimatorKind::Shannon => Ok(()),
            EstimatorKind::Renyi(a) if a.is_finite() && a > 0.0 => Ok(()),
            EstimatorKind::Renyi(a) => Err(Error::InvalidOrder(a)),
        }
    }

    fn estimate(self, surprisals: &[f64]) -> Result<f64> {
        match self {
            EstimatorKind::Shannon => {
                Ok(surprisals.iter().sum::<f64>() / surprisals.len() as f64)
            }
            EstimatorKind::Renyi(a) => renyi_from_surprisals(surprisals, a),
        }
    }
}

/// Bootstrap CV of one estimator across a sample-count grid.
#[derive(Debug, Clone)]
pub struct CvReport {
    pub kind: EstimatorKind,
    /// The sample-count grid, strictly increasing.
    pub ks: Vec<usize>,
    /// CV per grid point and context; `None` marks an undefined cell
    /// (near-zero mean with non-zero spread).
    pub per_context: Vec<Vec<Option<f64>>>,
    /// Mean CV over defined cells, one per grid point. NaN when every cell
    /// at that grid point is undefined.
    pub cv_by_k: Vec<f64>,
    /// Undefined cells per grid point.
    pub undefined_by_k: Vec<usize>,
}

const ZERO_MEAN_FLOOR: f64 = 1e-12;

/// Measures the bootstrap CV of a Monte Carlo estimator over `contexts` at
/// each sample count in `ks`.
///
/// `config.seed` keys both the sampling and the resampling streams, so the
/// report is deterministic and independent of thread count. A context whose
/// resampled estimates have near-zero mean but non-zero spread gives an
/// undefined CV and is excluded from (but counted next to) the per-`k` mean;
/// a fully deterministic context gives CV 0.
pub fn bootstrap_cv<M: LanguageModel + Sync + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    contexts: &[Context],
    kind: EstimatorKind,
    ks: &[usize],
    n_boot: usize,
    config: &SamplerConfig,
) -> Result<CvReport> {
    kind.validate()?;
    if contexts.is_empty() {
        return Err(Error::EmptyInput("contexts"));
    }
    if ks.is_empty() {
        return Err(Error::EmptyInput("sample-count grid"));
    }
    if ks[0] == 0 || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "sample-count grid must be strictly increasing and positive".into(),
        ));
    }
    if n_boot < 2 {
        return Err(Error::InvalidConfig(
            "bootstrap needs at least 2 resamples".into(),
        ));
    }

    let mut per_context = Vec::with_capacity(ks.len());
    for &k in ks {
        let cells: Vec<Option<f64>> = contexts
            .par_iter()
            .enumerate()
            .map(|(i, context)| -> Result<Option<f64>> {
                let cfg = SamplerConfig {
                    sample_count: k,
                    ..*config
                };
                let set = sample_set(model, lexicon, context, &cfg)?;
                let surprisals = set.surprisals();
                let mut rng = stream_rng(&[
                    config.seed,
                    DOMAIN_RESAMPLE,
                    context.fingerprint(),
                    k as u64,
                    i as u64,
                ]);
                let mut resample = vec![0.0; k];
                let mut estimates = Vec::with_capacity(n_boot);
                for _ in 0..n_boot {
                    for slot in &mut resample {
                        *slot = surprisals[rng.random_range(0..k)];
                    }
                    estimates.push(kind.estimate(&resample)?);
                }
                let mean = estimates.iter().sum::<f64>() / n_boot as f64;
                let sd = sample_sd(&estimates);
                if mean.abs() < ZERO_MEAN_FLOOR {
                    if sd < ZERO_MEAN_FLOOR {
                        Ok(Some(0.0))
                    } else {
                        Ok(None)
                    }
                } else {
                    Ok(Some(sd / mean))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        per_context.push(cells);
    }

    let mut cv_by_k = Vec::with_capacity(ks.len());
    let mut undefined_by_k = Vec::with_capacity(ks.len());
    for cells in &per_context {
        let defined: Vec<f64> = cells.iter().filter_map(|c| *c).collect();
        undefined_by_k.push(cells.len() - defined.len());
        if defined.is_empty() {
            cv_by_k.push(f64::NAN);
        } else {
            cv_by_k.push(defined.iter().sum::<f64>() / defined.len() as f64);
        }
    }
    Ok(CvReport {
        kind,
        ks: ks.to_vec(),
        per_context,
        cv_by_k,
        undefined_by_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::TokenEntry;
    use crate::lm::{NGramModel, TokenDistribution};
    use std::collections::HashMap;

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

    #[test]
    fn cv_shrinks_with_more_samples() {
        let (lex, model) = toy_a();
        let contexts = vec![Context::empty(), Context::new(vec![0]), Context::new(vec![1])];
        let report = bootstrap_cv(
            &model,
            &lex,
            &contexts,
            EstimatorKind::Shannon,
            &[16, 64, 256],
            500,
            &SamplerConfig::default(),
        )
        .unwrap();
        assert_eq!(report.cv_by_k.len(), 3);
        assert!(report.cv_by_k[0] > report.cv_by_k[1]);
        assert!(report.cv_by_k[1] > report.cv_by_k[2]);
        assert_eq!(report.undefined_by_k, vec![0, 0, 0]);
    }

    #[test]
    fn deterministic_context_has_zero_cv() {
        let lex = Lexicon::build(vec![TokenEntry::new(0, "\u{2581}a", true)]).unwrap();
        let model = NGramModel::new(
            TokenDistribution::new(vec![1.0]).unwrap(),
            HashMap::new(),
            1.0,
        )
        .unwrap();
        let report = bootstrap_cv(
            &model,
            &lex,
            &[Context::empty()],
            EstimatorKind::Shannon,
            &[4, 8],
            50,
            &SamplerConfig::default(),
        )
        .unwrap();
        assert_eq!(report.cv_by_k, vec![0.0, 0.0]);
        assert_eq!(report.per_context[0][0], Some(0.0));
    }

    #[test]
    fn report_is_deterministic_across_runs() {
        let (lex, model) = toy_a();
        let contexts = vec![Context::empty(), Context::new(vec![2])];
        let run = || {
            bootstrap_cv(
                &model,
                &lex,
                &contexts,
                EstimatorKind::Renyi(0.5),
                &[8, 32],
                200,
                &SamplerConfig::default(),
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.cv_by_k, b.cv_by_k);
        assert_eq!(a.per_context, b.per_context);
    }

    #[test]
    fn invalid_grids_and_counts_are_rejected() {
        let (lex, model) = toy_a();
        let ctx = [Context::empty()];
        let cfg = SamplerConfig::default();
        let shannon = EstimatorKind::Shannon;
        assert!(matches!(
            bootstrap_cv(&model, &lex, &ctx, shannon, &[8, 8], 10, &cfg),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            bootstrap_cv(&model, &lex, &ctx, shannon, &[8, 4], 10, &cfg),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            bootstrap_cv(&model, &lex, &ctx, shannon, &[4, 8], 1, &cfg),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            bootstrap_cv(&model, &lex, &ctx, shannon, &[], 10, &cfg),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            bootstrap_cv(&model, &lex, &[], shannon, &[4], 10, &cfg),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            bootstrap_cv(&model, &lex, &ctx, EstimatorKind::Renyi(-1.0), &[4], 10, &cfg),
            Err(Error::InvalidOrder(_))
        ));
    }
}
