//! Reading-time regression: held-out log-likelihood comparison of a baseline
//! predictor set against the same set plus a contextual entropy column.
//!
//! The model is ordinary least squares with a Gaussian likelihood and
//! per-subject intercepts (reference-coded subject dummies). Baseline
//! predictors: word length, word index, smoothed unigram surprisal, and the
//! language-model surprisal of the current and previous word, plus a
//! previous-word-fixated flag for the eye-tracking responses. Continuous
//! predictors are z-scored with fit-partition statistics; document-initial
//! words are excluded (they have no previous word); items are split into fit
//! and held-out partitions by a seeded hash of `(doc_id, word_index)` so the
//! split is deterministic and identical across model variants.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::corpus::{Corpus, RtRow};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::lm::LanguageModel;
use crate::rng::{hash_bytes, mix, DOMAIN_SPLIT};
use crate::sampler::score_word;
use crate::analysis::UnigramModel;
use crate::corpus::TokenizedCorpus;

/// Default fraction of items held out for evaluation.
pub const DEFAULT_HELDOUT_FRAC: f64 = 1.0 / 3.0;
/// Default number of sign flips in the permutation test.
pub const DEFAULT_PERMUTATIONS: usize = 10_000;

const COLLINEARITY_RTOL: f64 = 1e-10;
const VARIANCE_FLOOR: f64 = 1e-12;

/// Which reading-time measure the response column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseKind {
    /// Self-paced reading time.
    Spr,
    /// First-pass gaze duration.
    FirstPass,
    /// Go-past time.
    GoPast,
}

impl ResponseKind {
    /// The eye-tracking measures need the previous-word-fixated flag.
    #[must_use]
    pub fn needs_prev_fixated(self) -> bool {
        !matches!(self, ResponseKind::Spr)
    }
}

/// Fit/held-out membership of an item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Fit,
    HeldOut,
}

/// Deterministically assigns an item to a partition by hashing its key with
/// the split seed. All observations of one `(doc_id, word_index)` item land
/// on the same side.
#[must_use]
pub fn assign_partition(
    doc_id: &str,
    word_index: usize,
    heldout_frac: f64,
    split_seed: u64,
) -> Partition {
    let h = mix(&[
        split_seed,
        DOMAIN_SPLIT,
        hash_bytes(doc_id.as_bytes()),
        word_index as u64,
    ]);
    let unit = (h >> 11) as f64 / (1u64 << 53) as f64;
    if unit < heldout_frac {
        Partition::HeldOut
    } else {
        Partition::Fit
    }
}

/// Per-word predictor columns, aligned with the corpus flat order.
#[derive(Debug, Clone)]
pub struct WordPredictors {
    /// Word length in characters.
    pub length: Vec<f64>,
    /// Word index within its document.
    pub word_index: Vec<f64>,
    /// Add-one smoothed unigram surprisal.
    pub unigram_surprisal: Vec<f64>,
    /// Language-model surprisal of the word in context.
    pub lm_surprisal: Vec<f64>,
    /// Surprisal of the preceding word; NaN for document-initial words.
    pub prev_lm_surprisal: Vec<f64>,
}

/// Computes the baseline predictors for every corpus word.
pub fn word_predictors<M: LanguageModel + ?Sized>(
    model: &M,
    lexicon: &Lexicon,
    corpus: &Corpus,
    tokenized: &TokenizedCorpus,
    unigram: &UnigramModel,
) -> Result<WordPredictors> {
    if tokenized.tokens.len() != corpus.len() {
        return Err(Error::LengthMismatch {
            left: tokenized.tokens.len(),
            right: corpus.len(),
        });
    }
    let n = corpus.len();
    let mut length = Vec::with_capacity(n);
    let mut word_index = Vec::with_capacity(n);
    let mut unigram_surprisal = Vec::with_capacity(n);
    let mut lm_surprisal = Vec::with_capacity(n);
    let mut prev_lm_surprisal = Vec::with_capacity(n);
    for (i, word) in corpus.words().iter().enumerate() {
        length.push(word.surface.chars().count() as f64);
        word_index.push(word.word_index as f64);
        unigram_surprisal.push(unigram.surprisal(&word.surface));
        let s = score_word(
            model,
            lexicon,
            &tokenized.contexts[i],
            &tokenized.tokens[i],
        )?;
        lm_surprisal.push(s);
        prev_lm_surprisal.push(if corpus.is_doc_initial(i) {
            f64::NAN
        } else {
            lm_surprisal[i - 1]
        });
    }
    Ok(WordPredictors {
        length,
        word_index,
        unigram_surprisal,
        lm_surprisal,
        prev_lm_surprisal,
    })
}

/// A regression design for one partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub matrix: DMatrix<f64>,
    pub response: DVector<f64>,
    pub columns: Vec<String>,
}

impl Design {
    #[must_use]
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Fit and held-out designs built from the same observations and split.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPair {
    pub fit: Design,
    pub heldout: Design,
}

/// Options for [`build_design`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConfig {
    pub response: ResponseKind,
    /// Regress on `ln(rt_ms)` instead of raw milliseconds.
    pub log_rt: bool,
    pub heldout_frac: f64,
    pub split_seed: u64,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            response: ResponseKind::Spr,
            log_rt: false,
            heldout_frac: DEFAULT_HELDOUT_FRAC,
            split_seed: 0,
        }
    }
}

struct RowDraft<'a> {
    row: &'a RtRow,
    continuous: Vec<f64>,
    prev_fixated: f64,
    partition: Partition,
}

/// Builds fit and held-out design matrices from reading-time observations.
///
/// `entropy` optionally appends a per-word entropy predictor (aligned with
/// the corpus flat order); passing `None` yields the baseline design.
/// Observations of document-initial words are dropped. Every observation
/// must reference a corpus word, continuous predictors must be finite, and
/// both partitions must end up non-empty.
pub fn build_design(
    corpus: &Corpus,
    predictors: &WordPredictors,
    observations: &[RtRow],
    entropy: Option<&[f64]>,
    config: &DesignConfig,
) -> Result<DesignPair> {
    if !(config.heldout_frac > 0.0 && config.heldout_frac < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "heldout_frac must be strictly between 0 and 1, got {}",
            config.heldout_frac
        )));
    }
    if predictors.length.len() != corpus.len() {
        return Err(Error::LengthMismatch {
            left: predictors.length.len(),
            right: corpus.len(),
        });
    }
    if let Some(e) = entropy {
        if e.len() != corpus.len() {
            return Err(Error::LengthMismatch {
                left: e.len(),
                right: corpus.len(),
            });
        }
    }
    if observations.is_empty() {
        return Err(Error::EmptyInput("reading-time observations"));
    }

    let mut continuous_names = vec![
        "length".to_string(),
        "word_index".to_string(),
        "unigram_surprisal".to_string(),
        "surprisal".to_string(),
        "prev_surprisal".to_string(),
    ];
    if entropy.is_some() {
        continuous_names.push("entropy".to_string());
    }

    let positions = corpus.position_map();
    let mut drafts = Vec::new();
    let mut responses = Vec::new();
    let mut subjects: BTreeMap<&str, usize> = BTreeMap::new();
    for row in observations {
        let &flat = positions
            .get(&(row.doc_id.as_str(), row.word_index))
            .ok_or_else(|| Error::UnknownItem {
                doc_id: row.doc_id.clone(),
                word_index: row.word_index,
            })?;
        if corpus.is_doc_initial(flat) {
            continue;
        }
        let prev_fixated = if config.response.needs_prev_fixated() {
            match row.prev_fixated {
                Some(flag) => f64::from(flag),
                None => {
                    return Err(Error::MissingColumn {
                        path: format!(
                            "reading-time observation {}:{} ({})",
                            row.doc_id, row.word_index, row.subject
                        ),
                        column: "prev_fixated",
                    })
                }
            }
        } else {
            0.0
        };
        let mut continuous = vec![
            predictors.length[flat],
            predictors.word_index[flat],
            predictors.unigram_surprisal[flat],
            predictors.lm_surprisal[flat],
            predictors.prev_lm_surprisal[flat],
        ];
        if let Some(e) = entropy {
            continuous.push(e[flat]);
        }
        for (value, name) in continuous.iter().zip(&continuous_names) {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    column: name.clone(),
                    doc_id: row.doc_id.clone(),
                    word_index: row.word_index,
                });
            }
        }
        let response = if config.log_rt {
            if row.rt_ms <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "log response needs positive rt_ms, got {} at {}:{}",
                    row.rt_ms, row.doc_id, row.word_index
                )));
            }
            row.rt_ms.ln()
        } else {
            row.rt_ms
        };
        subjects.entry(&row.subject).or_insert(0);
        drafts.push(RowDraft {
            row,
            continuous,
            prev_fixated,
            partition: assign_partition(
                &row.doc_id,
                row.word_index,
                config.heldout_frac,
                config.split_seed,
            ),
        });
        responses.push(response);
    }
    if drafts.is_empty() {
        return Err(Error::EmptyInput(
            "reading-time observations (all were document-initial)",
        ));
    }
    for (rank, slot) in subjects.values_mut().enumerate() {
        *slot = rank;
    }

    let n_cont = continuous_names.len();
    let mut fit_stats = vec![(0.0f64, 0.0f64); n_cont];
    let n_fit = drafts
        .iter()
        .filter(|d| d.partition == Partition::Fit)
        .count();
    if n_fit < 2 {
        return Err(Error::InvalidConfig(format!(
            "fit partition has {n_fit} rows; need at least 2 (lower heldout_frac or add data)"
        )));
    }
    if n_fit == drafts.len() {
        return Err(Error::InvalidConfig(
            "held-out partition is empty; raise heldout_frac or add data".into(),
        ));
    }
    for (j, stat) in fit_stats.iter_mut().enumerate() {
        let xs: Vec<f64> = drafts
            .iter()
            .filter(|d| d.partition == Partition::Fit)
            .map(|d| d.continuous[j])
            .collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = crate::estimators::sample_sd(&xs);
        *stat = (mean, sd);
    }

    let mut columns = vec!["intercept".to_string()];
    columns.extend(continuous_names.iter().cloned());
    if config.response.needs_prev_fixated() {
        columns.push("prev_fixated".to_string());
    }
    let dummy_subjects: Vec<&str> = subjects.keys().skip(1).copied().collect();
    columns.extend(dummy_subjects.iter().map(|s| format!("subject:{s}")));

    let ncols = columns.len();
    let mut parts: [(Vec<f64>, Vec<f64>); 2] = [(Vec::new(), Vec::new()), (Vec::new(), Vec::new())];
    for (draft, &response) in drafts.iter().zip(&responses) {
        let slot = match draft.partition {
            Partition::Fit => &mut parts[0],
            Partition::HeldOut => &mut parts[1],
        };
        slot.0.push(1.0);
        for (j, &x) in draft.continuous.iter().enumerate() {
            let (mean, sd) = fit_stats[j];
            slot.0.push(if sd > 0.0 { (x - mean) / sd } else { x - mean });
        }
        if config.response.needs_prev_fixated() {
            slot.0.push(draft.prev_fixated);
        }
        let rank = subjects[draft.row.subject.as_str()];
        for dummy_rank in 1..subjects.len() {
            slot.0.push(f64::from(rank == dummy_rank));
        }
        slot.1.push(response);
    }

    let [fit_part, held_part] = parts;
    let build = |(flat, resp): (Vec<f64>, Vec<f64>)| Design {
        matrix: DMatrix::from_row_slice(resp.len(), ncols, &flat),
        response: DVector::from_vec(resp),
        columns: columns.clone(),
    };
    Ok(DesignPair {
        fit: build(fit_part),
        heldout: build(held_part),
    })
}

/// A fitted linear model.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub columns: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Maximum-likelihood residual variance (`ssr / n`).
    pub sigma2: f64,
    pub n_fit: usize,
    /// Gaussian log likelihood (natural log) on the fit partition.
    pub fit_log_likelihood: f64,
}

/// Fits ordinary least squares with a Gaussian likelihood.
///
/// Errors when the design has no spare degrees of freedom, when columns are
/// (numerically) collinear, or when the residual variance collapses to zero.
pub fn fit_linear_model(design: &Design) -> Result<FitResult> {
    let n = design.matrix.nrows();
    let p = design.matrix.ncols();
    if n <= p {
        return Err(Error::Underdetermined { rows: n, cols: p });
    }
    let qr = design.matrix.clone().qr();
    let r = qr.r();
    let mut collinear = Vec::new();
    for j in 0..p {
        let scale = design.matrix.column(j).norm().max(1.0);
        if r[(j, j)].abs() <= COLLINEARITY_RTOL * scale {
            collinear.push(design.columns[j].clone());
        }
    }
    if !collinear.is_empty() {
        return Err(Error::CollinearColumns(collinear));
    }
    let qty = qr.q().transpose() * &design.response;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Internal("triangular solve failed after rank check".into()))?;
    let residuals = &design.response - &design.matrix * &beta;
    let sigma2 = residuals.norm_squared() / n as f64;
    if sigma2 < VARIANCE_FLOOR {
        return Err(Error::DegenerateFit(sigma2));
    }
    let n_f = n as f64;
    let fit_log_likelihood = -(n_f / 2.0) * (2.0 * std::f64::consts::PI * sigma2).ln() - n_f / 2.0;
    Ok(FitResult {
        columns: design.columns.clone(),
        coefficients: beta.iter().copied().collect(),
        sigma2,
        n_fit: n,
        fit_log_likelihood,
    })
}

impl FitResult {
    fn check_compatible(&self, design: &Design) -> Result<()> {
        if design.columns != self.columns {
            return Err(Error::InvalidConfig(
                "design columns do not match the fitted model".into(),
            ));
        }
        Ok(())
    }

    /// Model predictions for each design row.
    pub fn predict(&self, design: &Design) -> Result<DVector<f64>> {
        self.check_compatible(design)?;
        let beta = DVector::from_vec(self.coefficients.clone());
        Ok(&design.matrix * beta)
    }

    /// Per-row squared prediction errors.
    pub fn squared_errors_on(&self, design: &Design) -> Result<Vec<f64>> {
        let fitted = self.predict(design)?;
        Ok(design
            .response
            .iter()
            .zip(fitted.iter())
            .map(|(y, f)| (y - f).powi(2))
            .collect())
    }

    /// Gaussian log likelihood of `design` under the fitted coefficients and
    /// fit-partition variance.
    pub fn log_likelihood_on(&self, design: &Design) -> Result<f64> {
        if design.nrows() == 0 {
            return Err(Error::EmptyInput("design rows"));
        }
        let sse: f64 = self.squared_errors_on(design)?.iter().sum();
        let m = design.nrows() as f64;
        Ok(-(m / 2.0) * (2.0 * std::f64::consts::PI * self.sigma2).ln()
            - sse / (2.0 * self.sigma2))
    }
}

/// Held-out log-likelihood improvement of the extended model over the
/// baseline. Both held-out designs must score the same observations.
pub fn delta_ll(
    baseline: &FitResult,
    baseline_heldout: &Design,
    extended: &FitResult,
    extended_heldout: &Design,
) -> Result<f64> {
    if baseline_heldout.response != extended_heldout.response {
        return Err(Error::PartitionMismatch);
    }
    Ok(extended.log_likelihood_on(extended_heldout)?
        - baseline.log_likelihood_on(baseline_heldout)?)
}
