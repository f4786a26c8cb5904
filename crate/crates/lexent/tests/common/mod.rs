//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use lexent::corpus::{Corpus, CorpusWord, RtRow};
use lexent::analysis::WordPredictors;
use lexent::{Lexicon, NGramModel, TokenDistribution};

pub const MARKER: &str = "\u{2581}";

/// The reference model: tokens `▁a` (p = 0.5), `▁b` (p = 0.25) at the
/// boundary and internal `x` (p = 0.25), context-free.
///
/// Its word distribution has closed forms: each word is a boundary token
/// followed by a geometric number of `x`, so word entropy is 2 bits and the
/// Rényi order-1/2 entropy is 2·log2(1 + sqrt(2)).
pub fn toy_a() -> (Lexicon, NGramModel) {
    let lexicon =
        Lexicon::from_surfaces([format!("{MARKER}a"), format!("{MARKER}b"), "x".to_string()], MARKER)
            .unwrap();
    let unconditional = TokenDistribution::new(vec![0.5, 0.25, 0.25]).unwrap();
    let model = NGramModel::new(unconditional, HashMap::new(), 1.0).unwrap();
    (lexicon, model)
}

/// A random context-free model: 1..=4 boundary tokens and 0..=2 internal
/// tokens with normalized random probabilities.
pub fn random_model(seed: u64) -> (Lexicon, NGramModel) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n_boundary = rng.random_range(1..=4usize);
    let n_internal = rng.random_range(0..=2usize);
    let mut surfaces = Vec::new();
    for i in 0..n_boundary {
        surfaces.push(format!("{MARKER}w{i}"));
    }
    for i in 0..n_internal {
        surfaces.push(format!("i{i}"));
    }
    let lexicon = Lexicon::from_surfaces(surfaces, MARKER).unwrap();
    let mut probs: Vec<f64> = (0..n_boundary + n_internal)
        .map(|_| rng.random::<f64>() + 1e-3)
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    // Cap the internal mass at 0.2. This keeps depth-20 enumeration well
    // inside the node guard (n_internal <= 2), makes the residual
    // negligible (0.2^21), and keeps the order-1/2 power sum convergent:
    // sqrt(n_internal * internal_mass) < 1.
    let boundary_mass: f64 = probs[..n_boundary].iter().sum();
    if boundary_mass < 0.8 {
        let scale_b = 0.8 / boundary_mass;
        let scale_i = 0.2 / (1.0 - boundary_mass);
        for (i, p) in probs.iter_mut().enumerate() {
            *p *= if i < n_boundary { scale_b } else { scale_i };
        }
    }
    let unconditional = TokenDistribution::new(probs).unwrap();
    let model = NGramModel::new(unconditional, HashMap::new(), 1.0).unwrap();
    (lexicon, model)
}

/// Inputs for one synthetic regression run.
pub struct Sim {
    pub corpus: Corpus,
    pub predictors: WordPredictors,
    pub observations: Vec<RtRow>,
    /// Per-word entropy column that (optionally) enters the response.
    pub entropy: Vec<f64>,
}

/// Parameters for [`synthetic_sim`].
pub struct SimSpec {
    pub n_docs: usize,
    pub words_per_doc: usize,
    pub n_subjects: usize,
    /// Weight of the entropy column in the generated response.
    pub beta_entropy: f64,
    /// Half-width of the uniform response noise, in milliseconds.
    pub noise: f64,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            n_docs: 3,
            words_per_doc: 40,
            n_subjects: 3,
            beta_entropy: 0.0,
            noise: 30.0,
        }
    }
}

/// Generates a corpus, baseline predictors, an entropy column, and reading
/// times that follow a known linear model plus uniform noise.
pub fn synthetic_sim(seed: u64, spec: &SimSpec) -> Sim {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut words = Vec::new();
    let mut predictors = WordPredictors {
        length: Vec::new(),
        word_index: Vec::new(),
        unigram_surprisal: Vec::new(),
        lm_surprisal: Vec::new(),
        prev_lm_surprisal: Vec::new(),
    };
    let mut entropy = Vec::new();
    for d in 0..spec.n_docs {
        for i in 0..spec.words_per_doc {
            let length = rng.random_range(2..=9usize);
            words.push(CorpusWord {
                doc_id: format!("d{d}"),
                word_index: i,
                surface: "w".repeat(length),
                pos: Some(if i % 2 == 0 { "NN" } else { "VB" }.to_string()),
            });
            predictors.length.push(length as f64);
            predictors.word_index.push(i as f64);
            predictors.unigram_surprisal.push(rng.random::<f64>() * 10.0 + 2.0);
            predictors.lm_surprisal.push(rng.random::<f64>() * 9.0 + 1.0);
            let prev = if i == 0 {
                f64::NAN
            } else {
                predictors.lm_surprisal[predictors.lm_surprisal.len() - 2]
            };
            predictors.prev_lm_surprisal.push(prev);
            entropy.push(rng.random::<f64>() * 6.0);
        }
    }
    let corpus = Corpus::from_words(words).unwrap();

    let mut observations = Vec::new();
    for s in 0..spec.n_subjects {
        let subject_shift = s as f64 * 15.0;
        for (w, word) in corpus.words().iter().enumerate() {
            let prev = if predictors.prev_lm_surprisal[w].is_nan() {
                0.0
            } else {
                predictors.prev_lm_surprisal[w]
            };
            let rt_ms = 180.0
                + 4.0 * predictors.length[w]
                + 2.0 * predictors.unigram_surprisal[w]
                + 3.0 * predictors.lm_surprisal[w]
                + 1.5 * prev
                - 0.2 * predictors.word_index[w]
                + spec.beta_entropy * entropy[w]
                + subject_shift
                + (rng.random::<f64>() - 0.5) * 2.0 * spec.noise;
            observations.push(RtRow {
                doc_id: word.doc_id.clone(),
                word_index: word.word_index,
                subject: format!("s{s}"),
                rt_ms,
                prev_fixated: Some(rng.random::<f64>() < 0.8),
            });
        }
    }
    Sim { corpus, predictors, observations, entropy }
}

/// Writes the toy-model fixture files into `dir` and returns their paths as
/// (lexicon, lm, corpus).
pub fn write_toy_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let lexicon = dir.join("lexicon.tsv");
    let lm = dir.join("lm.tsv");
    let corpus = dir.join("corpus.tsv");
    std::fs::write(
        &lexicon,
        format!("id\tsurface\tboundary\n0\t{MARKER}a\t1\n1\t{MARKER}b\t1\n2\tx\t0\n"),
    )
    .unwrap();
    std::fs::write(&lm, "context\ttoken_id\tprob\n\t0\t0.5\n\t1\t0.25\n\t2\t0.25\n").unwrap();
    std::fs::write(
        &corpus,
        "doc_id\tword_index\tword\tpos\nd1\t0\ta\tNN\nd1\t1\tax\tVB\nd1\t2\tb\tNN\n",
    )
    .unwrap();
    (lexicon, lm, corpus)
}
