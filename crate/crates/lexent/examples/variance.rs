//! Bootstrap coefficient of variation of the Monte Carlo estimators across a
//! grid of sample counts, averaged over every context in the bundled corpus.
//!
//! Run with: cargo run --example variance

use std::path::Path;

use lexent::analysis::{bootstrap_cv, EstimatorKind};
use lexent::corpus::{tokenize_corpus, Corpus};
use lexent::{Lexicon, NGramModel, SamplerConfig};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;
    let corpus = Corpus::from_tsv_path(data.join("corpus.tsv"))?;
    let tokenized = tokenize_corpus(&corpus, &lexicon, "\u{2581}")?;

    // sample_count is overridden by each grid point.
    let ks = [8usize, 32, 128, 512];
    let config = SamplerConfig { sample_count: 512, max_word_tokens: 20, seed: 0 };
    let shannon = bootstrap_cv(
        &model,
        &lexicon,
        &tokenized.contexts,
        EstimatorKind::Shannon,
        &ks,
        200,
        &config,
    )?;
    let renyi = bootstrap_cv(
        &model,
        &lexicon,
        &tokenized.contexts,
        EstimatorKind::Renyi(0.5),
        &ks,
        200,
        &config,
    )?;

    println!("bootstrap CV over {} contexts, 200 resamples", tokenized.contexts.len());
    println!("{:>6} {:>12} {:>12}", "k", "cv_shannon", "cv_renyi");
    for (i, &k) in ks.iter().enumerate() {
        println!("{k:>6} {:>12.6} {:>12.6}", shannon.cv_by_k[i], renyi.cv_by_k[i]);
    }
    Ok(())
}
