//! Mean word entropy by part-of-speech tag over the bundled tagged corpus.
//!
//! Run with: cargo run --example pos_aggregation

use std::path::Path;

use lexent::analysis::aggregate_by_tag;
use lexent::corpus::{tokenize_corpus, Corpus};
use lexent::estimators::mc_shannon;
use lexent::sampler::sample_set;
use lexent::{Lexicon, NGramModel, SamplerConfig};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;
    let corpus = Corpus::from_tsv_path(data.join("corpus.tsv"))?;
    let tokenized = tokenize_corpus(&corpus, &lexicon, "\u{2581}")?;

    let sampler = SamplerConfig { sample_count: 512, max_word_tokens: 20, seed: 0 };
    let values: Vec<f64> = tokenized
        .contexts
        .iter()
        .map(|ctx| Ok(mc_shannon(&sample_set(&model, &lexicon, ctx, &sampler)?).bits))
        .collect::<lexent::Result<_>>()?;
    let tags: Vec<&str> =
        corpus.words().iter().map(|w| w.pos.as_deref().unwrap_or_default()).collect();

    println!("{:<6} {:>6} {:>14} {:>10}", "tag", "count", "mean_entropy", "sem");
    for summary in aggregate_by_tag(&values, &tags, None)? {
        let sem = summary.sem_bits.map_or_else(String::new, |s| format!("{s:.6}"));
        println!(
            "{:<6} {:>6} {:>14.6} {:>10}",
            summary.tag, summary.count, summary.mean_bits, sem
        );
    }
    Ok(())
}
