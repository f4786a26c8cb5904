//! Draws whole words from a context: boundary-renormalized first token,
//! then internal tokens until the end-of-word event, surprisal accumulated
//! along the way.
//!
//! Run with: cargo run --example word_sampling

use std::path::Path;

use lexent::sampler::sample_set;
use lexent::{Context, Lexicon, NGramModel, SamplerConfig};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;

    // Sample continuations of "the".
    let context = Context::new(vec![lexicon.id_of("\u{2581}the").unwrap()]);
    let config = SamplerConfig { sample_count: 12, max_word_tokens: 20, seed: 7 };
    let set = sample_set(&model, &lexicon, &context, &config)?;

    println!("{:<18} {:>10}  {}", "tokens", "surprisal", "truncated");
    for sample in set.samples() {
        let surfaces: Vec<&str> =
            sample.token_ids.iter().map(|&id| lexicon.surface(id).unwrap()).collect();
        println!(
            "{:<18} {:>10.4}  {}",
            surfaces.join("+"),
            sample.surprisal_bits,
            sample.truncated
        );
    }
    println!("truncated in set: {}", set.truncated_count());
    Ok(())
}
