//! First-token entropy over every position of the bundled corpus: the cheap
//! approximation that needs one next-token distribution and no sampling.
//!
//! Run with: cargo run --example first_token

use std::path::Path;

use lexent::corpus::{tokenize_corpus, Corpus};
use lexent::estimators::{first_token_renyi, first_token_shannon, RenyiOrder};
use lexent::{LanguageModel, Lexicon, NGramModel};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;
    let corpus = Corpus::from_tsv_path(data.join("corpus.tsv"))?;
    let tokenized = tokenize_corpus(&corpus, &lexicon, "\u{2581}")?;

    let half = RenyiOrder::new(0.5)?;
    println!("{:<10} {:>10} {:>12}", "word", "shannon", "renyi(1/2)");
    for (word, context) in corpus.words().iter().zip(&tokenized.contexts) {
        let dist = model.next_token_distribution(context)?;
        println!(
            "{:<10} {:>10.4} {:>12.4}",
            word.surface,
            first_token_shannon(&dist),
            first_token_renyi(&dist, half)
        );
    }
    Ok(())
}
