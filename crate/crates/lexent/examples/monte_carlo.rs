//! Monte Carlo word-entropy estimates with standard errors, shown against
//! the exact enumeration value as the sample count grows.
//!
//! Run with: cargo run --example monte_carlo

use std::path::Path;

use lexent::estimators::{enumerate_words, exact_renyi, exact_shannon, mc_renyi, mc_shannon, RenyiOrder};
use lexent::sampler::sample_set;
use lexent::{Context, Lexicon, NGramModel, SamplerConfig};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;

    let context = Context::new(vec![lexicon.id_of("\u{2581}the").unwrap()]);
    let half = RenyiOrder::new(0.5)?;
    let enumeration = enumerate_words(&model, &lexicon, &context, 20)?;
    let exact_s = exact_shannon(&enumeration);
    let exact_r = exact_renyi(&enumeration, half);

    println!("exact: shannon {:.4}, renyi(1/2) {:.4}", exact_s.bits, exact_r.bits);
    println!("{:>6} {:>18} {:>18}", "k", "shannon (stderr)", "renyi (stderr)");
    for k in [16usize, 64, 256, 1024, 4096] {
        let config = SamplerConfig { sample_count: k, max_word_tokens: 20, seed: 1 };
        let set = sample_set(&model, &lexicon, &context, &config)?;
        let s = mc_shannon(&set);
        let r = mc_renyi(&set, half)?;
        println!(
            "{k:>6} {:>9.4} ({:.4}) {:>9.4} ({:.4})",
            s.bits,
            s.stderr_bits.unwrap_or(f64::NAN),
            r.bits,
            r.stderr_bits.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
