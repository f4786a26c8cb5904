//! Exact word entropy by depth-bounded enumeration, compared with the
//! first-token approximation. Prints the most probable words, the residual
//! probability mass beyond the depth cap, and checks the lower bound.
//!
//! Run with: cargo run --example exact_oracle

use std::path::Path;

use lexent::estimators::{
    enumerate_words, exact_renyi, exact_shannon, first_token_renyi, first_token_shannon,
    RenyiOrder,
};
use lexent::{Context, LanguageModel, Lexicon, NGramModel};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;

    let context = Context::new(vec![lexicon.id_of("\u{2581}dog").unwrap()]);
    let enumeration = enumerate_words(&model, &lexicon, &context, 20)?;

    let mut top: Vec<_> = enumeration.words.iter().collect();
    top.sort_by(|a, b| b.probability.total_cmp(&a.probability));
    println!("most probable next words after \"dog\":");
    for word in top.iter().take(5) {
        let surfaces: Vec<&str> =
            word.token_ids.iter().map(|&id| lexicon.surface(id).unwrap()).collect();
        println!("  p={:.6}  {}", word.probability, surfaces.join("+"));
    }
    println!(
        "{} words enumerated to depth {}, residual mass {:.3e}",
        enumeration.words.len(),
        enumeration.depth,
        enumeration.residual_mass
    );

    let half = RenyiOrder::new(0.5)?;
    let exact_s = exact_shannon(&enumeration);
    let exact_r = exact_renyi(&enumeration, half);
    let dist = model.next_token_distribution(&context)?;
    let ft_s = first_token_shannon(&dist);
    let ft_r = first_token_renyi(&dist, half);

    println!("exact shannon      {:.6} bits (approximate: {})", exact_s.bits, exact_s.approximate);
    println!("exact renyi(1/2)   {:.6} bits", exact_r.bits);
    println!("ft shannon         {:.6} bits", ft_s);
    println!("ft renyi(1/2)      {:.6} bits", ft_r);
    assert!(ft_s <= exact_s.bits + 1e-9, "first-token entropy must not exceed the exact value");
    println!("lower bound holds: ft <= exact");
    Ok(())
}
