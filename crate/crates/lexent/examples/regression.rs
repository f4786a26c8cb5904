//! Held-out reading-time regression: does a word-entropy predictor improve a
//! baseline of length, frequency, surprisal, and position? Compares two
//! entropy variants with a paired sign-flip permutation test.
//!
//! Run with: cargo run --example regression

use std::path::Path;

use lexent::analysis::{
    build_design, delta_ll, fit_linear_model, paired_permutation_test, word_predictors,
    DesignConfig, UnigramModel,
};
use lexent::corpus::{read_rt_tsv, tokenize_corpus, Corpus};
use lexent::estimators::{first_token_shannon, mc_shannon};
use lexent::sampler::sample_set;
use lexent::{LanguageModel, Lexicon, NGramModel, SamplerConfig};

fn main() -> lexent::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let lexicon = Lexicon::from_tsv_path(data.join("lexicon.tsv"), "\u{2581}")?;
    let model = NGramModel::from_tsv_path(data.join("lm.tsv"), &lexicon, 1.0)?;
    let corpus = Corpus::from_tsv_path(data.join("corpus.tsv"))?;
    let tokenized = tokenize_corpus(&corpus, &lexicon, "\u{2581}")?;
    let observations = read_rt_tsv(data.join("rt.tsv"))?;
    let unigram = UnigramModel::from_tsv_path(data.join("unigram.tsv"))?;

    let predictors = word_predictors(&model, &lexicon, &corpus, &tokenized, &unigram)?;
    let config = DesignConfig::default();
    let base = build_design(&corpus, &predictors, &observations, None, &config)?;
    let base_fit = fit_linear_model(&base.fit)?;
    let base_ll = base_fit.log_likelihood_on(&base.heldout)?;
    println!(
        "baseline: {} fit rows, {} held-out rows, held-out LL {:.6}",
        base.fit.nrows(),
        base.heldout.nrows(),
        base_ll
    );

    let sampler = SamplerConfig { sample_count: 512, max_word_tokens: 20, seed: 0 };
    let mc_column: Vec<f64> = tokenized
        .contexts
        .iter()
        .map(|ctx| Ok(mc_shannon(&sample_set(&model, &lexicon, ctx, &sampler)?).bits))
        .collect::<lexent::Result<_>>()?;
    let ft_column: Vec<f64> = tokenized
        .contexts
        .iter()
        .map(|ctx| Ok(first_token_shannon(&model.next_token_distribution(ctx)?)))
        .collect::<lexent::Result<_>>()?;

    let mut heldout_errors = Vec::new();
    for (name, column) in [("mc-shannon", &mc_column), ("ft-shannon", &ft_column)] {
        let extended = build_design(&corpus, &predictors, &observations, Some(column), &config)?;
        let fit = fit_linear_model(&extended.fit)?;
        let delta = delta_ll(&base_fit, &base.heldout, &fit, &extended.heldout)?;
        println!("{name:<11} delta LL on held-out data: {delta:+.6}");
        heldout_errors.push(fit.squared_errors_on(&extended.heldout)?);
    }

    let test = paired_permutation_test(&heldout_errors[0], &heldout_errors[1], 10_000, 0)?;
    println!(
        "permutation test (mc-shannon vs ft-shannon squared errors): observed {:+.6}, p = {:.4}",
        test.observed, test.p_value
    );
    Ok(())
}
