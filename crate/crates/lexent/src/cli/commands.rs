//! Subcommand implementations.

use rayon::prelude::*;

use crate::analysis::{
    aggregate_by_tag, bootstrap_cv, build_design, delta_ll, fit_linear_model,
    paired_permutation_test, word_predictors, DesignConfig, EstimatorKind, ResponseKind,
};
use crate::cli::args::{
    AggregateArgs, Cli, Command, EntropyVariant, EstimateArgs, ModelArgs, OracleArgs, RegressArgs,
    ResponseArg, VarianceArgs,
};
use crate::cli::output::{fmt, fmt_opt, fmt_sci, write_output, Table};
use crate::corpus::{read_rt_tsv, tokenize_corpus, Corpus, TokenizedCorpus};
use crate::error::{Error, Result};
use crate::estimators::{
    enumerate_words, exact_renyi_with_tolerance, first_token_renyi, first_token_shannon,
    mc_renyi, mc_renyi_with_bootstrap, mc_shannon, RenyiOrder,
};
use crate::lexicon::Lexicon;
use crate::lm::{Context, LanguageModel, NGramModel};
use crate::sampler::{sample_set, score_word, SamplerConfig};

/// Slack applied to the lower-bound verdicts in the oracle report.
const BOUND_SLACK: f64 = 1e-9;

pub(crate) fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => estimate(&args),
        Command::Oracle(args) => oracle(&args),
        Command::Variance(args) => variance(&args),
        Command::Regress(args) => regress(&args),
        Command::Aggregate(args) => aggregate(&args),
    }
}

fn init_threads(threads: usize) -> Result<()> {
    if threads == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn load_model(args: &ModelArgs) -> Result<(Lexicon, NGramModel)> {
    let lexicon = Lexicon::from_tsv_path(&args.lexicon, &args.marker)?;
    let model = NGramModel::from_tsv_path(&args.lm, &lexicon, args.lambda)?;
    Ok((lexicon, model))
}

fn load_corpus(
    lexicon: &Lexicon,
    marker: &str,
    path: &std::path::Path,
) -> Result<(Corpus, TokenizedCorpus)> {
    let corpus = Corpus::from_tsv_path(path)?;
    let tokenized = tokenize_corpus(&corpus, lexicon, marker)?;
    Ok((corpus, tokenized))
}

/// One entropy value per context under the selected estimator.
fn entropy_column(
    model: &NGramModel,
    lexicon: &Lexicon,
    contexts: &[Context],
    variant: EntropyVariant,
    order: RenyiOrder,
    config: &SamplerConfig,
) -> Result<Vec<f64>> {
    match variant {
        EntropyVariant::FtShannon | EntropyVariant::FtRenyi => contexts
            .iter()
            .map(|ctx| {
                let dist = model.next_token_distribution(ctx)?;
                Ok(if variant == EntropyVariant::FtShannon {
                    first_token_shannon(&dist)
                } else {
                    first_token_renyi(&dist, order)
                })
            })
            .collect(),
        EntropyVariant::McShannon => contexts
            .par_iter()
            .map(|ctx| Ok(mc_shannon(&sample_set(model, lexicon, ctx, config)?).bits))
            .collect(),
        EntropyVariant::McRenyi => contexts
            .par_iter()
            .map(|ctx| {
                let set = sample_set(model, lexicon, ctx, config)?;
                Ok(mc_renyi_with_bootstrap(&set, order, 0)?.bits)
            })
            .collect(),
    }
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    init_threads(args.sampling.threads)?;
    let order = RenyiOrder::new(args.sampling.alpha)?;
    let (lexicon, model) = load_model(&args.model)?;
    let corpus = Corpus::from_tsv_path(&args.corpus)?;
    let tokenized = tokenize_corpus(&corpus, &lexicon, &args.model.marker)?;
    let sampler_cfg = args.sampling.sampler_config();

    let rows: Vec<Vec<String>> = (0..corpus.len())
        .into_par_iter()
        .map(|i| {
            let word = &corpus.words()[i];
            let ctx = &tokenized.contexts[i];
            let dist = model.next_token_distribution(ctx)?;
            let set = sample_set(&model, &lexicon, ctx, &sampler_cfg)?;
            let mc_s = mc_shannon(&set);
            let mc_r = mc_renyi(&set, order)?;
            let surprisal = score_word(&model, &lexicon, ctx, &tokenized.tokens[i])?;
            Ok(vec![
                word.doc_id.clone(),
                word.word_index.to_string(),
                word.surface.clone(),
                fmt(first_token_shannon(&dist)),
                fmt(first_token_renyi(&dist, order)),
                fmt(mc_s.bits),
                fmt_opt(mc_s.stderr_bits),
                fmt(mc_r.bits),
                fmt_opt(mc_r.stderr_bits),
                fmt(surprisal),
                mc_s.truncated_count.to_string(),
            ])
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        &args.sampling.run_config(),
        &[
            "doc_id",
            "word_index",
            "word",
            "ft_shannon",
            "ft_renyi",
            "mc_shannon",
            "mc_shannon_stderr",
            "mc_renyi",
            "mc_renyi_stderr",
            "surprisal",
            "truncated_count",
        ],
    );
    for row in &rows {
        table.row(row);
    }
    write_output(args.out.as_deref(), &table.finish())
}

fn oracle(args: &OracleArgs) -> Result<()> {
    init_threads(args.sampling.threads)?;
    let order = RenyiOrder::new(args.sampling.alpha)?;
    let (lexicon, model) = load_model(&args.model)?;
    let sampler_cfg = args.sampling.sampler_config();

    // (doc_id, word_index, word, context); a lone empty context without a
    // corpus.
    let sites: Vec<(String, String, String, Context)> = match &args.corpus {
        Some(path) => {
            let (corpus, tokenized) = load_corpus(&lexicon, &args.model.marker, path)?;
            corpus
                .words()
                .iter()
                .zip(tokenized.contexts)
                .map(|(w, ctx)| {
                    (w.doc_id.clone(), w.word_index.to_string(), w.surface.clone(), ctx)
                })
                .collect()
        }
        None => vec![("-".into(), "-".into(), "-".into(), Context::empty())],
    };

    let rows: Vec<Vec<String>> = sites
        .into_par_iter()
        .map(|(doc_id, word_index, word, ctx)| {
            let enumeration = enumerate_words(&model, &lexicon, &ctx, args.depth)?;
            let exact_s =
                exact_renyi_with_tolerance(&enumeration, RenyiOrder::SHANNON, args.residual_tol);
            let exact_r = exact_renyi_with_tolerance(&enumeration, order, args.residual_tol);
            let dist = model.next_token_distribution(&ctx)?;
            let ft_s = first_token_shannon(&dist);
            let ft_r = first_token_renyi(&dist, order);
            let set = sample_set(&model, &lexicon, &ctx, &sampler_cfg)?;
            let mc_s = mc_shannon(&set);
            // Limit orders have no Monte Carlo path; leave the field empty.
            let mc_r = match order {
                RenyiOrder::Order(_) => fmt(mc_renyi(&set, order)?.bits),
                RenyiOrder::SupportSize | RenyiOrder::MinSurprisal => String::new(),
            };
            let verdict = |ft: f64, exact: f64| {
                if ft <= exact + BOUND_SLACK { "PASS" } else { "FAIL" }.to_string()
            };
            Ok(vec![
                doc_id,
                word_index,
                word,
                fmt(exact_s.bits),
                fmt(exact_r.bits),
                fmt(ft_s),
                fmt(ft_r),
                fmt(mc_s.bits),
                mc_r,
                fmt_sci(enumeration.residual_mass),
                u8::from(exact_s.approximate).to_string(),
                verdict(ft_s, exact_s.bits),
                verdict(ft_r, exact_r.bits),
            ])
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        &args.sampling.run_config(),
        &[
            "doc_id",
            "word_index",
            "word",
            "exact_shannon",
            "exact_renyi",
            "ft_shannon",
            "ft_renyi",
            "mc_shannon",
            "mc_renyi",
            "residual_mass",
            "approximate",
            "shannon_bound",
            "renyi_bound",
        ],
    );
    for row in &rows {
        table.row(row);
    }
    write_output(args.out.as_deref(), &table.finish())
}

fn variance(args: &VarianceArgs) -> Result<()> {
    init_threads(args.sampling.threads)?;
    let (lexicon, model) = load_model(&args.model)?;
    let (_, tokenized) = load_corpus(&lexicon, &args.model.marker, &args.corpus)?;
    let sampler_cfg = args.sampling.sampler_config();

    let shannon = bootstrap_cv(
        &model,
        &lexicon,
        &tokenized.contexts,
        EstimatorKind::Shannon,
        &args.ks,
        args.n_boot,
        &sampler_cfg,
    )?;
    let renyi = bootstrap_cv(
        &model,
        &lexicon,
        &tokenized.contexts,
        EstimatorKind::Renyi(args.sampling.alpha),
        &args.ks,
        args.n_boot,
        &sampler_cfg,
    )?;

    let mut table =
        Table::new(&args.sampling.run_config(), &["k", "cv_shannon", "cv_renyi"]);
    for (i, &k) in args.ks.iter().enumerate() {
        table.row(&[k.to_string(), fmt(shannon.cv_by_k[i]), fmt(renyi.cv_by_k[i])]);
    }
    write_output(args.out.as_deref(), &table.finish())
}

fn response_kind(arg: ResponseArg) -> ResponseKind {
    match arg {
        ResponseArg::Spr => ResponseKind::Spr,
        ResponseArg::Fp => ResponseKind::FirstPass,
        ResponseArg::Gp => ResponseKind::GoPast,
    }
}

fn regress(args: &RegressArgs) -> Result<()> {
    init_threads(args.sampling.threads)?;
    if args.variants.is_empty() || args.variants.len() > 2 {
        return Err(Error::InvalidConfig(format!(
            "pass --variant once or twice, got {}",
            args.variants.len()
        )));
    }
    let order = RenyiOrder::new(args.sampling.alpha)?;
    let (lexicon, model) = load_model(&args.model)?;
    let (corpus, tokenized) = load_corpus(&lexicon, &args.model.marker, &args.corpus)?;
    let observations = read_rt_tsv(&args.rt)?;
    let unigram = crate::analysis::UnigramModel::from_tsv_path(&args.unigram)?;
    let sampler_cfg = args.sampling.sampler_config();

    let predictors = word_predictors(&model, &lexicon, &corpus, &tokenized, &unigram)?;
    let design_cfg = DesignConfig {
        response: response_kind(args.response),
        log_rt: args.log_rt,
        heldout_frac: args.heldout_frac,
        split_seed: args.sampling.seed,
    };
    let base = build_design(&corpus, &predictors, &observations, None, &design_cfg)?;
    let base_fit = fit_linear_model(&base.fit)?;
    let base_ll = base_fit.log_likelihood_on(&base.heldout)?;

    let mut table = Table::new(
        &args.sampling.run_config(),
        &["variant", "n_fit", "n_heldout", "ll_baseline", "ll_extended", "delta_ll"],
    );
    let mut heldout_sq_errors = Vec::new();
    for &variant in &args.variants {
        let column =
            entropy_column(&model, &lexicon, &tokenized.contexts, variant, order, &sampler_cfg)?;
        let extended = build_design(&corpus, &predictors, &observations, Some(&column), &design_cfg)?;
        let fit = fit_linear_model(&extended.fit)?;
        let ll = fit.log_likelihood_on(&extended.heldout)?;
        let delta = delta_ll(&base_fit, &base.heldout, &fit, &extended.heldout)?;
        table.row(&[
            variant.to_string(),
            extended.fit.nrows().to_string(),
            extended.heldout.nrows().to_string(),
            fmt(base_ll),
            fmt(ll),
            fmt(delta),
        ]);
        heldout_sq_errors.push(fit.squared_errors_on(&extended.heldout)?);
    }

    if let [errors_a, errors_b] = heldout_sq_errors.as_slice() {
        let test =
            paired_permutation_test(errors_a, errors_b, args.n_perm, args.sampling.seed)?;
        table.comment(&format!(
            "permutation a={} b={} observed={} p={} n_perm={}",
            args.variants[0],
            args.variants[1],
            fmt(test.observed),
            fmt(test.p_value),
            test.n_perm
        ));
    }
    write_output(args.out.as_deref(), &table.finish())
}

fn aggregate(args: &AggregateArgs) -> Result<()> {
    init_threads(args.sampling.threads)?;
    let order = RenyiOrder::new(args.sampling.alpha)?;
    let (lexicon, model) = load_model(&args.model)?;
    let (corpus, tokenized) = load_corpus(&lexicon, &args.model.marker, &args.corpus)?;
    if !corpus.fully_tagged() {
        return Err(Error::MissingColumn {
            path: args.corpus.display().to_string(),
            column: "pos".into(),
        });
    }
    let sampler_cfg = args.sampling.sampler_config();
    let values = entropy_column(
        &model,
        &lexicon,
        &tokenized.contexts,
        args.variant,
        order,
        &sampler_cfg,
    )?;
    let tags: Vec<&str> =
        corpus.words().iter().map(|w| w.pos.as_deref().unwrap_or_default()).collect();
    let top_k = if args.top_k == 0 { None } else { Some(args.top_k) };
    let summaries = aggregate_by_tag(&values, &tags, top_k)?;

    let mut table =
        Table::new(&args.sampling.run_config(), &["tag", "count", "mean_entropy", "sem"]);
    for s in &summaries {
        table.row(&[s.tag.clone(), s.count.to_string(), fmt(s.mean_bits), fmt_opt(s.sem_bits)]);
    }
    write_output(args.out.as_deref(), &table.finish())
}
