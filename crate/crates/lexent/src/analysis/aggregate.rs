//! Aggregation of per-word entropy values by tag.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::estimators::sample_sd;

/// Summary of one tag group.
#[derive(Debug, Clone, PartialEq)]
pub struct TagSummary {
    pub tag: String,
    pub count: usize,
    pub mean_bits: f64,
    /// Standard error of the mean; absent for single-member groups.
    pub sem_bits: Option<f64>,
}

/// Groups values by tag and summarizes each group with mean and SEM.
///
/// Groups come back ordered by descending count, ties broken by tag;
/// `top_k` keeps only the most frequent groups.
pub fn aggregate_by_tag<S: AsRef<str>>(
    values: &[f64],
    tags: &[S],
    top_k: Option<usize>,
) -> Result<Vec<TagSummary>> {
    if values.len() != tags.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: tags.len(),
        });
    }
    if values.is_empty() {
        return Err(Error::EmptyInput("tagged values"));
    }
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (value, tag) in values.iter().zip(tags) {
        groups.entry(tag.as_ref()).or_default().push(*value);
    }
    let mut summaries: Vec<TagSummary> = groups
        .into_iter()
        .map(|(tag, vs)| {
            let count = vs.len();
            let mean_bits = vs.iter().sum::<f64>() / count as f64;
            let sem_bits = if count >= 2 {
                Some(sample_sd(&vs) / (count as f64).sqrt())
            } else {
                None
            };
            TagSummary {
                tag: tag.to_string(),
                count,
                mean_bits,
                sem_bits,
            }
        })
        .collect();
    summaries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.tag.cmp(&b.tag)));
    if let Some(k) = top_k {
        summaries.truncate(k);
    }
    Ok(summaries)
}
