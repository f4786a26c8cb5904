//! Add-one smoothed unigram surprisal, the frequency baseline predictor.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tsv;

/// Word frequency table with add-one smoothing.
///
/// The surprisal of a word with count `c` is `-log2((c + 1) / (N + V + 1))`
/// where `N` is the total token count and `V` the number of types; unseen
/// words use `c = 0`.
#[derive(Debug, Clone)]
pub struct UnigramModel {
    counts: HashMap<String, u64>,
    total: u64,
}

impl UnigramModel {
    pub fn from_counts<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut counts = HashMap::new();
        let mut total = 0u64;
        for (word, count) in pairs {
            let word = word.into();
            if counts.insert(word.clone(), count).is_some() {
                return Err(Error::InvalidConfig(format!(
                    "duplicate unigram entry {word:?}"
                )));
            }
            total += count;
        }
        if counts.is_empty() {
            return Err(Error::EmptyInput("unigram counts"));
        }
        Ok(Self { counts, total })
    }

    /// Reads counts from TSV with header `word\tcount`.
    pub fn from_tsv_path(path: impl AsRef<Path>) -> Result<Self> {
        let (label, rows, _) = tsv::read_table(path.as_ref(), &["word", "count"], &[])?;
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut pairs = Vec::with_capacity(rows.len());
        for row in rows {
            tsv::check_width(&label, &row, 2)?;
            let word = row.fields[0].clone();
            if word.is_empty() {
                return Err(tsv::err(&label, row.line, "empty word"));
            }
            let count: u64 = tsv::parse_field(&label, row.line, "count", &row.fields[1])?;
            if let Some(prev) = seen.insert(word.clone(), row.line) {
                return Err(tsv::err(
                    &label,
                    row.line,
                    &format!("duplicate word {word:?}, first seen on line {prev}"),
                ));
            }
            pairs.push((word, count));
        }
        Self::from_counts(pairs)
    }

    /// Smoothed surprisal in bits.
    #[must_use]
    pub fn surprisal(&self, word: &str) -> f64 {
        let c = self.counts.get(word).copied().unwrap_or(0);
        let denom = (self.total + self.types() as u64 + 1) as f64;
        (denom / (c + 1) as f64).log2()
    }

    /// Number of distinct words.
    #[must_use]
    pub fn types(&self) -> usize {
        self.counts.len()
    }

    /// Total token count.
    #[must_use]
    pub fn total(&self) -> u64 {
        self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn surprisal_matches_hand_values() {
        let model = UnigramModel::from_counts([("the", 3u64), ("cat", 1)]).unwrap();
        // N = 4, V = 2, denominator 7.
        assert_abs_diff_eq!(model.surprisal("cat"), (7.0f64 / 2.0).log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(model.surprisal("cat"), 1.807355, epsilon = 1e-6);
        assert_abs_diff_eq!(model.surprisal("dog"), 7.0f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(model.surprisal("dog"), 2.807355, epsilon = 1e-6);
        assert!(model.surprisal("the") < model.surprisal("cat"));
    }

    #[test]
    fn unseen_words_are_never_infinite() {
        let model = UnigramModel::from_counts([("a", 1u64)]).unwrap();
        assert!(model.surprisal("zzz").is_finite());
    }

    #[test]
    fn empty_and_duplicate_inputs_error() {
        assert!(matches!(
            UnigramModel::from_counts(Vec::<(String, u64)>::new()),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            UnigramModel::from_counts([("a", 1u64), ("a", 2)]),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn tsv_loader_reads_counts() {
        use std::io::Write;
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, "word\tcount\nthe\t3\ncat\t1\n").unwrap();
        let model = UnigramModel::from_tsv_path(file.path()).unwrap();
        assert_eq!(model.types(), 2);
        assert_eq!(model.total(), 4);
    }
}
