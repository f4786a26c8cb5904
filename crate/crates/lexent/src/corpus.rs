//! Word-level corpora, reading-time records, and word-to-token segmentation.
//!
//! A corpus is a flat list of words keyed by `(doc_id, word_index)`, each
//! optionally tagged. Words are stored document by document (documents in
//! first-appearance order, words ordered by index), which gives every word a
//! stable flat position that the analysis pipeline uses to align predictor
//! vectors.
//!
//! Segmentation maps a word's surface to token ids by greedy longest match
//! against the lexicon: the boundary marker is prepended, the first (longest)
//! match must be a boundary token, and the remainder is consumed by internal
//! tokens. There is no backtracking; a word the greedy walk cannot cover is
//! an error.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, TokenId};
use crate::lm::Context;
use crate::tsv;

/// One corpus word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusWord {
    pub doc_id: String,
    pub word_index: usize,
    pub surface: String,
    pub pos: Option<String>,
}

/// An ordered corpus of words grouped into documents.
#[derive(Debug, Clone)]
pub struct Corpus {
    words: Vec<CorpusWord>,
    doc_initial: Vec<bool>,
}

impl Corpus {
    /// Orders words into documents and validates position uniqueness.
    /// Documents keep their first-appearance order; within a document,
    /// words are sorted by `word_index`.
    pub fn from_words(words: Vec<CorpusWord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for w in &words {
            if w.surface.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "empty word surface at {}:{}",
                    w.doc_id, w.word_index
                )));
            }
            if !seen.insert((w.doc_id.clone(), w.word_index)) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate word position {}:{}",
                    w.doc_id, w.word_index
                )));
            }
        }
        let mut doc_order: Vec<String> = Vec::new();
        let mut doc_rank: HashMap<String, usize> = HashMap::new();
        for w in &words {
            if !doc_rank.contains_key(&w.doc_id) {
                doc_rank.insert(w.doc_id.clone(), doc_order.len());
                doc_order.push(w.doc_id.clone());
            }
        }
        let mut words = words;
        words.sort_by_key(|w| (doc_rank[&w.doc_id], w.word_index));
        let doc_initial = words
            .iter()
            .enumerate()
            .map(|(i, w)| i == 0 || words[i - 1].doc_id != w.doc_id)
            .collect();
        Ok(Self { words, doc_initial })
    }

    /// Reads a corpus from TSV with header `doc_id\tword_index\tword` and an
    /// optional trailing `pos` column.
    pub fn from_tsv_path(path: impl AsRef<Path>) -> Result<Self> {
        let (label, rows, ncols) =
            tsv::read_table(path.as_ref(), &["doc_id", "word_index", "word"], &["pos"])?;
        let mut seen: HashMap<(String, usize), usize> = HashMap::new();
        let mut words = Vec::with_capacity(rows.len());
        for row in rows {
            tsv::check_width(&label, &row, ncols)?;
            let doc_id = row.fields[0].clone();
            let word_index: usize =
                tsv::parse_field(&label, row.line, "word_index", &row.fields[1])?;
            let surface = row.fields[2].clone();
            if surface.is_empty() {
                return Err(tsv::err(&label, row.line, "empty word"));
            }
            if let Some(prev) = seen.insert((doc_id.clone(), word_index), row.line) {
                return Err(tsv::err(
                    &label,
                    row.line,
                    &format!("duplicate position {doc_id}:{word_index}, first seen on line {prev}"),
                ));
            }
            let pos = if ncols == 4 {
                Some(row.fields[3].clone()).filter(|p| !p.is_empty())
            } else {
                None
            };
            words.push(CorpusWord {
                doc_id,
                word_index,
                surface,
                pos,
            });
        }
        Self::from_words(words)
    }

    /// Words in flat order: documents in first-appearance order, words by
    /// index within each document.
    #[must_use]
    pub fn words(&self) -> &[CorpusWord] {
        &self.words
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.words.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether the word at flat position `i` opens its document.
    #[must_use]
    pub fn is_doc_initial(&self, i: usize) -> bool {
        self.doc_initial[i]
    }

    /// Whether every word carries a tag.
    #[must_use]
    pub fn fully_tagged(&self) -> bool {
        !self.words.is_empty() && self.words.iter().all(|w| w.pos.is_some())
    }

    /// Map from `(doc_id, word_index)` to flat position.
    #[must_use]
    pub fn position_map(&self) -> HashMap<(&str, usize), usize> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| ((w.doc_id.as_str(), w.word_index), i))
            .collect()
    }
}

/// Segments a word surface into token ids by greedy longest match.
///
/// The boundary `marker` is prepended so the first match lands on a
/// word-initial surface; it must resolve to a boundary token, and every
/// later match must be an internal token.
pub fn segment_word(lexicon: &Lexicon, word: &str, marker: &str) -> Result<Vec<TokenId>> {
    if word.is_empty() {
        return Err(Error::MalformedWord("empty word".into()));
    }
    let target = format!("{marker}{word}");
    let mut tokens = Vec::new();
    let mut rest = target.as_str();
    while !rest.is_empty() {
        let initial = tokens.is_empty();
        let pool = if initial {
            lexicon.boundary_ids()
        } else {
            lexicon.internal_ids()
        };
        let mut best: Option<(TokenId, usize)> = None;
        for &id in pool {
            let surface = lexicon.surface(id)?;
            if rest.starts_with(surface) && best.is_none_or(|(_, len)| surface.len() > len) {
                best = Some((id, surface.len()));
            }
        }
        match best {
            Some((id, len)) => {
                tokens.push(id);
                rest = &rest[len..];
            }
            None => {
                return Err(Error::MalformedWord(format!(
                    "cannot segment {word:?}: no {} token matches {rest:?}",
                    if initial { "boundary" } else { "internal" }
                )))
            }
        }
    }
    Ok(tokens)
}

/// A corpus with words segmented and per-word model contexts built.
#[derive(Debug, Clone)]
pub struct TokenizedCorpus {
    /// Token ids of each word, aligned with the corpus flat order.
    pub tokens: Vec<Vec<TokenId>>,
    /// Context preceding each word: all earlier tokens of the same document.
    pub contexts: Vec<Context>,
}

/// Segments every corpus word and assembles its preceding context.
/// Contexts restart at document boundaries.
pub fn tokenize_corpus(
    corpus: &Corpus,
    lexicon: &Lexicon,
    marker: &str,
) -> Result<TokenizedCorpus> {
    let mut tokens = Vec::with_capacity(corpus.len());
    let mut contexts = Vec::with_capacity(corpus.len());
    let mut running: Vec<TokenId> = Vec::new();
    for (i, word) in corpus.words().iter().enumerate() {
        if corpus.is_doc_initial(i) {
            running.clear();
        }
        contexts.push(Context::new(running.clone()));
        let ids = segment_word(lexicon, &word.surface, marker).map_err(|e| {
            Error::MalformedWord(format!("{}:{}: {e}", word.doc_id, word.word_index))
        })?;
        running.extend_from_slice(&ids);
        tokens.push(ids);
    }
    Ok(TokenizedCorpus { tokens, contexts })
}

/// One reading-time observation.
#[derive(Debug, Clone, PartialEq)]
pub struct RtRow {
    pub doc_id: String,
    pub word_index: usize,
    pub subject: String,
    pub rt_ms: f64,
    pub prev_fixated: Option<bool>,
}

/// Reads reading-time records from TSV with header
/// `doc_id\tword_index\tsubject\trt_ms` and an optional trailing
/// `prev_fixated` column (0/1, empty allowed).
pub fn read_rt_tsv(path: impl AsRef<Path>) -> Result<Vec<RtRow>> {
    let (label, rows, ncols) = tsv::read_table(
        path.as_ref(),
        &["doc_id", "word_index", "subject", "rt_ms"],
        &["prev_fixated"],
    )?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        tsv::check_width(&label, &row, ncols)?;
        let rt_ms: f64 = tsv::parse_field(&label, row.line, "rt_ms", &row.fields[3])?;
        if !rt_ms.is_finite() {
            return Err(tsv::err(&label, row.line, "rt_ms must be finite"));
        }
        let prev_fixated = if ncols == 5 {
            match row.fields[4].as_str() {
                "" => None,
                "0" => Some(false),
                "1" => Some(true),
                other => {
                    return Err(tsv::err(
                        &label,
                        row.line,
                        &format!("prev_fixated must be 0 or 1, found {other:?}"),
                    ))
                }
            }
        } else {
            None
        };
        out.push(RtRow {
            doc_id: row.fields[0].clone(),
            word_index: tsv::parse_field(&label, row.line, "word_index", &row.fields[1])?,
            subject: row.fields[2].clone(),
            rt_ms,
            prev_fixated,
        });
    }
    Ok(out)
}
