//! Subword vocabulary with a boundary/internal partition.
//!
//! Every token is either *boundary* (it can start a word, e.g. tokens whose
//! surface begins with the `▁` marker used by SentencePiece-style vocabularies)
//! or *internal* (it can only continue a word). The partition drives word
//! sampling and enumeration: first tokens are drawn from the boundary set,
//! later tokens from the internal set, and the boundary mass of the next-token
//! distribution is read as the probability that the word ends.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tsv;

/// Dense token identifier, `0..vocab_size`.
pub type TokenId = u32;

/// Default marker prefix that flags word-initial surfaces.
pub const DEFAULT_BOUNDARY_MARKER: &str = "\u{2581}";

/// One vocabulary entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenEntry {
    pub id: TokenId,
    pub surface: String,
    pub boundary: bool,
}

impl TokenEntry {
    pub fn new(id: TokenId, surface: impl Into<String>, boundary: bool) -> Self {
        Self {
            id,
            surface: surface.into(),
            boundary,
        }
    }
}

/// Validated vocabulary: dense ids, unique surfaces, and a non-empty
/// boundary set.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<TokenEntry>,
    by_surface: HashMap<String, TokenId>,
    boundary_ids: Vec<TokenId>,
    internal_ids: Vec<TokenId>,
}

impl Lexicon {
    /// Builds a lexicon from entries, checking all invariants: at least one
    /// entry, unique ids covering `0..n` densely, unique surfaces, and at
    /// least one boundary token.
    pub fn build(mut entries: Vec<TokenEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let n = entries.len() as u32;
        let mut seen = vec![false; entries.len()];
        for e in &entries {
            if e.id >= n {
                return Err(Error::NonDenseIds {
                    expected: n,
                    found: e.id,
                });
            }
            if seen[e.id as usize] {
                return Err(Error::DuplicateTokenId(e.id));
            }
            seen[e.id as usize] = true;
        }
        entries.sort_by_key(|e| e.id);

        let mut by_surface = HashMap::with_capacity(entries.len());
        for e in &entries {
            if by_surface.insert(e.surface.clone(), e.id).is_some() {
                return Err(Error::DuplicateSurface(e.surface.clone()));
            }
        }
        let boundary_ids: Vec<TokenId> =
            entries.iter().filter(|e| e.boundary).map(|e| e.id).collect();
        if boundary_ids.is_empty() {
            return Err(Error::EmptyBoundarySet);
        }
        let internal_ids: Vec<TokenId> = entries
            .iter()
            .filter(|e| !e.boundary)
            .map(|e| e.id)
            .collect();
        Ok(Self {
            entries,
            by_surface,
            boundary_ids,
            internal_ids,
        })
    }

    /// Builds a lexicon from surfaces alone, assigning ids in iteration order
    /// and inferring the boundary flag from a marker prefix.
    pub fn from_surfaces<I, S>(surfaces: I, marker: &str) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if marker.is_empty() {
            return Err(Error::InvalidConfig(
                "boundary marker must be non-empty".into(),
            ));
        }
        let entries = surfaces
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let surface = s.into();
                let boundary = surface.starts_with(marker);
                TokenEntry::new(i as TokenId, surface, boundary)
            })
            .collect();
        Self::build(entries)
    }

    /// Reads a lexicon from a TSV file.
    ///
    /// Two headers are accepted: `id\tsurface\tboundary` with an explicit
    /// 0/1 boundary column, or `id\tsurface` with the boundary flag inferred
    /// from `marker`. Violations are reported with the offending line number.
    pub fn from_tsv_path(path: impl AsRef<Path>, marker: &str) -> Result<Self> {
        let file = tsv::open(path.as_ref())?;
        Self::from_tsv_reader(file, &path.as_ref().display().to_string(), marker)
    }

    /// Same as [`Lexicon::from_tsv_path`] but from any buffered reader;
    /// `label` names the source in error messages.
    pub fn from_tsv_reader(reader: impl BufRead, label: &str, marker: &str) -> Result<Self> {
        let rows = tsv::read_rows(reader, label)?;
        let mut iter = rows.into_iter();
        let header = iter.next().ok_or_else(|| tsv::err(label, 0, "empty file"))?;
        let explicit = match header.fields.as_slice() {
            [a, b, c] if a == "id" && b == "surface" && c == "boundary" => true,
            [a, b] if a == "id" && b == "surface" => false,
            _ => {
                return Err(tsv::err(
                    label,
                    header.line,
                    "expected header 'id\\tsurface\\tboundary' or 'id\\tsurface'",
                ))
            }
        };
        if !explicit && marker.is_empty() {
            return Err(Error::InvalidConfig(
                "boundary marker must be non-empty for a two-column lexicon".into(),
            ));
        }

        let mut entries = Vec::new();
        let mut ids_seen = HashMap::new();
        let mut surfaces_seen = HashMap::new();
        for row in iter {
            let want = if explicit { 3 } else { 2 };
            if row.fields.len() != want {
                return Err(tsv::err(
                    label,
                    row.line,
                    &format!("expected {want} fields, found {}", row.fields.len()),
                ));
            }
            let id: TokenId = tsv::parse_field(label, row.line, "id", &row.fields[0])?;
            let surface = row.fields[1].clone();
            if surface.is_empty() {
                return Err(tsv::err(label, row.line, "empty surface"));
            }
            let boundary = if explicit {
                match row.fields[2].as_str() {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(tsv::err(
                            label,
                            row.line,
                            &format!("boundary must be 0 or 1, found {other:?}"),
                        ))
                    }
                }
            } else {
                surface.starts_with(marker)
            };
            if let Some(prev) = ids_seen.insert(id, row.line) {
                return Err(tsv::err(
                    label,
                    row.line,
                    &format!("duplicate token id {id}, first seen on line {prev}"),
                ));
            }
            if let Some(prev) = surfaces_seen.insert(surface.clone(), row.line) {
                return Err(tsv::err(
                    label,
                    row.line,
                    &format!("duplicate surface {surface:?}, first seen on line {prev}"),
                ));
            }
            entries.push(TokenEntry::new(id, surface, boundary));
        }
        Self::build(entries)
    }

    /// Number of tokens in the vocabulary.
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the token can start a word. Errors on an unknown id.
    pub fn is_boundary(&self, id: TokenId) -> Result<bool> {
        self.entries
            .get(id as usize)
            .map(|e| e.boundary)
            .ok_or(Error::UnknownTokenId(id))
    }

    /// Surface form of a token. Errors on an unknown id.
    pub fn surface(&self, id: TokenId) -> Result<&str> {
        self.entries
            .get(id as usize)
            .map(|e| e.surface.as_str())
            .ok_or(Error::UnknownTokenId(id))
    }

    /// Token id for a surface form, if present.
    #[must_use]
    pub fn id_of(&self, surface: &str) -> Option<TokenId> {
        self.by_surface.get(surface).copied()
    }

    /// All entries, ordered by id.
    #[must_use]
    pub fn entries(&self) -> &[TokenEntry] {
        &self.entries
    }

    /// Ids of word-initial tokens, ascending. Never empty.
    #[must_use]
    pub fn boundary_ids(&self) -> &[TokenId] {
        &self.boundary_ids
    }

    /// Ids of word-internal tokens, ascending. May be empty.
    #[must_use]
    pub fn internal_ids(&self) -> &[TokenId] {
        &self.internal_ids
    }

    /// Whether `id` is in range, without the `Result` wrapping.
    #[must_use]
    pub fn contains(&self, id: TokenId) -> bool {
        (id as usize) < self.entries.len()
    }
}
