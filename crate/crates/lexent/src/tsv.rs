//! Minimal TSV reading shared by the file loaders.
//!
//! Lines are split on tabs with no quoting or escaping. Blank lines and lines
//! starting with `#` are skipped, so files produced by the command-line tools
//! (which emit a `#` config header) can be read back directly. Row line
//! numbers are 1-based positions in the physical file, for error messages.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) struct Row {
    pub line: usize,
    pub fields: Vec<String>,
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
}

pub(crate) fn err(path: &str, line: usize, msg: &str) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.to_string(),
    }
}

/// Reads all non-blank, non-comment rows. The first returned row is the
/// header.
pub(crate) fn read_rows(reader: impl BufRead, label: &str) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: label.to_string(),
            source,
        })?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        rows.push(Row {
            line: idx + 1,
            fields: trimmed.split('\t').map(str::to_string).collect(),
        });
    }
    Ok(rows)
}

/// Reads rows from a file and checks the header against `expected`.
pub(crate) fn read_table(
    path: &Path,
    expected: &[&str],
    optional_tail: &[&str],
) -> Result<(String, Vec<Row>, usize)> {
    let label = path.display().to_string();
    let rows = read_rows(open(path)?, &label)?;
    let mut iter = rows.into_iter();
    let header = iter
        .next()
        .ok_or_else(|| err(&label, 0, "empty file"))?;
    let fields: Vec<&str> = header.fields.iter().map(String::as_str).collect();
    let base_ok = fields.len() >= expected.len() && fields[..expected.len()] == *expected;
    let tail = &fields[expected.len().min(fields.len())..];
    let tail_ok = tail.len() <= optional_tail.len() && tail == &optional_tail[..tail.len()];
    if !base_ok || !tail_ok {
        let mut want = expected.join("\\t");
        if !optional_tail.is_empty() {
            want.push_str(&format!(" (optionally followed by {})", optional_tail.join("\\t")));
        }
        return Err(err(
            &label,
            header.line,
            &format!("expected header {want:?}, found {:?}", header.fields.join("\\t")),
        ));
    }
    let ncols = fields.len();
    Ok((label, iter.collect(), ncols))
}

pub(crate) fn parse_field<T>(path: &str, line: usize, name: &str, raw: &str) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| {
        err(
            path,
            line,
            &format!("invalid {name} {raw:?}: {e}"),
        )
    })
}

pub(crate) fn check_width(path: &str, row: &Row, want: usize) -> Result<()> {
    if row.fields.len() == want {
        Ok(())
    } else {
        Err(err(
            path,
            row.line,
            &format!("expected {want} fields, found {}", row.fields.len()),
        ))
    }
}
