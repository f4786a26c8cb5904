//! Deterministic TSV rendering shared by the subcommands.

use std::io::Write;
use std::path::Path;

use crate::cli::args::RunConfig;
use crate::error::{Error, Result};

/// Comment line echoing the parameters that shape every downstream number.
#[must_use]
pub fn config_header(config: &RunConfig) -> String {
    format!(
        "# samples={} alpha={:.6} max_word_tokens={} seed={}",
        config.sample_count, config.alpha, config.max_word_tokens, config.seed
    )
}

/// Fixed six-decimal rendering; infinities print as `inf`/`-inf`.
pub(crate) fn fmt(value: f64) -> String {
    if value.is_nan() {
        "nan".to_string()
    } else if value.is_infinite() {
        if value > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{value:.6}")
    }
}

/// Absent optional values render as the empty field.
pub(crate) fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt).unwrap_or_default()
}

/// Scientific notation for quantities that can span many magnitudes, such
/// as residual probability mass.
pub(crate) fn fmt_sci(value: f64) -> String {
    format!("{value:.6e}")
}

/// Accumulates tab-separated rows under a config header.
pub(crate) struct Table {
    buf: String,
}

impl Table {
    pub(crate) fn new(config: &RunConfig, columns: &[&str]) -> Self {
        let mut buf = config_header(config);
        buf.push('\n');
        buf.push_str(&columns.join("\t"));
        buf.push('\n');
        Table { buf }
    }

    pub(crate) fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join("\t"));
        self.buf.push('\n');
    }

    pub(crate) fn comment(&mut self, text: &str) {
        self.buf.push_str("# ");
        self.buf.push_str(text);
        self.buf.push('\n');
    }

    pub(crate) fn finish(self) -> String {
        self.buf
    }
}

/// Writes the rendered table to `path`, or stdout when no path was given.
pub(crate) fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, content).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes()).map_err(|source| Error::Io {
                path: "<stdout>".to_string(),
                source,
            })
        }
    }
}
