use std::fs;
use std::io::{self, Write};
use std::path::Path;

use dsrl::corpus::{parse_canonical, parse_conll2009, Corpus};
use dsrl::inventory::{load_inventory, Inventory};
use dsrl::{Error, Result};

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Prefixes format errors with the file they came from.
fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Format { .. } => Error::Format {
            line: None,
            message: format!("{}: {e}", path.display()),
        },
        other => other,
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

/// Canonical records if the first non-blank line is a JSON object,
/// CoNLL-2009 columns otherwise.
pub fn read_corpus(path: &Path) -> Result<Corpus> {
    let text = read_text(path)?;
    let canonical = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.trim_start().starts_with('{'));
    let corpus = if canonical {
        parse_canonical(&text)
    } else {
        parse_conll2009(&text)
    };
    Ok(corpus.map_err(|e| in_file(path, e))?.with_provenance(path.display().to_string()))
}

pub fn read_inventory(path: &Path) -> Result<Inventory> {
    load_inventory(&read_text(path)?).map_err(|e| in_file(path, e))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(Error::Io)
        }
    }
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| io_error(path, e))
}

/// One JSON document per line.
pub fn jsonl<T: serde::Serialize>(records: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Format {
                line: None,
                message: format!("{}: line {}: {e}", path.display(), i + 1),
            })
        })
        .collect()
}
