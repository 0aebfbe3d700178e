//! Conversion between annotated structures and description sequences.
//!
//! The model input marks the predicate inline:
//!
//! ```text
//! Mary <p> gave </p> the book to John
//! ```
//!
//! and the target prepends the sense definition to the sentence and wraps
//! every argument with its role definition:
//!
//! ```text
//! give: transfer. [Mary]{giver} gave [the book]{thing given} [to John]{entity given to}
//! ```
//!
//! Literal `\`, `[`, `]`, `{` and `}` in tokens and definitions are
//! backslash-escaped. In the header, `:` in the lemma and a `.` followed by
//! a space in the sense definition are escaped as well, so the header always
//! ends at the first unescaped `. ` after the first unescaped `: `.

mod decode;
mod encode;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Style;
use crate::error::{Error, Result};

pub use decode::{decode_description, DecodeIssue, IssueKind, ParsedArgument, ParsedStructure};
pub use encode::{encode_input, encode_target, sentence_body};
pub(crate) use encode::render_header;

pub const PREDICATE_START: &str = "<p>";
pub const PREDICATE_END: &str = "</p>";
pub const REFERENCE_TO: &str = "<reference-to>";
pub const CONTINUATION_OF: &str = "<continuation-of>";
pub const PROPBANK: &str = "<propbank>";
pub const FRAMENET: &str = "<framenet>";
pub const SPAN_SRL: &str = "<span-srl>";
pub const DEP_SRL: &str = "<dep-srl>";

/// Every special token; none may appear inside a corpus token.
pub const RESERVED_MARKERS: [&str; 8] = [
    PREDICATE_START,
    PREDICATE_END,
    REFERENCE_TO,
    CONTINUATION_OF,
    PROPBANK,
    FRAMENET,
    SPAN_SRL,
    DEP_SRL,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SrlFormalism {
    #[serde(rename = "dep-srl")]
    DepSrl,
    #[serde(rename = "span-srl")]
    SpanSrl,
}

impl SrlFormalism {
    pub fn token(self) -> &'static str {
        match self {
            SrlFormalism::DepSrl => DEP_SRL,
            SrlFormalism::SpanSrl => SPAN_SRL,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SrlFormalism::DepSrl => "dep-srl",
            SrlFormalism::SpanSrl => "span-srl",
        }
    }
}

fn style_token(style: Style) -> &'static str {
    match style {
        Style::Propbank => PROPBANK,
        Style::Framenet => FRAMENET,
    }
}

/// Inventory/formalism pair announced at the start of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StylePrefix {
    pub inventory: Style,
    pub formalism: SrlFormalism,
}

impl StylePrefix {
    pub fn new(inventory: Style, formalism: SrlFormalism) -> Self {
        StylePrefix {
            inventory,
            formalism,
        }
    }
}

impl fmt::Display for StylePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", style_token(self.inventory), self.formalism.token())
    }
}

/// Recognizes an inventory token and a formalism token, in either order, at
/// the very start of `surface`. One separating space after them is consumed.
pub fn strip_prefix(surface: &str) -> (Option<StylePrefix>, &str) {
    const STYLES: [(&str, Style); 2] = [(PROPBANK, Style::Propbank), (FRAMENET, Style::Framenet)];
    const FORMALISMS: [(&str, SrlFormalism); 2] =
        [(DEP_SRL, SrlFormalism::DepSrl), (SPAN_SRL, SrlFormalism::SpanSrl)];

    let style_first = STYLES.iter().find_map(|(tok, st)| {
        let rest = surface.strip_prefix(tok)?;
        FORMALISMS
            .iter()
            .find_map(|(ftok, fm)| rest.strip_prefix(ftok).map(|r| (StylePrefix::new(*st, *fm), r)))
    });
    let formalism_first = || {
        FORMALISMS.iter().find_map(|(ftok, fm)| {
            let rest = surface.strip_prefix(ftok)?;
            STYLES
                .iter()
                .find_map(|(tok, st)| rest.strip_prefix(tok).map(|r| (StylePrefix::new(*st, *fm), r)))
        })
    };
    match style_first.or_else(formalism_first) {
        Some((prefix, rest)) => (Some(prefix), rest.strip_prefix(' ').unwrap_or(rest)),
        None => (None, surface),
    }
}

/// A full target-side surface string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionSequence {
    surface: String,
    prefix: Option<StylePrefix>,
}

impl DescriptionSequence {
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() {
            return Err(Error::Contract("description sequence is empty".into()));
        }
        let prefix = strip_prefix(&surface).0;
        Ok(DescriptionSequence { surface, prefix })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn prefix(&self) -> Option<StylePrefix> {
        self.prefix
    }
}

impl fmt::Display for DescriptionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

fn is_reserved_char(c: char) -> bool {
    matches!(c, '\\' | '[' | ']' | '{' | '}')
}

/// Escapes reserved characters, plus any character `extra` selects given
/// the character that follows it.
pub(crate) fn escape_with(text: &str, extra: impl Fn(char, Option<char>) -> bool) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if is_reserved_char(c) || extra(c, chars.peek().copied()) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

pub(crate) fn escape(text: &str) -> String {
    escape_with(text, |_, _| false)
}
