//! Domain types for SRL-annotated sentences.
//!
//! All token ranges are 0-based and inclusive on both ends. Values are
//! validated on construction and immutable afterwards; the only way to get
//! a [`Corpus`] is through [`Corpus::new`] or one of the readers, all of which
//! run the same checks.

mod canonical;
mod conll2009;
mod stats;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codec::RESERVED_MARKERS;
use crate::error::{Error, Result};

pub use canonical::{parse_canonical, write_canonical};
pub use conll2009::{export_official, parse_conll2009, OfficialFormat};
pub use stats::{corpus_stats, StatsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Propbank,
    Framenet,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::Propbank => "propbank",
            Style::Framenet => "framenet",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formalism {
    Dependency,
    Span,
}

/// Relation of an argument to another argument of the same predicate
/// (`R-` and `C-` labels in PropBank corpora).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    None,
    ReferenceTo,
    ContinuationOf,
}

impl Link {
    /// Label prefix used by the CoNLL formats.
    pub fn label_prefix(self) -> &'static str {
        match self {
            Link::None => "",
            Link::ReferenceTo => "R-",
            Link::ContinuationOf => "C-",
        }
    }
}

/// Splits a corpus role label such as `R-A0` into its base role and link.
pub fn parse_role_label(label: &str) -> (String, Link) {
    if let Some(rest) = label.strip_prefix("R-").filter(|r| !r.is_empty()) {
        (rest.to_string(), Link::ReferenceTo)
    } else if let Some(rest) = label.strip_prefix("C-").filter(|r| !r.is_empty()) {
        (rest.to_string(), Link::ContinuationOf)
    } else {
        (label.to_string(), Link::None)
    }
}

pub fn render_role_label(role: &str, link: Link) -> String {
    format!("{}{}", link.label_prefix(), role)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TokenRange {
    pub start: usize,
    pub end: usize,
}

impl TokenRange {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start > end {
            return Err(Error::Invariant(format!("range start {start} > end {end}")));
        }
        Ok(TokenRange { start, end })
    }

    pub fn single(index: usize) -> Self {
        TokenRange {
            start: index,
            end: index,
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &TokenRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

impl fmt::Display for TokenRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    sentence_id: String,
    doc_id: Option<String>,
    tokens: Vec<String>,
}

impl Sentence {
    pub fn new(
        sentence_id: impl Into<String>,
        doc_id: Option<String>,
        tokens: Vec<String>,
    ) -> Result<Self> {
        let sentence_id = sentence_id.into();
        if tokens.is_empty() {
            return Err(Error::Invariant(format!(
                "sentence `{sentence_id}` has no tokens"
            )));
        }
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(Error::Invariant(format!(
                    "sentence `{sentence_id}`: token {i} is empty"
                )));
            }
            if tok.chars().any(char::is_whitespace) {
                return Err(Error::Invariant(format!(
                    "sentence `{sentence_id}`: token {i} `{tok}` contains whitespace"
                )));
            }
            if let Some(m) = RESERVED_MARKERS.iter().find(|m| tok.contains(*m)) {
                return Err(Error::Invariant(format!(
                    "sentence `{sentence_id}`: token {i} contains reserved marker {m}"
                )));
            }
        }
        Ok(Sentence {
            sentence_id,
            doc_id,
            tokens,
        })
    }

    pub fn sentence_id(&self) -> &str {
        &self.sentence_id
    }

    pub fn doc_id(&self) -> Option<&str> {
        self.doc_id.as_deref()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Surface text: tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }

    pub fn slice(&self, range: TokenRange) -> &[String] {
        &self.tokens[range.start..=range.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateInstance {
    pub sentence_ref: String,
    pub range: TokenRange,
    pub lemma: String,
    /// e.g. `give.01`, or a frame name for FrameNet-style data.
    pub sense_label: Option<String>,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub span: TokenRange,
    pub role_label: String,
    pub link: Link,
}

impl Argument {
    pub fn new(span: TokenRange, role_label: impl Into<String>, link: Link) -> Self {
        Argument {
            span,
            role_label: role_label.into(),
            link,
        }
    }

    /// Role label including the `R-`/`C-` link prefix.
    pub fn full_label(&self) -> String {
        render_role_label(&self.role_label, self.link)
    }
}

/// One predicate plus its labeled arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedStructure {
    predicate: PredicateInstance,
    arguments: Vec<Argument>,
    formalism: Formalism,
}

impl AnnotatedStructure {
    /// Arguments are sorted by start; overlaps between arguments, or between
    /// an argument and the predicate, are rejected.
    pub fn new(
        predicate: PredicateInstance,
        mut arguments: Vec<Argument>,
        formalism: Formalism,
    ) -> Result<Self> {
        arguments.sort_by_key(|a| (a.span.start, a.span.end));
        for arg in &arguments {
            if arg.span.start > arg.span.end {
                return Err(Error::Invariant(format!(
                    "argument span {} is inverted",
                    arg.span
                )));
            }
            if arg.role_label.is_empty() {
                return Err(Error::Invariant(format!(
                    "argument {} has an empty role label",
                    arg.span
                )));
            }
            if arg.span.overlaps(&predicate.range) {
                return Err(Error::Invariant(format!(
                    "argument span {} overlaps predicate {}",
                    arg.span, predicate.range
                )));
            }
            if formalism == Formalism::Dependency && arg.span.len() != 1 {
                return Err(Error::Invariant(format!(
                    "dependency argument {} is wider than one token",
                    arg.span
                )));
            }
        }
        for pair in arguments.windows(2) {
            if pair[0].span.overlaps(&pair[1].span) {
                return Err(Error::Invariant(format!(
                    "argument spans {} and {} overlap",
                    pair[0].span, pair[1].span
                )));
            }
        }
        if predicate.range.start > predicate.range.end {
            return Err(Error::Invariant(format!(
                "predicate range {} is inverted",
                predicate.range
            )));
        }
        Ok(AnnotatedStructure {
            predicate,
            arguments,
            formalism,
        })
    }

    pub fn predicate(&self) -> &PredicateInstance {
        &self.predicate
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn formalism(&self) -> Formalism {
        self.formalism
    }

    pub fn sentence_ref(&self) -> &str {
        &self.predicate.sentence_ref
    }

    /// Last token index touched by the predicate or any argument.
    fn max_index(&self) -> usize {
        self.arguments
            .iter()
            .map(|a| a.span.end)
            .chain(std::iter::once(self.predicate.range.end))
            .max()
            .unwrap_or(0)
    }

    pub fn into_parts(self) -> (PredicateInstance, Vec<Argument>, Formalism) {
        (self.predicate, self.arguments, self.formalism)
    }
}

/// Reinterprets a dependency structure as a span structure: each head token
/// becomes a width-1 span. Span input is returned unchanged.
pub fn dependency_to_span(structure: &AnnotatedStructure) -> AnnotatedStructure {
    AnnotatedStructure {
        predicate: structure.predicate.clone(),
        arguments: structure.arguments.clone(),
        formalism: Formalism::Span,
    }
}

/// Ordering used for sentence ids: purely numeric ids sort numerically and
/// before any non-numeric id, which sort lexicographically.
pub fn compare_sentence_ids(a: &str, b: &str) -> Ordering {
    fn key(s: &str) -> (u8, Option<u128>, &str) {
        if !s.is_empty() && s.len() <= 38 && s.bytes().all(|b| b.is_ascii_digit()) {
            (0, s.parse::<u128>().ok(), s)
        } else {
            (1, None, s)
        }
    }
    key(a).cmp(&key(b))
}

/// A validated collection of sentences and their annotated structures.
///
/// Equality ignores `provenance`, which is informational.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    structures: Vec<AnnotatedStructure>,
    provenance: String,
    index: BTreeMap<String, usize>,
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.sentences == other.sentences && self.structures == other.structures
    }
}

impl Eq for Corpus {}

impl Corpus {
    pub fn new(
        sentences: Vec<Sentence>,
        structures: Vec<AnnotatedStructure>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, s) in sentences.iter().enumerate() {
            if index.insert(s.sentence_id.clone(), i).is_some() {
                return Err(Error::Invariant(format!(
                    "duplicate sentence id `{}`",
                    s.sentence_id
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for st in &structures {
            let Some(&si) = index.get(st.sentence_ref()) else {
                return Err(Error::Invariant(format!(
                    "structure refers to unknown sentence `{}`",
                    st.sentence_ref()
                )));
            };
            let len = sentences[si].len();
            if st.max_index() >= len {
                return Err(Error::Invariant(format!(
                    "structure for predicate {} in sentence `{}` exceeds sentence length {len}",
                    st.predicate.range,
                    st.sentence_ref()
                )));
            }
            if !seen.insert((st.sentence_ref().to_string(), st.predicate.range)) {
                return Err(Error::Invariant(format!(
                    "sentence `{}` has two structures for predicate {}",
                    st.sentence_ref(),
                    st.predicate.range
                )));
            }
        }
        Ok(Corpus {
            sentences,
            structures,
            provenance: provenance.into(),
            index,
        })
    }

    pub fn empty() -> Self {
        Corpus::default()
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn structures(&self) -> &[AnnotatedStructure] {
        &self.structures
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn sentence(&self, sentence_id: &str) -> Option<&Sentence> {
        self.index.get(sentence_id).map(|&i| &self.sentences[i])
    }

    /// Sentence a structure belongs to. Always present for structures of this corpus.
    pub fn sentence_of(&self, structure: &AnnotatedStructure) -> &Sentence {
        self.sentence(structure.sentence_ref())
            .expect("corpus invariant: structure sentence resolves")
    }

    pub fn is_annotated(&self, sentence_id: &str) -> bool {
        self.structures
            .iter()
            .any(|s| s.sentence_ref() == sentence_id)
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Returns a corpus holding only structures accepted by `keep`; sentences are retained.
    pub fn filter_structures(&self, mut keep: impl FnMut(&AnnotatedStructure) -> bool) -> Corpus {
        Corpus {
            sentences: self.sentences.clone(),
            structures: self.structures.iter().filter(|s| keep(s)).cloned().collect(),
            provenance: self.provenance.clone(),
            index: self.index.clone(),
        }
    }

    /// Applies [`dependency_to_span`] to every structure.
    pub fn to_span(&self) -> Corpus {
        Corpus {
            sentences: self.sentences.clone(),
            structures: self.structures.iter().map(dependency_to_span).collect(),
            provenance: self.provenance.clone(),
            index: self.index.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn pred(range: TokenRange) -> PredicateInstance {
        PredicateInstance {
            sentence_ref: "s1".into(),
            range,
            lemma: "give".into(),
            sense_label: Some("give.01".into()),
            style: Style::Propbank,
        }
    }

    #[test]
    fn sentence_rejects_bad_tokens() {
        assert!(Sentence::new("s", None, vec![]).is_err());
        assert!(Sentence::new("s", None, vec!["".into()]).is_err());
        assert!(Sentence::new("s", None, vec!["a<p>".into()]).is_err());
        assert!(Sentence::new("s", None, vec!["a b".into()]).is_err());
        assert!(Sentence::new("s", None, toks("a [b] c")).is_ok());
    }

    #[test]
    fn structure_rejects_overlaps() {
        let a = Argument::new(TokenRange::new(2, 3).unwrap(), "A1", Link::None);
        let b = Argument::new(TokenRange::new(3, 4).unwrap(), "A2", Link::None);
        let err = AnnotatedStructure::new(pred(TokenRange::single(1)), vec![a, b], Formalism::Span)
            .unwrap_err()
            .to_string();
        assert!(err.contains("2..3") && err.contains("3..4"), "{err}");

        let on_pred = Argument::new(TokenRange::single(1), "A0", Link::None);
        assert!(
            AnnotatedStructure::new(pred(TokenRange::single(1)), vec![on_pred], Formalism::Span)
                .is_err()
        );
    }

    #[test]
    fn dependency_arguments_are_single_tokens() {
        let wide = Argument::new(TokenRange::new(2, 3).unwrap(), "A1", Link::None);
        assert!(AnnotatedStructure::new(
            pred(TokenRange::single(1)),
            vec![wide.clone()],
            Formalism::Dependency
        )
        .is_err());
        assert!(
            AnnotatedStructure::new(pred(TokenRange::single(1)), vec![wide], Formalism::Span)
                .is_ok()
        );
    }

    #[test]
    fn arguments_are_sorted() {
        let a = Argument::new(TokenRange::single(4), "A2", Link::None);
        let b = Argument::new(TokenRange::single(0), "A0", Link::None);
        let st = AnnotatedStructure::new(pred(TokenRange::single(1)), vec![a, b], Formalism::Span)
            .unwrap();
        assert_eq!(st.arguments()[0].role_label, "A0");
    }

    #[test]
    fn dependency_to_span_flips_formalism_only() {
        let arg = Argument::new(TokenRange::single(3), "A1", Link::ReferenceTo);
        let dep =
            AnnotatedStructure::new(pred(TokenRange::single(1)), vec![arg], Formalism::Dependency)
                .unwrap();
        let span = dependency_to_span(&dep);
        assert_eq!(span.formalism(), Formalism::Span);
        assert_eq!(span.arguments(), dep.arguments());
        assert_eq!(dependency_to_span(&span), span);

        let empty =
            AnnotatedStructure::new(pred(TokenRange::single(1)), vec![], Formalism::Dependency)
                .unwrap();
        let flipped = dependency_to_span(&empty);
        assert_eq!(flipped.formalism(), Formalism::Span);
        assert!(flipped.arguments().is_empty());
    }

    #[test]
    fn corpus_checks_references_and_bounds() {
        let s = Sentence::new("s1", None, toks("Mary gave it")).unwrap();
        let ok = AnnotatedStructure::new(pred(TokenRange::single(1)), vec![], Formalism::Span)
            .unwrap();
        assert!(Corpus::new(vec![s.clone()], vec![ok.clone()], "").is_ok());
        assert!(Corpus::new(vec![s.clone(), s.clone()], vec![], "").is_err());
        assert!(Corpus::new(vec![s.clone()], vec![ok.clone(), ok.clone()], "").is_err());

        let out = AnnotatedStructure::new(
            pred(TokenRange::single(1)),
            vec![Argument::new(TokenRange::single(5), "A1", Link::None)],
            Formalism::Span,
        )
        .unwrap();
        assert!(Corpus::new(vec![s.clone()], vec![out], "").is_err());

        let mut p = pred(TokenRange::single(0));
        p.sentence_ref = "nope".into();
        let dangling = AnnotatedStructure::new(p, vec![], Formalism::Span).unwrap();
        assert!(Corpus::new(vec![s], vec![dangling], "").is_err());
    }

    #[test]
    fn role_labels_round_trip_link_prefixes() {
        assert_eq!(parse_role_label("R-A0"), ("A0".into(), Link::ReferenceTo));
        assert_eq!(parse_role_label("C-AM-TMP"), ("AM-TMP".into(), Link::ContinuationOf));
        assert_eq!(parse_role_label("A1"), ("A1".into(), Link::None));
        assert_eq!(parse_role_label("R-"), ("R-".into(), Link::None));
        assert_eq!(render_role_label("A0", Link::ReferenceTo), "R-A0");
    }

    #[test]
    fn sentence_id_ordering_is_natural() {
        let mut ids = vec!["10", "b", "2", "a", "1"];
        ids.sort_by(|a, b| compare_sentence_ids(a, b));
        assert_eq!(ids, vec!["1", "2", "10", "a", "b"]);
    }
}
