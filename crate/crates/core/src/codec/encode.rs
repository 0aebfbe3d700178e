use super::{escape, escape_with, DescriptionSequence, StylePrefix, CONTINUATION_OF, PREDICATE_END, PREDICATE_START, REFERENCE_TO};
use crate::corpus::{dependency_to_span, AnnotatedStructure, Link, PredicateInstance, Sentence, TokenRange};
use crate::error::{Error, Result};
use crate::inventory::Inventory;

/// Model input: the sentence with the predicate wrapped in `<p>` / `</p>`.
pub fn encode_input(sentence: &Sentence, pred: &PredicateInstance) -> Result<String> {
    if pred.range.start > pred.range.end || pred.range.end >= sentence.len() {
        return Err(Error::Contract(format!(
            "predicate {} outside sentence `{}` of length {}",
            pred.range,
            sentence.sentence_id(),
            sentence.len()
        )));
    }
    let mut parts: Vec<&str> = Vec::with_capacity(sentence.len() + 2);
    for (i, tok) in sentence.tokens().iter().enumerate() {
        if i == pred.range.start {
            parts.push(PREDICATE_START);
        }
        parts.push(tok);
        if i == pred.range.end {
            parts.push(PREDICATE_END);
        }
    }
    Ok(parts.join(" "))
}

/// `lemma: definition.`
pub(crate) fn render_header(lemma: &str, definition: &str) -> String {
    let lemma = escape_with(lemma, |c, _| c == ':');
    let definition = escape_with(definition, |c, next| c == '.' && next == Some(' '));
    format!("{lemma}: {definition}.")
}

fn render_role(link: Link, definition: &str) -> String {
    let definition = escape(definition);
    match link {
        Link::None => definition,
        Link::ReferenceTo => format!(" {REFERENCE_TO} {definition}"),
        Link::ContinuationOf => format!(" {CONTINUATION_OF} {definition}"),
    }
}

/// Sentence text with each given span wrapped as `[tokens]{role}`. Spans
/// must be sorted and disjoint.
pub fn sentence_body(sentence: &Sentence, wrapped: &[(TokenRange, String)]) -> String {
    let tokens = sentence.tokens();
    let mut parts = Vec::with_capacity(tokens.len());
    let mut next = wrapped.iter().peekable();
    let mut i = 0;
    while i < tokens.len() {
        match next.peek() {
            Some((range, role)) if range.start == i => {
                let words: Vec<String> = sentence.slice(*range).iter().map(|t| escape(t)).collect();
                parts.push(format!("[{}]{{{}}}", words.join(" "), role));
                i = range.end + 1;
                next.next();
            }
            _ => {
                parts.push(escape(&tokens[i]));
                i += 1;
            }
        }
    }
    parts.join(" ")
}

/// Target sequence for a structure. Dependency structures are encoded as
/// their width-1 span equivalents.
pub fn encode_target(
    structure: &AnnotatedStructure,
    sentence: &Sentence,
    inv: &Inventory,
    prefix: Option<StylePrefix>,
) -> Result<DescriptionSequence> {
    let structure = dependency_to_span(structure);
    let pred = structure.predicate();
    let sense = pred.sense_label.as_deref().ok_or_else(|| {
        Error::Lookup(format!(
            "predicate `{}` in sentence `{}` has no sense label",
            pred.lemma,
            sentence.sentence_id()
        ))
    })?;
    let entry = inv
        .resolve_sense(&pred.lemma, sense)
        .ok_or_else(|| Error::Lookup(format!("sense `{sense}` (lemma `{}`)", pred.lemma)))?;

    let mut wrapped = Vec::with_capacity(structure.arguments().len());
    for arg in structure.arguments() {
        let def = inv.role_definition(entry, &arg.role_label).ok_or_else(|| {
            Error::Lookup(format!("role `{}` of sense `{sense}`", arg.role_label))
        })?;
        wrapped.push((arg.span, render_role(arg.link, def)));
    }

    let mut surface = String::new();
    if let Some(p) = prefix {
        surface.push_str(&p.to_string());
        surface.push(' ');
    }
    surface.push_str(&render_header(&pred.lemma, &entry.definition));
    surface.push(' ');
    surface.push_str(&sentence_body(sentence, &wrapped));
    DescriptionSequence::new(surface)
}
