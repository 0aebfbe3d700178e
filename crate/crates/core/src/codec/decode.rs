//! Single-pass, never-failing parser for generated description sequences.
//!
//! Malformed input is not repaired: each problem becomes a [`DecodeIssue`]
//! and the scanner continues right after the offending character.

use serde::{Deserialize, Serialize};

use super::{strip_prefix, DescriptionSequence, CONTINUATION_OF, REFERENCE_TO, RESERVED_MARKERS};
use crate::corpus::{Link, Sentence, TokenRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    UnbalancedBracket,
    MissingSenseHeader,
    UnalignableArgument,
    StrayMarker,
    Truncated,
}

impl IssueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueKind::UnbalancedBracket => "unbalanced_bracket",
            IssueKind::MissingSenseHeader => "missing_sense_header",
            IssueKind::UnalignableArgument => "unalignable_argument",
            IssueKind::StrayMarker => "stray_marker",
            IssueKind::Truncated => "truncated",
        }
    }
}

/// `position` is a character (not byte) offset into the full surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeIssue {
    pub kind: IssueKind,
    pub position: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedArgument {
    pub text: String,
    pub definition: String,
    pub link: Link,
    /// Token range in the reference sentence, when one was supplied and the
    /// text could be aligned.
    pub span: Option<TokenRange>,
    /// Index of the first argument token among the surface words.
    #[serde(skip)]
    surface_token: usize,
    #[serde(skip)]
    position: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedStructure {
    pub predicate_surface: String,
    pub sense_definition: String,
    pub arguments: Vec<ParsedArgument>,
}

#[derive(Clone, Copy)]
struct Lexeme {
    pos: usize,
    ch: char,
    escaped: bool,
}

impl Lexeme {
    fn is(&self, c: char) -> bool {
        !self.escaped && self.ch == c
    }
}

fn lex(chars: &[char], offset: usize) -> Vec<Lexeme> {
    let mut out = Vec::with_capacity(chars.len());
    let mut i = offset;
    while i < chars.len() {
        if chars[i] == '\\' && i + 1 < chars.len() {
            out.push(Lexeme {
                pos: i,
                ch: chars[i + 1],
                escaped: true,
            });
            i += 2;
        } else {
            out.push(Lexeme {
                pos: i,
                ch: chars[i],
                escaped: false,
            });
            i += 1;
        }
    }
    out
}

fn text_of(lex: &[Lexeme]) -> String {
    lex.iter().map(|l| l.ch).collect()
}

struct Decoder {
    lex: Vec<Lexeme>,
    last: usize,
    issues: Vec<DecodeIssue>,
}

impl Decoder {
    fn issue(&mut self, kind: IssueKind, position: usize, note: impl Into<String>) {
        self.issues.push(DecodeIssue {
            kind,
            position: position.min(self.last),
            note: note.into(),
        });
    }

    /// Reserved marker starting at lexeme `i`, if any.
    fn marker_at(&self, i: usize) -> Option<&'static str> {
        RESERVED_MARKERS.iter().copied().find(|m| {
            let n = m.chars().count();
            i + n <= self.lex.len()
                && self.lex[i..i + n]
                    .iter()
                    .zip(m.chars())
                    .all(|(l, c)| l.is(c))
        })
    }

    /// Locates `lemma: definition.` and returns the lexeme index where the body starts.
    fn header(&mut self, out: &mut ParsedStructure) -> usize {
        let lex = &self.lex;
        let opens = |l: &Lexeme| l.is('[') || l.is('{') || l.is(']') || l.is('}');
        let colon = (0..lex.len().saturating_sub(1))
            .take_while(|&i| !opens(&lex[i]))
            .find(|&i| lex[i].is(':') && lex[i + 1].is(' '));
        let stop = colon.and_then(|c| {
            (c + 2..lex.len())
                .take_while(|&i| !opens(&lex[i]))
                .find(|&i| lex[i].is('.') && (i + 1 == lex.len() || lex[i + 1].is(' ')))
                .map(|s| (c, s))
        });
        match stop {
            Some((c, s)) => {
                out.predicate_surface = text_of(&lex[..c]).trim().to_string();
                out.sense_definition = text_of(&lex[c + 2..s]).trim().to_string();
                (s + 2).min(lex.len())
            }
            None => {
                let at = lex.first().map_or(self.last, |l| l.pos);
                self.issue(
                    IssueKind::MissingSenseHeader,
                    at,
                    "no `lemma: definition.` header",
                );
                0
            }
        }
    }

    fn body(&mut self, start: usize, out: &mut ParsedStructure) {
        let mut words = String::new();
        let mut i = start;
        while i < self.lex.len() {
            let l = self.lex[i];
            if l.escaped {
                words.push(l.ch);
                i += 1;
                continue;
            }
            match l.ch {
                '[' => match self.argument(i, &words) {
                    Some((arg, next)) => {
                        words.push_str(&arg.text);
                        out.arguments.push(arg);
                        i = next;
                    }
                    None => i += 1,
                },
                ']' | '{' | '}' => {
                    self.issue(IssueKind::UnbalancedBracket, l.pos, format!("stray `{}`", l.ch));
                    i += 1;
                }
                '<' => match self.marker_at(i) {
                    Some(m) => {
                        self.issue(IssueKind::StrayMarker, l.pos, format!("{m} outside a definition"));
                        i += m.chars().count();
                        words.push(' ');
                    }
                    None => {
                        words.push('<');
                        i += 1;
                    }
                },
                c => {
                    words.push(c);
                    i += 1;
                }
            }
        }
    }

    /// Parses `[text]{definition}` starting at the `[` at lexeme `open`.
    /// Returns the argument and the index after the closing brace, or `None`
    /// (with issues recorded) if the construct is malformed.
    fn argument(&mut self, open: usize, words_before: &str) -> Option<(ParsedArgument, usize)> {
        let open_pos = self.lex[open].pos;
        let mut i = open + 1;
        let mut text = Vec::new();
        loop {
            let Some(l) = self.lex.get(i).copied() else {
                self.issue(IssueKind::UnbalancedBracket, open_pos, "unclosed `[`");
                self.issue(IssueKind::Truncated, self.last, "input ends inside an argument");
                return None;
            };
            if l.is(']') {
                break;
            }
            if l.is('[') {
                self.issue(IssueKind::UnbalancedBracket, open_pos, "`[` not closed before the next `[`");
                return None;
            }
            if l.is('{') || l.is('}') {
                self.issue(IssueKind::UnbalancedBracket, l.pos, format!("`{}` inside argument text", l.ch));
            } else {
                if l.is('<') {
                    if let Some(m) = self.marker_at(i) {
                        self.issue(IssueKind::StrayMarker, l.pos, format!("{m} inside argument text"));
                    }
                }
                text.push(l);
            }
            i += 1;
        }
        let close_pos = self.lex[i].pos;
        i += 1;
        while self.lex.get(i).is_some_and(|l| l.is(' ')) {
            i += 1;
        }
        match self.lex.get(i) {
            Some(l) if l.is('{') => {}
            Some(_) => {
                self.issue(IssueKind::UnbalancedBracket, close_pos, "argument without `{role}`");
                return None;
            }
            None => {
                self.issue(IssueKind::UnbalancedBracket, close_pos, "argument without `{role}`");
                self.issue(IssueKind::Truncated, self.last, "input ends after an argument");
                return None;
            }
        }
        let brace = i;
        let brace_pos = self.lex[brace].pos;
        i += 1;
        let def_start = i;
        loop {
            let Some(l) = self.lex.get(i).copied() else {
                self.issue(IssueKind::UnbalancedBracket, brace_pos, "unclosed `{`");
                self.issue(IssueKind::Truncated, self.last, "input ends inside a role definition");
                return None;
            };
            if l.is('}') {
                break;
            }
            if l.is('[') || l.is(']') || l.is('{') {
                self.issue(IssueKind::UnbalancedBracket, brace_pos, format!("`{}` inside role definition", l.ch));
                return None;
            }
            i += 1;
        }
        let def_lex = self.lex[def_start..i].to_vec();
        let next = i + 1;

        let (link, body_at) = self.link_of(&def_lex);
        let definition = text_of(&def_lex[body_at..]).trim().to_string();
        for (k, lx) in def_lex.iter().enumerate().skip(body_at) {
            if lx.is('<') {
                if let Some(m) = self.marker_at(def_start + k) {
                    self.issue(IssueKind::StrayMarker, lx.pos, format!("{m} inside role definition"));
                }
            }
        }

        Some((
            ParsedArgument {
                text: text_of(&text).trim().to_string(),
                definition,
                link,
                span: None,
                surface_token: words_before.split_whitespace().count(),
                position: open_pos,
            },
            next,
        ))
    }

    /// Leading link marker of a role definition and the lexeme index after it.
    fn link_of(&self, def: &[Lexeme]) -> (Link, usize) {
        let lead = def.iter().take_while(|l| l.is(' ')).count();
        for (marker, link) in [(REFERENCE_TO, Link::ReferenceTo), (CONTINUATION_OF, Link::ContinuationOf)] {
            let n = marker.chars().count();
            if lead + n <= def.len() && def[lead..lead + n].iter().zip(marker.chars()).all(|(l, c)| l.is(c)) {
                return (link, lead + n);
            }
        }
        (Link::None, 0)
    }

    fn align(&mut self, sentence: &Sentence, out: &mut ParsedStructure) {
        let tokens = sentence.tokens();
        let mut used = vec![false; tokens.len()];
        for arg in &mut out.arguments {
            let words: Vec<&str> = arg.text.split_whitespace().collect();
            let fits = |start: usize, used: &[bool]| {
                start + words.len() <= tokens.len()
                    && words.iter().zip(&tokens[start..]).all(|(w, t)| *w == t)
                    && !used[start..start + words.len()].iter().any(|u| *u)
            };
            let start = if words.is_empty() {
                None
            } else if fits(arg.surface_token, &used) {
                Some(arg.surface_token)
            } else {
                (0..tokens.len()).find(|&s| fits(s, &used))
            };
            match start {
                Some(s) => {
                    let e = s + words.len() - 1;
                    used[s..=e].iter_mut().for_each(|u| *u = true);
                    arg.span = Some(TokenRange { start: s, end: e });
                }
                None => self.issues.push(DecodeIssue {
                    kind: IssueKind::UnalignableArgument,
                    position: arg.position,
                    note: format!("`{}` does not match unused sentence tokens", arg.text),
                }),
            }
        }
    }
}

/// Parses a description sequence. Never fails: every input yields a
/// (possibly empty) structure plus the problems found, ordered by position.
/// When `sentence` is given, argument texts are aligned to token ranges.
pub fn decode_description(
    seq: &DescriptionSequence,
    sentence: Option<&Sentence>,
) -> (ParsedStructure, Vec<DecodeIssue>) {
    let surface = seq.surface();
    let chars: Vec<char> = surface.chars().collect();
    let (_, rest) = strip_prefix(surface);
    let offset = chars.len() - rest.chars().count();

    let mut dec = Decoder {
        lex: lex(&chars, offset),
        last: chars.len().saturating_sub(1),
        issues: Vec::new(),
    };
    let mut out = ParsedStructure::default();
    let body_start = dec.header(&mut out);
    dec.body(body_start, &mut out);
    if let Some(s) = sentence {
        dec.align(s, &mut out);
    }

    let mut issues = dec.issues;
    issues.sort_by_key(|i| (i.position, i.kind));
    issues.dedup_by(|a, b| a.position == b.position && a.kind == b.kind);
    (out, issues)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decode(s: &str) -> (ParsedStructure, Vec<DecodeIssue>) {
        decode_description(&DescriptionSequence::new(s).unwrap(), None)
    }

    fn kinds(issues: &[DecodeIssue]) -> Vec<IssueKind> {
        let mut k: Vec<_> = issues.iter().map(|i| i.kind).collect();
        k.sort();
        k.dedup();
        k
    }

    #[test]
    fn give_example() {
        let (p, issues) = decode(
            "give: transfer. [Mary]{giver} gave [the book]{thing given} [to John]{entity given to}",
        );
        assert!(issues.is_empty(), "{issues:?}");
        assert_eq!(p.predicate_surface, "give");
        assert_eq!(p.sense_definition, "transfer");
        let defs: Vec<_> = p.arguments.iter().map(|a| a.definition.as_str()).collect();
        assert_eq!(defs, ["giver", "thing given", "entity given to"]);
        let texts: Vec<_> = p.arguments.iter().map(|a| a.text.as_str()).collect();
        assert_eq!(texts, ["Mary", "the book", "to John"]);
    }

    #[test]
    fn malformed_argument_is_reported() {
        let (p, issues) = decode("give: transfer. [Mary{giver} gave the book");
        assert!(p.arguments.is_empty());
        let k = kinds(&issues);
        assert!(k.contains(&IssueKind::UnbalancedBracket), "{issues:?}");
        assert!(k.contains(&IssueKind::Truncated), "{issues:?}");
        let n = "give: transfer. [Mary{giver} gave the book".chars().count();
        assert!(issues.iter().all(|i| i.position < n));
    }

    #[test]
    fn missing_header() {
        let (p, issues) = decode("Mary <p> gave </p> the book");
        assert_eq!(kinds(&issues), [IssueKind::MissingSenseHeader, IssueKind::StrayMarker]);
        assert_eq!(p.sense_definition, "");
    }

    #[test]
    fn links_and_prefix() {
        let (p, issues) = decode(
            "<propbank><span-srl> help: assist. [Japan]{helper} , [it]{<continuation-of> helper} could [that]{ <reference-to> time or duration}",
        );
        assert!(issues.is_empty(), "{issues:?}");
        assert_eq!(p.predicate_surface, "help");
        let links: Vec<_> = p.arguments.iter().map(|a| a.link).collect();
        assert_eq!(links, [Link::None, Link::ContinuationOf, Link::ReferenceTo]);
        assert_eq!(p.arguments[2].definition, "time or duration");
    }

    #[test]
    fn nested_brackets_are_rejected() {
        let (p, issues) = decode("x: y. [a [b]{r} c]{s}");
        assert_eq!(p.arguments.len(), 1);
        assert_eq!(p.arguments[0].text, "b");
        assert!(kinds(&issues).contains(&IssueKind::UnbalancedBracket));
    }

    #[test]
    fn escaped_characters_survive() {
        let (p, issues) = decode(r"x\:y: one\. two.. [\[a\]]{role \{x\}} tail");
        assert!(issues.is_empty(), "{issues:?}");
        assert_eq!(p.predicate_surface, "x:y");
        assert_eq!(p.sense_definition, "one. two.");
        assert_eq!(p.arguments[0].text, "[a]");
        assert_eq!(p.arguments[0].definition, "role {x}");
    }

    #[test]
    fn alignment_prefers_surface_position() {
        let s = Sentence::new("s", None, "the cat saw the dog".split(' ').map(String::from).collect())
            .unwrap();
        let seq = DescriptionSequence::new("see: perceive. the cat saw [the]{thing seen} dog").unwrap();
        let (p, issues) = decode_description(&seq, Some(&s));
        assert!(issues.is_empty());
        assert_eq!(p.arguments[0].span, Some(TokenRange { start: 3, end: 3 }));

        let seq = DescriptionSequence::new("see: perceive. [the cat]{viewer} saw [the cow]{x}").unwrap();
        let (p, issues) = decode_description(&seq, Some(&s));
        assert_eq!(p.arguments[0].span, Some(TokenRange { start: 0, end: 1 }));
        assert_eq!(p.arguments[1].span, None);
        assert_eq!(kinds(&issues), [IssueKind::UnalignableArgument]);
    }

    #[test]
    fn misplaced_argument_falls_back_to_leftmost_unused() {
        let s = Sentence::new("s", None, "a b a b".split(' ').map(String::from).collect()).unwrap();
        let seq = DescriptionSequence::new("v: d. [a]{x} [a]{y}").unwrap();
        let (p, _) = decode_description(&seq, Some(&s));
        assert_eq!(p.arguments[0].span, Some(TokenRange { start: 0, end: 0 }));
        assert_eq!(p.arguments[1].span, Some(TokenRange { start: 2, end: 2 }));
    }

    #[test]
    fn weird_inputs_do_not_panic() {
        for s in ["[", "]", "{", "}", "\\", "x: y.", ": .", "[]{}", "<p", "<propbank><dep-srl>", "é[ü{", "a: b. [c]"] {
            let (_, issues) = decode(s);
            let n = s.chars().count();
            assert!(issues.iter().all(|i| i.position < n), "{s}: {issues:?}");
        }
    }
}
