use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::Corpus;
use crate::codec::encode_target;
use crate::inventory::Inventory;

/// Summary counts for a corpus, optionally against an inventory.
///
/// Roles are counted with their link prefix (`R-A0` and `A0` are distinct).
/// Target lengths are in characters and exclude any style prefix; structures
/// that cannot be encoded (missing sense or role definitions) are counted in
/// `unencodable` and left out of the average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub sentences: usize,
    pub distinct_sentences: usize,
    pub annotated_sentences: usize,
    pub avg_sentence_length: Option<f64>,
    pub predicates: usize,
    pub distinct_senses: usize,
    pub arguments: usize,
    pub distinct_roles: usize,
    pub avg_target_length: Option<f64>,
    pub unencodable: usize,
    pub distinct_sense_definitions: Option<usize>,
    pub avg_sense_definition_length: Option<f64>,
    pub distinct_role_definitions: Option<usize>,
    pub avg_role_definition_length: Option<f64>,
}

fn mean(total: usize, n: usize) -> Option<f64> {
    (n > 0).then(|| total as f64 / n as f64)
}

fn mean_chars<'a>(texts: impl IntoIterator<Item = &'a str>) -> Option<f64> {
    let (total, n) = texts
        .into_iter()
        .fold((0, 0), |(t, n), s| (t + s.chars().count(), n + 1));
    mean(total, n)
}

pub fn corpus_stats(corpus: &Corpus, inv: Option<&Inventory>) -> StatsReport {
    let sentences = corpus.sentences();
    let distinct_sentences = sentences
        .iter()
        .map(|s| s.tokens())
        .collect::<BTreeSet<_>>()
        .len();
    let annotated = corpus
        .structures()
        .iter()
        .map(|st| st.sentence_ref())
        .collect::<BTreeSet<_>>()
        .len();
    let tokens: usize = sentences.iter().map(|s| s.len()).sum();

    let senses: BTreeSet<(String, &str)> = corpus
        .structures()
        .iter()
        .filter_map(|st| {
            let p = st.predicate();
            p.sense_label.as_deref().map(|s| (p.lemma.to_lowercase(), s))
        })
        .collect();
    let roles: BTreeSet<String> = corpus
        .structures()
        .iter()
        .flat_map(|st| st.arguments().iter().map(|a| a.full_label()))
        .collect();
    let arguments = corpus.structures().iter().map(|st| st.arguments().len()).sum();

    let mut report = StatsReport {
        sentences: sentences.len(),
        distinct_sentences,
        annotated_sentences: annotated,
        avg_sentence_length: mean(tokens, sentences.len()),
        predicates: corpus.structures().len(),
        distinct_senses: senses.len(),
        arguments,
        distinct_roles: roles.len(),
        avg_target_length: None,
        unencodable: 0,
        distinct_sense_definitions: None,
        avg_sense_definition_length: None,
        distinct_role_definitions: None,
        avg_role_definition_length: None,
    };

    let Some(inv) = inv else {
        return report;
    };
    let mut target_chars = 0;
    let mut encoded = 0;
    let mut sense_defs = BTreeSet::new();
    let mut role_defs = BTreeSet::new();
    for st in corpus.structures() {
        match encode_target(st, corpus.sentence_of(st), inv, None) {
            Ok(seq) => {
                target_chars += seq.surface().chars().count();
                encoded += 1;
            }
            Err(_) => report.unencodable += 1,
        }
        let p = st.predicate();
        if let Some(entry) = p.sense_label.as_deref().and_then(|s| inv.resolve_sense(&p.lemma, s)) {
            sense_defs.insert(entry.definition.as_str());
            for a in st.arguments() {
                if let Some(d) = inv.role_definition(entry, &a.role_label) {
                    role_defs.insert(d);
                }
            }
        }
    }
    report.avg_target_length = mean(target_chars, encoded);
    report.distinct_sense_definitions = Some(sense_defs.len());
    report.avg_sense_definition_length = mean_chars(sense_defs.iter().copied());
    report.distinct_role_definitions = Some(role_defs.len());
    report.avg_role_definition_length = mean_chars(role_defs.iter().copied());
    report
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn opt_f(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("sentences", self.sentences.to_string()),
            ("distinct sentences", self.distinct_sentences.to_string()),
            ("annotated sentences", self.annotated_sentences.to_string()),
            ("avg sentence length", opt_f(self.avg_sentence_length)),
            ("predicates", self.predicates.to_string()),
            ("distinct senses", self.distinct_senses.to_string()),
            ("arguments", self.arguments.to_string()),
            ("distinct roles", self.distinct_roles.to_string()),
            ("avg target length", opt_f(self.avg_target_length)),
            ("unencodable structures", self.unencodable.to_string()),
            ("distinct sense definitions", opt(self.distinct_sense_definitions)),
            ("avg sense definition length", opt_f(self.avg_sense_definition_length)),
            ("distinct role definitions", opt(self.distinct_role_definitions)),
            ("avg role definition length", opt_f(self.avg_role_definition_length)),
        ];
        for (name, value) in rows {
            writeln!(f, "{name:<28} {value}")?;
        }
        Ok(())
    }
}
