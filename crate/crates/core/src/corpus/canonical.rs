//! Record-per-line interchange format. Corpora in formats without a native
//! reader (CoNLL-2012, FrameNet) are expected to arrive converted to this.

use serde::{Deserialize, Serialize};

use super::{
    compare_sentence_ids, AnnotatedStructure, Argument, Corpus, Formalism, Link,
    PredicateInstance, Sentence, Style, TokenRange,
};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    doc_id: String,
    sentence_id: String,
    tokens: Vec<String>,
    structures: Vec<StructureRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureRecord {
    predicate: PredicateRecord,
    formalism: Formalism,
    arguments: Vec<ArgumentRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateRecord {
    start: usize,
    end: usize,
    lemma: String,
    sense: Option<String>,
    style: Style,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArgumentRecord {
    start: usize,
    end: usize,
    role: String,
    link: Link,
}

pub fn parse_canonical(text: &str) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut structures = Vec::new();
    for (record_index, (line_no, line)) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .enumerate()
    {
        let line_no = line_no + 1;
        let record: Record = serde_json::from_str(line).map_err(|e| {
            Error::format(line_no, format!("record {record_index}: {e}"))
        })?;
        let at = |e: Error| match e {
            Error::Invariant(m) => Error::Invariant(format!("record {record_index}: {m}")),
            other => other,
        };
        let doc_id = (!record.doc_id.is_empty()).then_some(record.doc_id);
        let sentence = Sentence::new(record.sentence_id, doc_id, record.tokens).map_err(at)?;
        for st in record.structures {
            let p = st.predicate;
            let predicate = PredicateInstance {
                sentence_ref: sentence.sentence_id().to_string(),
                range: TokenRange::new(p.start, p.end).map_err(at)?,
                lemma: p.lemma,
                sense_label: p.sense,
                style: p.style,
            };
            let arguments = st
                .arguments
                .into_iter()
                .map(|a| {
                    Ok(Argument::new(
                        TokenRange::new(a.start, a.end)?,
                        a.role,
                        a.link,
                    ))
                })
                .collect::<Result<Vec<_>>>()
                .map_err(at)?;
            let structure =
                AnnotatedStructure::new(predicate, arguments, st.formalism).map_err(at)?;
            if structure.max_index() >= sentence.len() {
                return Err(Error::Invariant(format!(
                    "record {record_index}: structure for predicate {} exceeds sentence length {}",
                    structure.predicate().range,
                    sentence.len()
                )));
            }
            structures.push(structure);
        }
        sentences.push(sentence);
    }
    Corpus::new(sentences, structures, "canonical")
}

/// Serializes a corpus; records are ordered by (doc id, sentence id) and
/// structures by predicate start, so output is independent of input order.
pub fn write_canonical(corpus: &Corpus) -> String {
    let mut order: Vec<&Sentence> = corpus.sentences().iter().collect();
    order.sort_by(|a, b| {
        a.doc_id()
            .unwrap_or("")
            .cmp(b.doc_id().unwrap_or(""))
            .then_with(|| compare_sentence_ids(a.sentence_id(), b.sentence_id()))
    });

    let mut out = String::new();
    for sentence in order {
        let mut owned: Vec<&AnnotatedStructure> = corpus
            .structures()
            .iter()
            .filter(|s| s.sentence_ref() == sentence.sentence_id())
            .collect();
        owned.sort_by_key(|s| (s.predicate().range.start, s.predicate().range.end));
        let record = Record {
            doc_id: sentence.doc_id().unwrap_or("").to_string(),
            sentence_id: sentence.sentence_id().to_string(),
            tokens: sentence.tokens().to_vec(),
            structures: owned
                .into_iter()
                .map(|s| StructureRecord {
                    predicate: PredicateRecord {
                        start: s.predicate().range.start,
                        end: s.predicate().range.end,
                        lemma: s.predicate().lemma.clone(),
                        sense: s.predicate().sense_label.clone(),
                        style: s.predicate().style,
                    },
                    formalism: s.formalism(),
                    arguments: s
                        .arguments()
                        .iter()
                        .map(|a| ArgumentRecord {
                            start: a.span.start,
                            end: a.span.end,
                            role: a.role_label.clone(),
                            link: a.link,
                        })
                        .collect(),
                })
                .collect(),
        };
        out.push_str(&serde_json::to_string(&record).expect("records always serialize"));
        out.push('\n');
    }
    out
}
