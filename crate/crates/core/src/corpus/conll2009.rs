//! CoNLL-2009 column format.
//!
//! Column layout (1-based): ID, FORM, LEMMA, PLEMMA, POS, PPOS, FEAT, PFEAT,
//! HEAD, PHEAD, DEPREL, PDEPREL, FILLPRED, PRED, then one APRED column per
//! predicate of the sentence. Syntactic columns are read and discarded.

use super::{
    parse_role_label, AnnotatedStructure, Argument, Corpus, Formalism, PredicateInstance,
    Sentence, Style, TokenRange,
};
use crate::error::{Error, Result};

const FIXED_COLUMNS: usize = 14;
const FORM: usize = 1;
const LEMMA: usize = 2;
const PLEMMA: usize = 3;
const FILLPRED: usize = 12;
const PRED: usize = 13;

const NULL: &str = "_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OfficialFormat {
    Conll2009,
}

struct Row<'a> {
    line: usize,
    cols: Vec<&'a str>,
}

pub fn parse_conll2009(text: &str) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut structures = Vec::new();
    let mut block: Vec<Row> = Vec::new();

    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    for (line_no, raw) in lines.chain(std::iter::once((0, ""))) {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !block.is_empty() {
                let id = (sentences.len() + 1).to_string();
                let (sentence, mut found) = read_sentence(&id, &block)?;
                sentences.push(sentence);
                structures.append(&mut found);
                block.clear();
            }
            continue;
        }
        block.push(Row {
            line: line_no,
            cols: line.split('\t').collect(),
        });
    }
    Corpus::new(sentences, structures, "conll2009")
}

fn read_sentence(id: &str, rows: &[Row]) -> Result<(Sentence, Vec<AnnotatedStructure>)> {
    let width = rows[0].cols.len();
    if width < FIXED_COLUMNS {
        return Err(Error::format(
            rows[0].line,
            format!("expected at least {FIXED_COLUMNS} columns, found {width}"),
        ));
    }
    if let Some(bad) = rows.iter().find(|r| r.cols.len() != width) {
        return Err(Error::format(
            bad.line,
            format!(
                "ragged row: {} columns where the sentence has {width}",
                bad.cols.len()
            ),
        ));
    }

    let predicate_rows: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.cols[FILLPRED] == "Y")
        .map(|(i, _)| i)
        .collect();
    let apreds = width - FIXED_COLUMNS;
    if apreds != predicate_rows.len() {
        return Err(Error::format(
            rows[0].line,
            format!(
                "sentence has {} predicates but {apreds} argument columns",
                predicate_rows.len()
            ),
        ));
    }

    let tokens = rows.iter().map(|r| r.cols[FORM].to_string()).collect();
    let sentence = Sentence::new(id, None, tokens).map_err(|e| match e {
        Error::Invariant(m) => Error::format(rows[0].line, m),
        other => other,
    })?;

    let mut structures = Vec::with_capacity(predicate_rows.len());
    for (k, &pi) in predicate_rows.iter().enumerate() {
        let row = &rows[pi];
        let lemma = [PLEMMA, LEMMA, FORM]
            .iter()
            .map(|&c| row.cols[c])
            .find(|v| *v != NULL)
            .unwrap_or(NULL)
            .to_string();
        let sense = row.cols[PRED];
        let predicate = PredicateInstance {
            sentence_ref: id.to_string(),
            range: TokenRange::single(pi),
            lemma,
            sense_label: (sense != NULL).then(|| sense.to_string()),
            style: Style::Propbank,
        };
        let arguments = rows
            .iter()
            .enumerate()
            .filter_map(|(ti, r)| {
                let label = r.cols[FIXED_COLUMNS + k];
                (label != NULL).then(|| {
                    let (role, link) = parse_role_label(label);
                    Argument::new(TokenRange::single(ti), role, link)
                })
            })
            .collect();
        let structure = AnnotatedStructure::new(predicate, arguments, Formalism::Dependency)
            .map_err(|e| match e {
                Error::Invariant(m) => Error::format(row.line, m),
                other => other,
            })?;
        structures.push(structure);
    }
    Ok((sentence, structures))
}

/// Writes a dependency-formalism corpus in the column layout consumed by the
/// official CoNLL-2009 scorer. Columns the corpus does not model are `_`.
pub fn export_official(corpus: &Corpus, format: OfficialFormat) -> Result<String> {
    match format {
        OfficialFormat::Conll2009 => export_conll2009(corpus),
    }
}

fn export_conll2009(corpus: &Corpus) -> Result<String> {
    let mut out = String::new();
    for sentence in corpus.sentences() {
        let mut structures: Vec<&AnnotatedStructure> = corpus
            .structures()
            .iter()
            .filter(|s| s.sentence_ref() == sentence.sentence_id())
            .collect();
        structures.sort_by_key(|s| s.predicate().range.start);
        for st in &structures {
            if st.formalism() != Formalism::Dependency {
                return Err(Error::Contract(format!(
                    "sentence `{}`: CoNLL-2009 export needs dependency structures",
                    sentence.sentence_id()
                )));
            }
            if st.predicate().range.len() != 1 {
                return Err(Error::Contract(format!(
                    "sentence `{}`: multiword predicate {} cannot be written as CoNLL-2009",
                    sentence.sentence_id(),
                    st.predicate().range
                )));
            }
        }

        for (ti, form) in sentence.tokens().iter().enumerate() {
            let pred = structures.iter().find(|s| s.predicate().range.start == ti);
            let lemma = pred.map_or(NULL, |p| p.predicate().lemma.as_str());
            let mut cols: Vec<String> = vec![
                (ti + 1).to_string(),
                form.clone(),
                lemma.to_string(),
                lemma.to_string(),
            ];
            cols.extend(std::iter::repeat_n(NULL.to_string(), 8));
            match pred {
                Some(p) => {
                    cols.push("Y".into());
                    cols.push(
                        p.predicate()
                            .sense_label
                            .clone()
                            .unwrap_or_else(|| NULL.into()),
                    );
                }
                None => {
                    cols.push(NULL.into());
                    cols.push(NULL.into());
                }
            }
            for st in &structures {
                let label = st
                    .arguments()
                    .iter()
                    .find(|a| a.span.start == ti)
                    .map(|a| a.full_label())
                    .unwrap_or_else(|| NULL.into());
                cols.push(label);
            }
            out.push_str(&cols.join("\t"));
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}
