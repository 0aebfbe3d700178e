//! Turning generated description sequences back into a predicted corpus.

use serde::{Deserialize, Serialize};

use crate::codec::{decode_description, DecodeIssue, DescriptionSequence, ParsedStructure};
use crate::corpus::{Argument, AnnotatedStructure, Corpus, Formalism, PredicateInstance, TokenRange};
use crate::error::{Error, Result};
use crate::inventory::Inventory;
use crate::retrieval::{cast_structure, CachedEmbedder, CastResult, Embedder};

/// One decoded (and possibly cast) sequence, tied to the gold predicate it
/// was generated for. This is the record format passed between the
/// `decode`, `cast` and `score` steps of the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub sentence_id: String,
    pub predicate: TokenRange,
    pub lemma: String,
    pub formalism: Formalism,
    pub parsed: ParsedStructure,
    #[serde(default)]
    pub issues: Vec<DecodeIssue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cast: Option<CastResult>,
}

/// Builds the predicted structure for `gold_pred` from a cast description.
///
/// Arguments are kept in order of appearance and dropped when they have no
/// aligned span or no role label, overlap the predicate or an earlier kept
/// argument, or (for dependency structures) span more than one token.
/// Returns the structure and the number of dropped arguments.
pub fn assemble_structure(
    gold_pred: &PredicateInstance,
    parsed: &ParsedStructure,
    cast: &CastResult,
    formalism: Formalism,
) -> Result<(AnnotatedStructure, usize)> {
    let labels = cast.role_labels();
    let mut kept: Vec<Argument> = Vec::new();
    let mut dropped = 0;
    for (i, arg) in parsed.arguments.iter().enumerate() {
        let label = labels.get(i).copied().flatten();
        let span = arg.span.and_then(|r| TokenRange::new(r.start, r.end).ok());
        let usable = match (span, label) {
            (Some(span), Some(label)) => {
                let ok = !span.overlaps(&gold_pred.range)
                    && !(formalism == Formalism::Dependency && span.len() > 1)
                    && kept.iter().all(|k| !k.span.overlaps(&span));
                ok.then(|| Argument::new(span, label, arg.link))
            }
            _ => None,
        };
        match usable {
            Some(a) => kept.push(a),
            None => dropped += 1,
        }
    }
    let predicate = PredicateInstance {
        sense_label: cast.sense_label().map(String::from),
        ..gold_pred.clone()
    };
    Ok((AnnotatedStructure::new(predicate, kept, formalism)?, dropped))
}

/// Predicted corpus plus the decode issues, indexed by structure.
#[derive(Debug)]
pub struct Prediction {
    pub corpus: Corpus,
    pub records: Vec<PredictionRecord>,
    pub dropped_arguments: usize,
}

impl Prediction {
    pub fn issue_count(&self) -> usize {
        self.records.iter().map(|r| r.issues.len()).sum()
    }
}

/// Decodes one sequence per gold structure (aligned against the gold
/// sentence) without casting.
pub fn decode_corpus(gold: &Corpus, sequences: &[DescriptionSequence]) -> Result<Vec<PredictionRecord>> {
    if sequences.len() != gold.structures().len() {
        return Err(Error::Contract(format!(
            "{} sequences for {} structures",
            sequences.len(),
            gold.structures().len()
        )));
    }
    Ok(gold
        .structures()
        .iter()
        .zip(sequences)
        .map(|(st, seq)| {
            let (parsed, issues) = decode_description(seq, Some(gold.sentence_of(st)));
            PredictionRecord {
                sentence_id: st.sentence_ref().to_string(),
                predicate: st.predicate().range,
                lemma: st.predicate().lemma.clone(),
                formalism: st.formalism(),
                parsed,
                issues,
                cast: None,
            }
        })
        .collect())
}

/// Fills in the `cast` field of every record.
pub fn cast_records(records: &mut [PredictionRecord], inv: &Inventory, embedder: &dyn Embedder) -> Result<()> {
    let cached = CachedEmbedder::new(embedder);
    for r in records {
        r.cast = Some(cast_structure(&r.parsed, &r.lemma, inv, &cached)?);
    }
    Ok(())
}

/// Builds the predicted corpus from cast records. Every record must refer
/// to a gold structure; gold structures without a record get no prediction.
pub fn assemble_corpus(gold: &Corpus, records: &[PredictionRecord]) -> Result<(Corpus, usize)> {
    let mut structures = Vec::with_capacity(records.len());
    let mut dropped = 0;
    for r in records {
        let gold_st = gold
            .structures()
            .iter()
            .find(|st| st.sentence_ref() == r.sentence_id && st.predicate().range == r.predicate)
            .ok_or_else(|| {
                Error::Alignment(format!(
                    "no gold predicate at {} in sentence `{}`",
                    r.predicate, r.sentence_id
                ))
            })?;
        let cast = r.cast.as_ref().ok_or_else(|| {
            Error::Contract(format!(
                "record for sentence `{}` predicate {} has not been cast",
                r.sentence_id, r.predicate
            ))
        })?;
        let (st, d) = assemble_structure(gold_st.predicate(), &r.parsed, cast, r.formalism)?;
        dropped += d;
        structures.push(st);
    }
    let corpus = Corpus::new(gold.sentences().to_vec(), structures, format!("predicted from {}", gold.provenance()))?;
    Ok((corpus, dropped))
}

/// Decode, cast and assemble in one step.
pub fn predict_corpus(
    gold: &Corpus,
    sequences: &[DescriptionSequence],
    inv: &Inventory,
    embedder: &dyn Embedder,
) -> Result<Prediction> {
    let mut records = decode_corpus(gold, sequences)?;
    cast_records(&mut records, inv, embedder)?;
    let (corpus, dropped_arguments) = assemble_corpus(gold, &records)?;
    Ok(Prediction {
        corpus,
        records,
        dropped_arguments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Link, Sentence, Style};
    use crate::generators::gold_oracle_generate;
    use crate::inventory::load_inventory;
    use crate::retrieval::BuiltinEmbedder;
    use crate::scorer::{score_dependency, score_span};
    use num_rational::Ratio;

    fn fixture(formalism: Formalism) -> (Corpus, Inventory) {
        let inv = load_inventory(
            r#"{"lemma":"give","sense_id":"give.01","definition":"transfer","roles":{"A0":"giver","A1":"thing given","A2":"entity given to"}}
{"lemma":"give","sense_id":"give.02","definition":"emit a sound","roles":{"A0":"emitter"}}"#,
        )
        .unwrap();
        let s = Sentence::new("1", None, "Mary gave the book to John".split(' ').map(String::from).collect()).unwrap();
        let p = PredicateInstance {
            sentence_ref: "1".into(),
            range: TokenRange::single(1),
            lemma: "give".into(),
            sense_label: Some("give.01".into()),
            style: Style::Propbank,
        };
        let args = match formalism {
            Formalism::Span => vec![
                Argument::new(TokenRange::single(0), "A0", Link::None),
                Argument::new(TokenRange::new(2, 3).unwrap(), "A1", Link::None),
                Argument::new(TokenRange::new(4, 5).unwrap(), "A2", Link::None),
            ],
            Formalism::Dependency => vec![
                Argument::new(TokenRange::single(0), "A0", Link::None),
                Argument::new(TokenRange::single(3), "A1", Link::None),
                Argument::new(TokenRange::single(4), "A2", Link::None),
            ],
        };
        let st = AnnotatedStructure::new(p, args, formalism).unwrap();
        (Corpus::new(vec![s], vec![st], "fixture").unwrap(), inv)
    }

    #[test]
    fn gold_round_trip_is_perfect() {
        for (formalism, score) in [
            (Formalism::Span, score_span as fn(&Corpus, &Corpus) -> Result<_>),
            (Formalism::Dependency, score_dependency),
        ] {
            let (gold, inv) = fixture(formalism);
            let seqs = gold_oracle_generate(&gold, &inv, None).unwrap();
            let pred = predict_corpus(&gold, &seqs, &inv, &BuiltinEmbedder).unwrap();
            assert_eq!(pred.issue_count(), 0);
            assert_eq!(pred.corpus, gold);
            assert_eq!(score(&gold, &pred.corpus).unwrap().f1(), Ratio::from_integer(1));
        }
    }

    #[test]
    fn unusable_arguments_are_dropped() {
        let (gold, inv) = fixture(Formalism::Dependency);
        let seq = DescriptionSequence::new(
            "give: transfer. [Mary gave]{giver} gave [the book]{thing given} to [Bob]{entity given to}",
        )
        .unwrap();
        let pred = predict_corpus(&gold, &[seq], &inv, &BuiltinEmbedder).unwrap();
        assert_eq!(pred.dropped_arguments, 3);
        assert!(pred.corpus.structures()[0].arguments().is_empty());
        assert_eq!(pred.corpus.structures()[0].predicate().sense_label.as_deref(), Some("give.01"));
    }

    #[test]
    fn sequence_count_must_match() {
        let (gold, inv) = fixture(Formalism::Span);
        let err = predict_corpus(&gold, &[], &inv, &BuiltinEmbedder).unwrap_err();
        assert_eq!(err.category(), "contract");
    }
}
