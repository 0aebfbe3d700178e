//! Labeled precision/recall/F1 over predicate-sense and argument items.
//!
//! Every scorer compares structures matched on (sentence id, predicate
//! range). A predicate contributes one sense item when it carries a sense
//! label; every argument contributes one item keyed by its position and full
//! role label (link prefix included, as in `R-A0`).
//!
//! - `dep`: arguments keyed by head token.
//! - `span`: arguments keyed by exact span boundaries.
//! - `framenet`: like `span`, but an argument is only correct when its
//!   predicate's frame label equals the gold one. This is an exact-match stand-in for
//!   the official partial-credit FrameNet scorer.

mod report;

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{AnnotatedStructure, Corpus, TokenRange};
use crate::error::{Error, Result};

pub use crate::corpus::{export_official, OfficialFormat};
pub use report::{as_f64, percent, Counts, ItemKind, ScoreReport};

pub trait Scorer: Send + Sync {
    fn name(&self) -> &str;

    fn score(&self, gold: &Corpus, pred: &Corpus) -> Result<ScoreReport>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DependencyScorer;

#[derive(Debug, Clone, Copy, Default)]
pub struct SpanScorer;

#[derive(Debug, Clone, Copy, Default)]
pub struct FrameNetScorer;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ArgKey {
    Head,
    Span,
}

type Key<'a> = (&'a str, TokenRange);

/// Checks that both corpora hold the same sentences with the same lengths.
pub fn check_alignment(gold: &Corpus, pred: &Corpus) -> Result<()> {
    let gold_ids: BTreeSet<&str> = gold.sentences().iter().map(|s| s.sentence_id()).collect();
    let pred_ids: BTreeSet<&str> = pred.sentences().iter().map(|s| s.sentence_id()).collect();
    if let Some(id) = pred_ids.difference(&gold_ids).next() {
        return Err(Error::Alignment(format!(
            "predicted sentence `{id}` is not in the gold corpus"
        )));
    }
    if let Some(id) = gold_ids.difference(&pred_ids).next() {
        return Err(Error::Alignment(format!(
            "gold sentence `{id}` is missing from the predictions"
        )));
    }
    for s in gold.sentences() {
        let p = pred.sentence(s.sentence_id()).expect("ids checked");
        if p.len() != s.len() {
            return Err(Error::Alignment(format!(
                "sentence `{}` has {} gold tokens but {} predicted",
                s.sentence_id(),
                s.len(),
                p.len()
            )));
        }
    }
    Ok(())
}

fn by_key(corpus: &Corpus) -> BTreeMap<Key<'_>, &AnnotatedStructure> {
    corpus
        .structures()
        .iter()
        .map(|s| ((s.sentence_ref(), s.predicate().range), s))
        .collect()
}

fn argument_items(st: &AnnotatedStructure, key: ArgKey) -> Result<BTreeSet<(usize, usize, String)>> {
    st.arguments()
        .iter()
        .map(|a| match key {
            ArgKey::Span => Ok((a.span.start, a.span.end, a.full_label())),
            ArgKey::Head if a.span.len() == 1 => Ok((a.span.start, a.span.start, a.full_label())),
            ArgKey::Head => Err(Error::Contract(format!(
                "dependency scoring needs single-token arguments, found span {} in sentence `{}`",
                a.span,
                st.sentence_ref()
            ))),
        })
        .collect()
}

fn score_items(gold: &Corpus, pred: &Corpus, key: ArgKey, frame_gated: bool) -> Result<ScoreReport> {
    check_alignment(gold, pred)?;
    let gold_map = by_key(gold);
    let pred_map = by_key(pred);
    let keys: BTreeSet<&Key> = gold_map.keys().chain(pred_map.keys()).collect();

    let mut sense = Counts::default();
    let mut args = Counts::default();
    for k in keys {
        let g = gold_map.get(k);
        let p = pred_map.get(k);
        let g_sense = g.and_then(|s| s.predicate().sense_label.as_deref());
        let p_sense = p.and_then(|s| s.predicate().sense_label.as_deref());
        sense.gold += u64::from(g_sense.is_some());
        sense.predicted += u64::from(p_sense.is_some());
        let sense_ok = g_sense.is_some() && g_sense == p_sense;
        sense.correct += u64::from(sense_ok);

        let g_args = g.map(|s| argument_items(s, key)).transpose()?.unwrap_or_default();
        let p_args = p.map(|s| argument_items(s, key)).transpose()?.unwrap_or_default();
        args.gold += g_args.len() as u64;
        args.predicted += p_args.len() as u64;
        // an unlabeled gold frame gates on an unlabeled predicted frame
        if !frame_gated || g_sense == p_sense {
            args.correct += g_args.intersection(&p_args).count() as u64;
        }
    }
    Ok(ScoreReport::from_breakdown(sense, args))
}

impl Scorer for DependencyScorer {
    fn name(&self) -> &str {
        "dep"
    }

    fn score(&self, gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
        score_items(gold, pred, ArgKey::Head, false)
    }
}

impl Scorer for SpanScorer {
    fn name(&self) -> &str {
        "span"
    }

    fn score(&self, gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
        score_items(gold, pred, ArgKey::Span, false)
    }
}

impl Scorer for FrameNetScorer {
    fn name(&self) -> &str {
        "framenet"
    }

    fn score(&self, gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
        score_items(gold, pred, ArgKey::Span, true)
    }
}

pub fn score_dependency(gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
    DependencyScorer.score(gold, pred)
}

pub fn score_span(gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
    SpanScorer.score(gold, pred)
}

pub fn score_framenet(gold: &Corpus, pred: &Corpus) -> Result<ScoreReport> {
    FrameNetScorer.score(gold, pred)
}
