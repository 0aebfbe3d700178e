//! Slow, obviously-correct reference implementations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use dsrl::corpus::Corpus;
use num_rational::Ratio;

/// Sparse re-implementation of the hashed trigram embedding.
pub fn embed(text: &str) -> HashMap<u64, f64> {
    let norm = text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ");
    let padded: Vec<char> = format!("^{norm}$").chars().collect();
    let mut counts = HashMap::new();
    if norm.is_empty() {
        return counts;
    }
    for w in padded.windows(3) {
        let s: String = w.iter().collect();
        let mut h: u64 = 0xcbf29ce484222325;
        for b in s.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
        *counts.entry(h % 4096).or_insert(0.0) += 1.0;
    }
    let n = counts.values().map(|v| v * v).sum::<f64>().sqrt();
    counts.values_mut().for_each(|v| *v /= n);
    counts
}

pub fn cosine(a: &HashMap<u64, f64>, b: &HashMap<u64, f64>) -> f64 {
    a.iter().map(|(k, v)| v * b.get(k).unwrap_or(&0.0)).sum()
}

/// Scans every candidate; ties go to the smallest label.
pub fn retrieve<'a>(candidates: &'a BTreeMap<String, String>, query: &str) -> (&'a str, f64) {
    let q = embed(query);
    let mut best: Option<(&str, f64)> = None;
    for (label, def) in candidates {
        let s = cosine(&embed(def), &q);
        if best.is_none_or(|(_, b)| s > b + 1e-12) {
            best = Some((label, s));
        }
    }
    best.unwrap()
}

pub type Item = (String, usize, usize, String, usize, usize, String);

/// Every scorable item as one tuple: (sentence, predicate start, predicate
/// end, kind, argument start, argument end, label).
pub fn items(c: &Corpus, heads_only: bool) -> BTreeSet<Item> {
    let mut out = BTreeSet::new();
    for st in c.structures() {
        let p = st.predicate();
        let (sid, ps, pe) = (st.sentence_ref().to_string(), p.range.start, p.range.end);
        if let Some(s) = &p.sense_label {
            out.insert((sid.clone(), ps, pe, "sense".into(), 0, 0, s.clone()));
        }
        for a in st.arguments() {
            let end = if heads_only { a.span.start } else { a.span.end };
            out.insert((sid.clone(), ps, pe, "arg".into(), a.span.start, end, a.full_label()));
        }
    }
    out
}

/// (correct, predicted, gold) by set intersection. `gated` credits an
/// argument only when both sides agree on the predicate's frame.
pub fn brute(gold: &Corpus, pred: &Corpus, heads_only: bool, gated: bool) -> (u64, u64, u64) {
    let g = items(gold, heads_only);
    let p = items(pred, heads_only);
    let frame = |c: &Corpus, i: &Item| {
        c.structures()
            .iter()
            .find(|st| st.sentence_ref() == i.0 && st.predicate().range.start == i.1)
            .and_then(|st| st.predicate().sense_label.clone())
    };
    let correct = g
        .intersection(&p)
        .filter(|i| !gated || i.3 == "sense" || frame(gold, i) == frame(pred, i))
        .count();
    (correct as u64, p.len() as u64, g.len() as u64)
}

pub fn prf(correct: u64, predicted: u64, gold: u64) -> (Ratio<u64>, Ratio<u64>, Ratio<u64>) {
    let p = if predicted == 0 { Ratio::from_integer(1) } else { Ratio::new(correct, predicted) };
    let r = if gold == 0 { Ratio::from_integer(1) } else { Ratio::new(correct, gold) };
    let f = if p + r == Ratio::from_integer(0) {
        Ratio::from_integer(0)
    } else {
        Ratio::from_integer(2) * p * r / (p + r)
    };
    (p, r, f)
}
