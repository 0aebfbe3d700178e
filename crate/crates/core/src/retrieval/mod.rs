//! Casting generated definitions back to discrete inventory labels: the
//! label whose inventory definition is most similar to the generated one.

mod builtin;
mod embedding;
mod remote;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::codec::ParsedStructure;
use crate::error::{Error, Result};
use crate::inventory::Inventory;

pub use builtin::{embed_builtin, fnv1a64, normalize_text, trigrams, BuiltinEmbedder, BUILTIN_DIMENSION};
pub use embedding::{cosine, Embedder, EmbeddingVector};
pub use remote::RemoteEmbedder;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub label: Option<String>,
    pub score: f64,
    pub runner_up: Option<(String, f64)>,
}

impl RetrievalResult {
    fn absent() -> Self {
        RetrievalResult {
            label: None,
            score: 0.0,
            runner_up: None,
        }
    }
}

/// Wraps an embedder with a per-text memo, so inventory definitions are
/// embedded once however many predictions are cast against them.
pub struct CachedEmbedder<'a> {
    inner: &'a dyn Embedder,
    cache: Mutex<HashMap<String, EmbeddingVector>>,
}

impl<'a> CachedEmbedder<'a> {
    pub fn new(inner: &'a dyn Embedder) -> Self {
        CachedEmbedder {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl Embedder for CachedEmbedder<'_> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>> {
        let missing: Vec<&str> = {
            let cache = self.cache.lock().expect("embedding cache poisoned");
            let mut seen = std::collections::HashSet::new();
            texts
                .iter()
                .copied()
                .filter(|t| !cache.contains_key(*t) && seen.insert(*t))
                .collect()
        };
        if !missing.is_empty() {
            let vectors = self.inner.embed_batch(&missing)?;
            let mut cache = self.cache.lock().expect("embedding cache poisoned");
            for (t, v) in missing.into_iter().zip(vectors) {
                cache.insert(t.to_string(), v);
            }
        }
        let cache = self.cache.lock().expect("embedding cache poisoned");
        Ok(texts.iter().map(|t| cache[*t].clone()).collect())
    }
}

/// Picks the candidate label whose definition embeds closest (cosine) to
/// `generated`. Ties go to the lexicographically smallest label.
pub fn retrieve_label(
    candidates: &BTreeMap<String, String>,
    generated: &str,
    embedder: &dyn Embedder,
) -> Result<RetrievalResult> {
    if candidates.is_empty() {
        return Err(Error::Contract("label retrieval needs at least one candidate".into()));
    }
    let mut texts: Vec<&str> = candidates.values().map(String::as_str).collect();
    texts.push(generated);
    let mut vectors = embedder.embed_batch(&texts)?;
    let query = vectors.pop().expect("query vector present");

    let mut scored: Vec<(&str, f64)> = Vec::with_capacity(candidates.len());
    for (label, vector) in candidates.keys().zip(&vectors) {
        scored.push((label, cosine(vector, &query)?));
    }
    // BTreeMap order is ascending by label, so a stable sort keeps the
    // smallest label first among equal scores.
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(RetrievalResult {
        label: Some(scored[0].0.to_string()),
        score: scored[0].1,
        runner_up: scored.get(1).map(|(l, s)| (l.to_string(), *s)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CastResult {
    /// Absent when the lemma has no inventory entry.
    pub sense: Option<RetrievalResult>,
    /// One result per parsed argument; absent when the sense is absent.
    pub roles: Option<Vec<RetrievalResult>>,
}

impl CastResult {
    pub fn sense_label(&self) -> Option<&str> {
        self.sense.as_ref().and_then(|r| r.label.as_deref())
    }

    pub fn role_labels(&self) -> Vec<Option<&str>> {
        match &self.roles {
            Some(roles) => roles.iter().map(|r| r.label.as_deref()).collect(),
            None => Vec::new(),
        }
    }
}

/// Casts a parsed description to a sense label and per-argument role labels.
///
/// The sense is retrieved among the lemma's inventory senses; each role
/// among the chosen sense's core roles merged with the modifier table.
pub fn cast_structure(
    parsed: &ParsedStructure,
    lemma: &str,
    inv: &Inventory,
    embedder: &dyn Embedder,
) -> Result<CastResult> {
    let senses = inv.candidate_senses(lemma);
    if senses.is_empty() {
        return Ok(CastResult {
            sense: None,
            roles: None,
        });
    }
    let sense_candidates: BTreeMap<String, String> = senses
        .iter()
        .map(|e| (e.sense_id.clone(), e.definition.clone()))
        .collect();
    let sense = retrieve_label(&sense_candidates, &parsed.sense_definition, embedder)?;
    let winner = sense.label.as_deref().expect("non-empty candidates yield a label");
    let entry = senses
        .iter()
        .find(|e| e.sense_id == winner)
        .expect("winner is a candidate");

    let role_candidates = inv.role_candidates(entry);
    let roles = parsed
        .arguments
        .iter()
        .map(|arg| {
            if role_candidates.is_empty() {
                Ok(RetrievalResult::absent())
            } else {
                retrieve_label(&role_candidates, &arg.definition, embedder)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CastResult {
        sense: Some(sense),
        roles: Some(roles),
    })
}
