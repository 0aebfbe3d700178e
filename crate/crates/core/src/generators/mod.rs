//! Producers of description sequences, one per structure of a corpus.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analysis::SenseCounts;
use crate::codec::{encode_input, encode_target, sentence_body, DescriptionSequence, StylePrefix};
use crate::corpus::{Corpus, PredicateInstance, Sentence};
use crate::error::{Error, Result};
use crate::inventory::{Inventory, SenseEntry};
use crate::remote::Client;

/// Sense definition emitted for predicates outside the inventory.
pub const UNKNOWN_SENSE: &str = "unknown";

pub trait Generator: Send + Sync {
    fn name(&self) -> &str;

    /// One sequence per structure of `corpus`, in corpus order.
    fn generate(&self, corpus: &Corpus, prefix: Option<StylePrefix>) -> Result<Vec<DescriptionSequence>>;
}

/// Emits the gold target of every structure: an upper bound for the pipeline.
pub struct GoldOracle {
    inventory: Arc<Inventory>,
}

impl GoldOracle {
    pub fn new(inventory: Arc<Inventory>) -> Self {
        GoldOracle { inventory }
    }
}

pub fn gold_oracle_generate(
    corpus: &Corpus,
    inv: &Inventory,
    prefix: Option<StylePrefix>,
) -> Result<Vec<DescriptionSequence>> {
    corpus
        .structures()
        .iter()
        .map(|st| encode_target(st, corpus.sentence_of(st), inv, prefix))
        .collect()
}

impl Generator for GoldOracle {
    fn name(&self) -> &str {
        "gold"
    }

    fn generate(&self, corpus: &Corpus, prefix: Option<StylePrefix>) -> Result<Vec<DescriptionSequence>> {
        gold_oracle_generate(corpus, &self.inventory, prefix)
    }
}

/// The lemma's most frequent training sense among its inventory senses;
/// ties and unseen lemmas fall back to the smallest sense id.
pub fn most_frequent_sense<'a>(counts: &SenseCounts, lemma: &str, inv: &'a Inventory) -> Option<&'a SenseEntry> {
    let candidates = inv.candidate_senses(lemma);
    let mut best: Option<(&SenseEntry, u64)> = None;
    for entry in &candidates {
        let n = counts.count(lemma, &entry.sense_id);
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((entry, n));
        }
    }
    best.map(|(e, _)| e)
}

/// Header with the most frequent sense's definition followed by the plain
/// sentence. No arguments are predicted.
pub fn mfs_baseline_generate(
    sentence: &Sentence,
    pred: &PredicateInstance,
    counts: &SenseCounts,
    inv: &Inventory,
) -> DescriptionSequence {
    let definition = most_frequent_sense(counts, &pred.lemma, inv)
        .map_or(UNKNOWN_SENSE, |e| e.definition.as_str());
    let surface = format!(
        "{} {}",
        crate::codec::render_header(&pred.lemma, definition),
        sentence_body(sentence, &[])
    );
    DescriptionSequence::new(surface).expect("header is never empty")
}

pub struct MfsBaseline {
    inventory: Arc<Inventory>,
    counts: SenseCounts,
}

impl MfsBaseline {
    pub fn new(inventory: Arc<Inventory>, counts: SenseCounts) -> Self {
        MfsBaseline { inventory, counts }
    }
}

impl Generator for MfsBaseline {
    fn name(&self) -> &str {
        "mfs"
    }

    fn generate(&self, corpus: &Corpus, prefix: Option<StylePrefix>) -> Result<Vec<DescriptionSequence>> {
        corpus
            .structures()
            .iter()
            .map(|st| {
                let seq = mfs_baseline_generate(corpus.sentence_of(st), st.predicate(), &self.counts, &self.inventory);
                match prefix {
                    Some(p) => DescriptionSequence::new(format!("{p} {}", seq.surface())),
                    None => Ok(seq),
                }
            })
            .collect()
    }
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    inputs: &'a [String],
    prefix: Option<StylePrefix>,
}

#[derive(Deserialize)]
struct GenerateResponse {
    outputs: Vec<String>,
}

pub const DEFAULT_GENERATE_BATCH: usize = 32;

/// Sends encoded inputs to `POST /generate` in batches; outputs are returned
/// verbatim, in input order.
pub fn remote_generate(
    client: &Client,
    inputs: &[String],
    prefix: Option<StylePrefix>,
    batch_size: usize,
) -> Result<Vec<DescriptionSequence>> {
    let batch_size = batch_size.max(1);
    let mut out = Vec::with_capacity(inputs.len());
    for (b, chunk) in inputs.chunks(batch_size).enumerate() {
        let lo = b * batch_size;
        let hi = lo + chunk.len();
        let resp: GenerateResponse = client
            .post("/generate", &GenerateRequest { inputs: chunk, prefix })
            .map_err(|e| match e {
                Error::Backend(m) => Error::Backend(format!("generate inputs {lo}..{hi}: {m}")),
                Error::Protocol(m) => Error::Protocol(format!("generate inputs {lo}..{hi}: {m}")),
                other => other,
            })?;
        if resp.outputs.len() != chunk.len() {
            return Err(Error::Protocol(format!(
                "generate inputs {lo}..{hi}: sent {} inputs, received {} outputs",
                chunk.len(),
                resp.outputs.len()
            )));
        }
        for (i, text) in resp.outputs.into_iter().enumerate() {
            let seq = DescriptionSequence::new(text)
                .map_err(|_| Error::Protocol(format!("generate: empty output for input {}", lo + i)))?;
            out.push(seq);
        }
    }
    Ok(out)
}

pub struct RemoteGenerator {
    client: Client,
    batch_size: usize,
}

impl RemoteGenerator {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteGenerator {
            client: Client::new(endpoint),
            batch_size: DEFAULT_GENERATE_BATCH,
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size;
        self
    }
}

impl Generator for RemoteGenerator {
    fn name(&self) -> &str {
        "remote"
    }

    fn generate(&self, corpus: &Corpus, prefix: Option<StylePrefix>) -> Result<Vec<DescriptionSequence>> {
        let inputs = corpus
            .structures()
            .iter()
            .map(|st| encode_input(corpus.sentence_of(st), st.predicate()))
            .collect::<Result<Vec<_>>>()?;
        remote_generate(&self.client, &inputs, prefix, self.batch_size)
    }
}
