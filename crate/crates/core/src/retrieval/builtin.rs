//! Deterministic hashed character-trigram embedder.
//!
//! Text is lowercased, whitespace runs are collapsed to one space and the
//! ends trimmed; the result is padded as `^text$`. Every window of three
//! characters is hashed with 64-bit FNV-1a over its UTF-8 bytes
//! (offset basis `0xcbf29ce484222325`, prime `0x100000001b3`) and counted in
//! bucket `hash % 4096`. The count vector is L2-normalized. Text that is
//! empty after normalization maps to the all-zero sentinel.

use super::embedding::{EmbeddingVector, Embedder};
use crate::error::Result;

pub const BUILTIN_DIMENSION: usize = 4096;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

pub fn normalize_text(text: &str) -> String {
    text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Padded trigrams of the normalized text, in order.
pub fn trigrams(text: &str) -> Vec<String> {
    let norm = normalize_text(text);
    if norm.is_empty() {
        return Vec::new();
    }
    let padded: Vec<char> = std::iter::once('^')
        .chain(norm.chars())
        .chain(std::iter::once('$'))
        .collect();
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

pub fn embed_builtin(text: &str) -> EmbeddingVector {
    let grams = trigrams(text);
    let mut counts = vec![0.0; BUILTIN_DIMENSION];
    for g in &grams {
        counts[(fnv1a64(g.as_bytes()) % BUILTIN_DIMENSION as u64) as usize] += 1.0;
    }
    EmbeddingVector::normalized(counts)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinEmbedder;

impl Embedder for BuiltinEmbedder {
    fn name(&self) -> &str {
        "builtin"
    }

    fn dimension(&self) -> usize {
        BUILTIN_DIMENSION
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>> {
        Ok(texts.iter().map(|t| embed_builtin(t)).collect())
    }
}
