use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A unit-norm vector, or the all-zero sentinel produced for empty text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

const UNIT_TOLERANCE: f64 = 1e-3;

impl EmbeddingVector {
    /// L2-normalizes `values`; an all-zero input stays the zero sentinel.
    pub fn normalized(mut values: Vec<f64>) -> Self {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        EmbeddingVector { values }
    }

    /// Accepts an already-normalized vector, e.g. from a remote backend.
    pub fn from_unit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Contract("embedding has dimension 0".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("embedding has non-finite components".into()));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm != 0.0 && (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::Contract(format!("embedding norm {norm} is not 1")));
        }
        Ok(EmbeddingVector { values })
    }

    pub fn zero(dimension: usize) -> Self {
        EmbeddingVector {
            values: vec![0.0; dimension],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn is_sentinel(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

/// Cosine similarity of two unit vectors; 0 when either is the sentinel.
pub fn cosine(u: &EmbeddingVector, v: &EmbeddingVector) -> Result<f64> {
    if u.dimension() != v.dimension() {
        return Err(Error::Contract(format!(
            "cannot compare embeddings of dimension {} and {}",
            u.dimension(),
            v.dimension()
        )));
    }
    if u.is_sentinel() || v.is_sentinel() {
        return Ok(0.0);
    }
    let dot: f64 = u.values.iter().zip(&v.values).map(|(a, b)| a * b).sum();
    Ok(dot.clamp(-1.0, 1.0))
}

/// Text-to-vector backend used for label casting.
pub trait Embedder: Send + Sync {
    fn name(&self) -> &str;

    fn dimension(&self) -> usize;

    /// One vector per text, in input order. Equal texts must embed equally.
    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>>;

    fn embed(&self, text: &str) -> Result<EmbeddingVector> {
        let mut v = self.embed_batch(&[text])?;
        v.pop()
            .ok_or_else(|| Error::Protocol(format!("{} returned no vector", self.name())))
    }
}
