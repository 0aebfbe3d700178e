use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::embedding::{EmbeddingVector, Embedder};
use crate::error::{Error, Result};
use crate::remote::Client;

#[derive(Serialize)]
struct EmbedRequest<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedResponse {
    dimension: usize,
    vectors: Vec<Vec<f64>>,
}

/// Embedder backed by a service speaking `POST /embed`.
#[derive(Debug)]
pub struct RemoteEmbedder {
    client: Client,
    batch_size: usize,
    dimension: OnceLock<usize>,
}

impl RemoteEmbedder {
    pub fn new(endpoint: impl Into<String>) -> Self {
        RemoteEmbedder {
            client: Client::new(endpoint),
            batch_size: 64,
            dimension: OnceLock::new(),
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }

    fn request(&self, batch_index: usize, texts: &[&str]) -> Result<Vec<EmbeddingVector>> {
        let resp: EmbedResponse = self
            .client
            .post("/embed", &EmbedRequest { texts })
            .map_err(|e| match e {
                Error::Backend(m) => Error::Backend(format!("embed batch {batch_index}: {m}")),
                other => other,
            })?;
        if resp.vectors.len() != texts.len() {
            return Err(Error::Protocol(format!(
                "embed batch {batch_index}: sent {} texts, received {} vectors",
                texts.len(),
                resp.vectors.len()
            )));
        }
        let expected = *self.dimension.get_or_init(|| resp.dimension);
        if resp.dimension != expected {
            return Err(Error::Protocol(format!(
                "embedding dimension changed from {expected} to {}",
                resp.dimension
            )));
        }
        resp.vectors
            .into_iter()
            .map(|v| {
                if v.len() != expected {
                    return Err(Error::Protocol(format!(
                        "vector of length {} in a response declaring dimension {expected}",
                        v.len()
                    )));
                }
                EmbeddingVector::from_unit(v).map_err(|e| Error::Protocol(e.to_string()))
            })
            .collect()
    }
}

impl Embedder for RemoteEmbedder {
    fn name(&self) -> &str {
        "remote"
    }

    /// Dimension reported by the service; queried on first use. 0 if the
    /// service cannot be reached.
    fn dimension(&self) -> usize {
        if let Some(d) = self.dimension.get() {
            return *d;
        }
        self.request(0, &["a"]).map(|_| ()).ok();
        self.dimension.get().copied().unwrap_or(0)
    }

    fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>> {
        let mut out = Vec::with_capacity(texts.len());
        for (i, chunk) in texts.chunks(self.batch_size).enumerate() {
            out.extend(self.request(i, chunk)?);
        }
        Ok(out)
    }
}
