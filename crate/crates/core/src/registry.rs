//! Name-based lookup of embedders, generators and scorers.

use std::sync::Arc;

use crate::analysis::SenseCounts;
use crate::error::{Error, Result};
use crate::generators::{GoldOracle, Generator, MfsBaseline, RemoteGenerator};
use crate::inventory::Inventory;
use crate::retrieval::{BuiltinEmbedder, Embedder, RemoteEmbedder};
use crate::scorer::{DependencyScorer, FrameNetScorer, Scorer, SpanScorer};

/// Everything a strategy may need to be constructed.
#[derive(Default, Clone)]
pub struct BackendParams {
    pub endpoint: Option<String>,
    pub inventory: Option<Arc<Inventory>>,
    pub counts: Option<SenseCounts>,
}

impl BackendParams {
    fn endpoint(&self, who: &str) -> Result<String> {
        self.endpoint
            .clone()
            .ok_or_else(|| Error::Contract(format!("{who} needs a service endpoint")))
    }

    fn inventory(&self, who: &str) -> Result<Arc<Inventory>> {
        self.inventory
            .clone()
            .ok_or_else(|| Error::Contract(format!("{who} needs an inventory")))
    }
}

type Factory<T> = fn(&BackendParams) -> Result<Box<T>>;

pub struct Registry<T: ?Sized + 'static> {
    kind: &'static str,
    entries: &'static [(&'static str, Factory<T>)],
}

impl<T: ?Sized> Registry<T> {
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn create(&self, name: &str, params: &BackendParams) -> Result<Box<T>> {
        match self.entries.iter().find(|(n, _)| *n == name) {
            Some((_, factory)) => factory(params),
            None => Err(Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }
}

pub static EMBEDDERS: Registry<dyn Embedder> = Registry {
    kind: "embedder",
    entries: &[
        ("builtin", |_| Ok(Box::new(BuiltinEmbedder))),
        ("remote", |p| Ok(Box::new(RemoteEmbedder::new(p.endpoint("remote embedder")?)))),
    ],
};

pub static GENERATORS: Registry<dyn Generator> = Registry {
    kind: "generator",
    entries: &[
        ("gold", |p| Ok(Box::new(GoldOracle::new(p.inventory("gold generator")?)))),
        ("mfs", |p| {
            Ok(Box::new(MfsBaseline::new(
                p.inventory("mfs generator")?,
                p.counts
                    .clone()
                    .ok_or_else(|| Error::Contract("mfs generator needs training sense counts".into()))?,
            )))
        }),
        ("remote", |p| Ok(Box::new(RemoteGenerator::new(p.endpoint("remote generator")?)))),
    ],
};

pub static SCORERS: Registry<dyn Scorer> = Registry {
    kind: "scorer",
    entries: &[
        ("dep", |_| Ok(Box::new(DependencyScorer))),
        ("span", |_| Ok(Box::new(SpanScorer))),
        ("framenet", |_| Ok(Box::new(FrameNetScorer))),
    ],
};

pub fn embedder(name: &str, params: &BackendParams) -> Result<Box<dyn Embedder>> {
    EMBEDDERS.create(name, params)
}

pub fn generator(name: &str, params: &BackendParams) -> Result<Box<dyn Generator>> {
    GENERATORS.create(name, params)
}

pub fn scorer(name: &str) -> Result<Box<dyn Scorer>> {
    SCORERS.create(name, &BackendParams::default())
}
