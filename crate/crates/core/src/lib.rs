//! Descriptive semantic role labeling.
//!
//! Predicate senses and semantic roles are expressed as natural-language
//! definitions inside a generated sentence, and mapped back to inventory
//! labels by embedding similarity. This crate holds the corpus model, the
//! inventory, the text codec, label retrieval, generators, scorers and the
//! analysis helpers; the `dsrl` binary wraps them in a command-line tool.

pub mod analysis;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod generators;
pub mod inventory;
pub mod pipeline;
pub mod registry;
pub mod remote;
pub mod retrieval;
pub mod scorer;

pub use error::{Error, Result};
