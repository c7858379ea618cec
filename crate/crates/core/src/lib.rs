//! Valency-driven generation and validation of noun-phrase argument patterns.

pub mod constraints;
pub mod embedding;
pub mod error;
pub mod export;
pub mod frames;
pub mod generator;
pub mod lexicon;
pub mod np;
pub mod ontology;
pub mod query;
pub mod realize;
pub mod validator;

pub use error::{Error, Result};
pub use lexicon::{load_bundle, schemas_for, Lexicon};
