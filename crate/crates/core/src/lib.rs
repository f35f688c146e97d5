//! Paired-message wording analysis: pair mining, linguistic features,
//! hypothesis tests and pair classifiers.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod io;
pub mod model;
pub mod ngram_lm;
pub mod stats;
pub mod textproc;

pub use error::{Error, Result};
