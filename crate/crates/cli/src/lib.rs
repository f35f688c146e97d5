//! Command-line tool and HTTP service over the `wording` library.

pub mod api;
pub mod cli;
pub mod featureset;
pub mod service;
