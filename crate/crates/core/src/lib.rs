//! Streaming vocabulary-growth profiling and Heaps' law estimation.

pub mod cli;
pub mod corpus_io;
pub mod error;
pub mod experiments;
pub mod growth;
pub mod powerfit;
pub mod preprocess;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
