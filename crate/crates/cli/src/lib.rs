//! Command-line harness for the covering engine: document formats, the
//! lemma-replay property suite and structured reports.

pub mod commands;
pub mod doc;
pub mod report;
pub mod suite;
