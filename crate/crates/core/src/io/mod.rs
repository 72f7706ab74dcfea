//! Operator documents and analysis reports.

pub mod document;
pub mod report;

pub use document::{parse_operator, AtomRecord, OperatorDocument};
pub use report::{analyze, AnalysisReport};
