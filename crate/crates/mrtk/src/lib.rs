//! IO companion to `mrtk-core`: text formats for QBFs, proofs, strategy
//! dumps and certificates, plus the report types the CLI prints.

pub mod formats;
pub mod report;
