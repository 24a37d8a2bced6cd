//! Static analysis of cryptographic API usage in Go source code.
//!
//! The crate has three layers:
//!
//! * **Scanner** — [`frontend`] parses Go projects into an immutable model,
//!   [`dataflow`] builds per-function control-flow graphs with def-use
//!   chains, constant propagation, and taint tracking, and [`rules`] runs
//!   fourteen detectors for cryptographic API misuse (weak primitives,
//!   predictable key material, KDF parameter mistakes, transport and SSH
//!   misconfiguration, unverified JWTs).
//! * **Reporting** — [`findings`] defines the finding record with stable
//!   fingerprints; [`report`] serializes findings as plain text, JSON, or
//!   SARIF 2.1.0.
//! * **Consensus** — [`consensus`] ingests findings from several scanners,
//!   maps their rule ids onto the shared taxonomy, matches detections by
//!   location, and computes agreement partitions, per-rule detection
//!   matrices, and median execution times.
//!
//! [`corpus`] generates a seeded benchmark of misuse micro-programs with
//! ground truth, and [`scan`] ties discovery, analysis, and filtering into
//! the one-call entry point the CLI and the C ABI share.

pub mod consensus;
pub mod corpus;
pub mod dataflow;
pub mod error;
pub mod findings;
pub mod frontend;
pub mod report;
pub mod rules;
pub mod scan;

pub use error::{Error, Result};
