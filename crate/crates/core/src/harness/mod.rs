//! Randomized verification: seeded instance generators, one suite per
//! checked closure property, and the bounded search for inserters that
//! are not iso-full.

pub mod config;
pub mod gen;
pub mod search29;
pub mod suites;

pub use config::{instance_seed, GenError, GeneratorConfig, Requirement};
pub use gen::{AecProxy, Generator, ReductSpec};
pub use suites::{recheck, run_suite, Checked, InstanceRecord, Suite, SuiteReport, Verdict};
