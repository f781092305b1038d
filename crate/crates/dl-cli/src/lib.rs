//! IO companion to `dl-core`: JSON schemas, DOT export, and the seeded
//! verification suites behind `dl verify` and the acceptance tests.

pub mod dot;
pub mod json;
pub mod report;
pub mod suites;
