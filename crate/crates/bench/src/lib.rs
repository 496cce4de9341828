//! This crate only hosts benchmarks; see `benches/operations.rs`.
