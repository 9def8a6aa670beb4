//! Benchmark-only crate; see `benches/regions.rs`.
