//! Benchmark-only crate; see the `benches/` directory. Nothing is exported.
