//! Benchmark-only crate; all content lives in `benches/`.
