//! Criterion benchmarks for `modindex`; see `benches/analysis.rs`.
