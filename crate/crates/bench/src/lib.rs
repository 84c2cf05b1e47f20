//! Criterion benchmarks for srlab-core; see `benches/`.
