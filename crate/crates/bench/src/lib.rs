//! Criterion benchmarks for hecke-core live under `benches/`.
