//! Criterion benchmarks for the holonorm certifiers live in `benches/`.
