//! Criterion benchmarks for the modular-value pipeline live in `benches/`.
