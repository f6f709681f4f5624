//! Benchmarks for the forge pipeline live in `benches/`.
