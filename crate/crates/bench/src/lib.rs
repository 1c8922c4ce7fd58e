//! Criterion benchmarks for the photonic QFT toolkit; see `benches/`.
