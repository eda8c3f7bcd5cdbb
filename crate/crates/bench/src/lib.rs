//! Criterion benchmarks for the conveyor kernels live in `benches/`.
