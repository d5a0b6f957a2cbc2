//! Criterion benchmarks for the simulation and inversion hot paths; see
//! `benches/pipeline.rs`.
