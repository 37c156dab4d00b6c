//! Criterion benchmarks for `cstar-core`; see `benches/kernels.rs`.
