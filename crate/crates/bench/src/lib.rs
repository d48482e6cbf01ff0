//! Benchmark-only crate; see `benches/kernels.rs`.

/// Standard grids the benchmarks sweep over.
pub const BENCH_GRIDS: [(usize, usize); 3] = [(4, 4), (4, 6), (6, 6)];
