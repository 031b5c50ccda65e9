//! Benchmark-only crate; see `benches/numerics.rs`. The package exists
//! so the benchmarks get their own dependency set without touching the
//! library's.
