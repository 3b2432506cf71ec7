//! Benchmarks for the core kernels; see `benches/kernels.rs`.

pub use cosetcx;
