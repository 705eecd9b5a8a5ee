//! Criterion benchmarks for `chgeom`; see `benches/geometry.rs`.
