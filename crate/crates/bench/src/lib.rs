//! Benchmarks for swarmroute live in `benches/`; this crate has no library surface.
