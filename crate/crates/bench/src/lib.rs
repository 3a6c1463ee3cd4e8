//! Benchmark-only crate: see `benches/engine.rs`. The exactness of every
//! operation lives in `mvop-core`; this crate just measures its cost.
