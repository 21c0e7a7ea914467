//! Criterion benchmarks for the LP layer and the simulator; see `benches/`.
