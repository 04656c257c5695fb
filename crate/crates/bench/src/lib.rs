//! Criterion benchmarks for the allocator; see `benches/`.
