// Benchmarks live in benches/; see core_ops.rs.
