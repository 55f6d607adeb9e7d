//! Criterion benchmarks for the simplexlab kernels; run `cargo bench -p simplexlab-bench`.
