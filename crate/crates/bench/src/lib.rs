//! Criterion benchmarks for `noisyqml`; run with `cargo bench -p noisyqml-bench`.
