//! Criterion benchmarks for the gradient-flow kernels; see `benches/`.
