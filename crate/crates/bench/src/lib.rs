//! Benchmark fixtures for the criterion suite.
