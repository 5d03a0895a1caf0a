//! Placeholder, replaced by the benchmark harness.
