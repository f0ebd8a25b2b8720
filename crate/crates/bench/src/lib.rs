//! Inputs shared by the benchmarks.

/// Deterministic spread of integers in `[2, bound)` for per-field timing.
pub fn spread_inputs(count: u64, bound: u64) -> Vec<u64> {
    let span = bound.saturating_sub(2).max(1);
    (0..count).map(|i| 2 + i.wrapping_mul(7919) % span).collect()
}
