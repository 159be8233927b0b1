//! Benchmark fixtures for nckp-core.

use nckp_core::{Mode, SamplerSession};

/// Sizes swept by the table benchmarks at `k = 3`.
pub const TABLE_SIZES: [usize; 3] = [50, 100, 200];

/// Sizes swept by the per-sample benchmarks.
pub const SAMPLE_SIZES: [usize; 3] = [100, 200, 400];

/// A session with tables already built, so timing covers drawing only.
pub fn warm_session(k: usize, n: usize, mode: Mode) -> SamplerSession {
    SamplerSession::build(k, n, mode, 0x5eed).expect("valid benchmark parameters")
}
