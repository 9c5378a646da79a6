use serde::{Deserialize, Serialize};

/// Per-run statistics of the cycle-accurate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub total_cycles: u64,
    pub stall_cycles: u64,
    pub aux_cycles: u64,
    pub retired: u64,
    pub flushes: u64,
    pub baa_count: u64,
    pub freq_mhz: f64,
    pub latency_s: f64,
}

impl RunReport {
    pub fn new(
        total_cycles: u64,
        stall_cycles: u64,
        aux_cycles: u64,
        retired: u64,
        flushes: u64,
        baa_count: u64,
        freq_mhz: f64,
    ) -> Self {
        Self {
            total_cycles,
            stall_cycles,
            aux_cycles,
            retired,
            flushes,
            baa_count,
            freq_mhz,
            latency_s: latency_seconds(total_cycles, freq_mhz),
        }
    }

    /// `retired + 3 + stall_cycles + 2 * flushes`: the cycle count the
    /// timing model predicts for a halting run.
    pub fn accounted_cycles(&self) -> u64 {
        self.retired + 3 + self.stall_cycles + 2 * self.flushes
    }
}

/// Wall-clock time of `cycles` at `freq_mhz`.
pub fn latency_seconds(cycles: u64, freq_mhz: f64) -> f64 {
    cycles as f64 / (freq_mhz * 1e6)
}
