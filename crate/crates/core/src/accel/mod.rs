//! Reference accelerators for the four benchmark kernels.
//!
//! Each kernel has a tile accelerator, invoked once per unrolled loop body
//! by tightly-coupled programs, and a full-application accelerator that
//! computes the whole kernel (loop control and boundaries included) from a
//! single `baa`. All arithmetic is wrapping 32-bit integer arithmetic.
//!
//! Argument arrays (after the count word):
//!
//! | accelerator | elements |
//! |---|---|
//! | `mm_tile`  | A, B, C, n, row, col |
//! | `fir_tile` | X, H, Y, n_taps, out_start, out_count |
//! | `km_tile`  | nodes, centroids, assign, sums, counts, node_start, node_count, k, dims |
//! | `se_tile`  | in, out, width, r, c |
//! | `mm_full`  | A, B, C, n |
//! | `fir_full` | X, H, Y, n_taps, n_out |
//! | `km_full`  | nodes, centroids, assign, sums, counts, n_nodes, k, dims |
//! | `se_full`  | in, out, height, width |

mod fir;
mod km;
mod mm;
mod se;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::mem::WordMemory;
use crate::murac::{Accelerator, ArgumentArray, MuracError};

pub use fir::{FirFull, FirTile};
pub use km::{KmFull, KmTile};
pub use mm::{MmFull, MmTile};
pub use se::{sobel_at, SeFull, SeTile, SE_BUF};

/// Initiation-style timing: a fixed startup latency plus the work divided by
/// the per-cycle throughput, rounded up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleModel {
    pub startup_cycles: u64,
    pub elems_per_cycle: u64,
}

impl CycleModel {
    pub fn new(startup_cycles: u64, elems_per_cycle: u64) -> Self {
        assert!(elems_per_cycle >= 1, "throughput must be at least one element per cycle");
        Self { startup_cycles, elems_per_cycle }
    }

    pub fn cost(&self, work: u64) -> u64 {
        self.startup_cycles + work.div_ceil(self.elems_per_cycle)
    }

    /// Declared default for `app`: four cycles of startup and the tile's
    /// innermost parallel width as throughput.
    pub fn default_for(app: App) -> Self {
        let width = match app {
            App::Mm => 5,
            App::Fir => 50,
            App::Km => 8,
            App::Se => 9,
        };
        Self::new(4, width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum App {
    Mm,
    Fir,
    Km,
    Se,
}

impl App {
    pub const ALL: [App; 4] = [App::Mm, App::Fir, App::Km, App::Se];

    pub fn name(self) -> &'static str {
        match self {
            App::Mm => "mm",
            App::Fir => "fir",
            App::Km => "km",
            App::Se => "se",
        }
    }
}

impl fmt::Display for App {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for App {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        App::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown application `{s}` (expected mm, fir, km or se)"))
    }
}

/// Problem sizes of one benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "app", rename_all = "lowercase")]
pub enum KernelParams {
    /// Square matrices of order `n`.
    Mm {
        n: u32,
    },
    /// `n_inputs` outputs, each over `n_taps` coefficients.
    Fir {
        n_inputs: u32,
        n_taps: u32,
    },
    Km {
        n_nodes: u32,
        k: u32,
        dims: u32,
    },
    /// Input dimensions including the one-pixel border.
    Se {
        height: u32,
        width: u32,
    },
}

impl KernelParams {
    pub fn app(&self) -> App {
        match self {
            KernelParams::Mm { .. } => App::Mm,
            KernelParams::Fir { .. } => App::Fir,
            KernelParams::Km { .. } => App::Km,
            KernelParams::Se { .. } => App::Se,
        }
    }

    /// Published benchmark sizes.
    pub fn paper(app: App) -> Self {
        match app {
            App::Mm => KernelParams::Mm { n: 100 },
            App::Fir => KernelParams::Fir { n_inputs: 10_000, n_taps: 50 },
            App::Km => KernelParams::Km { n_nodes: 5000, k: 4, dims: 2 },
            App::Se => KernelParams::Se { height: 128 + 2, width: 128 + 2 },
        }
    }

    /// Reduced sizes that simulate in seconds.
    pub fn desk(app: App) -> Self {
        match app {
            App::Mm => KernelParams::Mm { n: 20 },
            App::Fir => KernelParams::Fir { n_inputs: 1000, n_taps: 50 },
            App::Km => KernelParams::Km { n_nodes: 500, k: 4, dims: 2 },
            App::Se => KernelParams::Se { height: 34, width: 34 },
        }
    }

    /// Total work items of the full kernel, as charged to a full-application
    /// accelerator.
    pub fn total_work(&self) -> u64 {
        match *self {
            KernelParams::Mm { n } => (n as u64).pow(3),
            KernelParams::Fir { n_inputs, n_taps } => n_inputs as u64 * n_taps as u64,
            KernelParams::Km { n_nodes, k, dims } => n_nodes as u64 * k as u64 * dims as u64,
            KernelParams::Se { height, width } => height as u64 * width as u64 * 9,
        }
    }
}

pub fn tile_accelerator(app: App, model: CycleModel) -> Arc<dyn Accelerator> {
    match app {
        App::Mm => Arc::new(MmTile::new(model)),
        App::Fir => Arc::new(FirTile::new(model)),
        App::Km => Arc::new(KmTile::new(model)),
        App::Se => Arc::new(SeTile::new(model)),
    }
}

pub fn full_accelerator(app: App, model: CycleModel) -> Arc<dyn Accelerator> {
    match app {
        App::Mm => Arc::new(MmFull::new(model)),
        App::Fir => Arc::new(FirFull::new(model)),
        App::Km => Arc::new(KmFull::new(model)),
        App::Se => Arc::new(SeFull::new(model)),
    }
}

/// Bounds-checked word access on behalf of one invocation.
pub(crate) struct Port<'a> {
    mem: &'a mut dyn WordMemory,
    args: &'a ArgumentArray,
}

impl<'a> Port<'a> {
    pub(crate) fn new(mem: &'a mut dyn WordMemory, args: &'a ArgumentArray) -> Self {
        Self { mem, args }
    }

    fn addr(&self, base: u32, index: u64) -> Result<u32, MuracError> {
        let a = base as u64 + 4 * index;
        if a + 4 > self.mem.size_bytes() as u64 {
            return Err(self.bad(format!("element {index} of the array at 0x{base:08x} is outside DMEM")));
        }
        Ok(a as u32)
    }

    pub(crate) fn ld(&mut self, base: u32, index: u64) -> Result<u32, MuracError> {
        let a = self.addr(base, index)?;
        self.mem.load_word(a).map_err(|e| self.args.fault(e))
    }

    pub(crate) fn st(&mut self, base: u32, index: u64, value: u32) -> Result<(), MuracError> {
        let a = self.addr(base, index)?;
        self.mem.store_word(a, value).map_err(|e| self.args.fault(e))
    }

    pub(crate) fn bad(&self, reason: impl Into<String>) -> MuracError {
        MuracError::bad(self.args.addr, reason)
    }
}

pub(crate) fn check(args: &ArgumentArray, ok: bool, reason: impl FnOnce() -> String) -> Result<(), MuracError> {
    if ok {
        Ok(())
    } else {
        Err(MuracError::bad(args.addr, reason()))
    }
}
