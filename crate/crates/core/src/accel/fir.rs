//! FIR filter over the valid range: `y[i] = sum_{t < taps} h[t] * x[i + t]`.

use super::{check, CycleModel, Port};
use crate::mem::WordMemory;
use crate::murac::{Accelerator, ArgumentArray, MuracError};

/// Computes `out_count` consecutive outputs per call.
#[derive(Debug, Clone)]
pub struct FirTile {
    pub model: CycleModel,
    /// Largest `out_count` one call accepts.
    pub max_outputs: u32,
    /// Largest `n_taps` one call accepts.
    pub max_taps: u32,
}

impl FirTile {
    pub const OUTPUTS: u32 = 50;
    pub const TAPS: u32 = 50;

    pub fn new(model: CycleModel) -> Self {
        Self { model, max_outputs: Self::OUTPUTS, max_taps: Self::TAPS }
    }

    fn shape(&self, args: &ArgumentArray) -> Result<(u32, u32, u32), MuracError> {
        args.expect_len(6)?;
        let (taps, start, count) = (args.get(3), args.get(4), args.get(5));
        check(args, taps <= self.max_taps && count <= self.max_outputs, || {
            format!("tile of {count} outputs x {taps} taps exceeds {}x{}", self.max_outputs, self.max_taps)
        })?;
        Ok((taps, start, count))
    }
}

fn outputs(port: &mut Port, x: u32, h: u32, y: u32, taps: u32, start: u32, count: u32) -> Result<(), MuracError> {
    let coeffs: Vec<u32> = (0..taps as u64).map(|t| port.ld(h, t)).collect::<Result<_, _>>()?;
    for i in start as u64..start as u64 + count as u64 {
        let mut acc = 0u32;
        for (t, &c) in coeffs.iter().enumerate() {
            acc = acc.wrapping_add(c.wrapping_mul(port.ld(x, i + t as u64)?));
        }
        port.st(y, i, acc)?;
    }
    Ok(())
}

impl Accelerator for FirTile {
    fn name(&self) -> &str {
        "fir_tile"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        let (taps, _, count) = self.shape(args)?;
        Ok(self.model.cost(taps as u64 * count as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        let (taps, start, count) = self.shape(args)?;
        let mut port = Port::new(mem, args);
        outputs(&mut port, args.get(0), args.get(1), args.get(2), taps, start, count)
    }
}

#[derive(Debug, Clone)]
pub struct FirFull {
    pub model: CycleModel,
}

impl FirFull {
    pub fn new(model: CycleModel) -> Self {
        Self { model }
    }
}

impl Accelerator for FirFull {
    fn name(&self) -> &str {
        "fir_full"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        args.expect_len(5)?;
        Ok(self.model.cost(args.get(3) as u64 * args.get(4) as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        args.expect_len(5)?;
        let mut port = Port::new(mem, args);
        outputs(&mut port, args.get(0), args.get(1), args.get(2), args.get(3), 0, args.get(4))
    }
}
