//! Matrix multiply: C = A * B, row-major 32-bit words.

use super::{check, CycleModel, Port};
use crate::mem::WordMemory;
use crate::murac::{Accelerator, ArgumentArray, MuracError};

/// Computes a 1 x `width` strip of C over the full reduction per call.
#[derive(Debug, Clone)]
pub struct MmTile {
    pub model: CycleModel,
    pub width: u32,
}

impl MmTile {
    pub const WIDTH: u32 = 5;

    pub fn new(model: CycleModel) -> Self {
        Self { model, width: Self::WIDTH }
    }

    /// Columns covered by the strip starting at `col`.
    fn strip(&self, args: &ArgumentArray) -> Result<(u32, u32, u32, u32), MuracError> {
        args.expect_len(6)?;
        let (n, row, col) = (args.get(3), args.get(4), args.get(5));
        check(args, row < n && col < n, || format!("strip ({row}, {col}) outside a {n}x{n} matrix"))?;
        Ok((n, row, col, self.width.min(n - col)))
    }
}

#[allow(clippy::too_many_arguments)]
fn strip_into(
    port: &mut Port,
    a: u32,
    b: u32,
    c: u32,
    n: u32,
    row: u32,
    col: u32,
    cols: u32,
) -> Result<(), MuracError> {
    let n64 = n as u64;
    let a_row: Vec<u32> = (0..n64).map(|k| port.ld(a, row as u64 * n64 + k)).collect::<Result<_, _>>()?;
    for j in col..col + cols {
        let mut acc = 0u32;
        for (k, &x) in a_row.iter().enumerate() {
            acc = acc.wrapping_add(x.wrapping_mul(port.ld(b, k as u64 * n64 + j as u64)?));
        }
        port.st(c, row as u64 * n64 + j as u64, acc)?;
    }
    Ok(())
}

impl Accelerator for MmTile {
    fn name(&self) -> &str {
        "mm_tile"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        let (n, _, _, cols) = self.strip(args)?;
        Ok(self.model.cost(cols as u64 * n as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        let (n, row, col, cols) = self.strip(args)?;
        let mut port = Port::new(mem, args);
        strip_into(&mut port, args.get(0), args.get(1), args.get(2), n, row, col, cols)
    }
}

/// The whole multiplication from one invocation.
#[derive(Debug, Clone)]
pub struct MmFull {
    pub model: CycleModel,
}

impl MmFull {
    pub fn new(model: CycleModel) -> Self {
        Self { model }
    }
}

impl Accelerator for MmFull {
    fn name(&self) -> &str {
        "mm_full"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        args.expect_len(4)?;
        Ok(self.model.cost((args.get(3) as u64).pow(3)))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        args.expect_len(4)?;
        let n = args.get(3);
        let mut port = Port::new(mem, args);
        for row in 0..n {
            strip_into(&mut port, args.get(0), args.get(1), args.get(2), n, row, 0, n)?;
        }
        Ok(())
    }
}
