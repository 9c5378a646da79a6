//! Sobel edge detector on 8-bit intensities stored one per word.
//!
//! `out = min(|Gx| + |Gy|, 255)` with
//! `Gx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]` and
//! `Gy = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]]`. Border pixels, whose
//! neighbourhood leaves the image, sample the nearest in-image pixel.

use super::{check, CycleModel, Port};
use crate::mem::WordMemory;
use crate::murac::{Accelerator, ArgumentArray, MuracError};

/// Output tile edge of the tile accelerator.
pub const SE_BUF: u32 = 16;

/// Sobel response at `(y, x)` given a pixel reader. Coordinates handed to
/// `pixel` are already clamped into the image.
pub fn sobel_at<E>(
    height: u32,
    width: u32,
    y: u32,
    x: u32,
    mut pixel: impl FnMut(u32, u32) -> Result<u32, E>,
) -> Result<u32, E> {
    let clamp = |v: i64, n: u32| v.clamp(0, n as i64 - 1) as u32;
    let mut p = [[0i32; 3]; 3];
    for (dy, row) in p.iter_mut().enumerate() {
        for (dx, cell) in row.iter_mut().enumerate() {
            let yy = clamp(y as i64 + dy as i64 - 1, height);
            let xx = clamp(x as i64 + dx as i64 - 1, width);
            *cell = pixel(yy, xx)? as i32;
        }
    }
    let taps = |a: i32, b: i32, c: i32| a.wrapping_add(b.wrapping_shl(1)).wrapping_add(c);
    let gx = taps(p[0][2], p[1][2], p[2][2]).wrapping_sub(taps(p[0][0], p[1][0], p[2][0]));
    let gy = taps(p[2][0], p[2][1], p[2][2]).wrapping_sub(taps(p[0][0], p[0][1], p[0][2]));
    Ok(gx.wrapping_abs().wrapping_add(gy.wrapping_abs()).clamp(0, 255) as u32)
}

fn pixels(
    port: &mut Port,
    input: u32,
    output: u32,
    height: u32,
    width: u32,
    rows: std::ops::Range<u32>,
    cols: std::ops::Range<u32>,
) -> Result<(), MuracError> {
    for y in rows {
        for x in cols.clone() {
            let v = sobel_at(height, width, y, x, |yy, xx| port.ld(input, yy as u64 * width as u64 + xx as u64))?;
            port.st(output, y as u64 * width as u64 + x as u64, v)?;
        }
    }
    Ok(())
}

/// One `SE_BUF` x `SE_BUF` output tile whose top-left output pixel is
/// `(r, c)`. The whole 3x3 neighbourhood of every output must be inside
/// the image.
#[derive(Debug, Clone)]
pub struct SeTile {
    pub model: CycleModel,
}

impl SeTile {
    pub fn new(model: CycleModel) -> Self {
        Self { model }
    }

    fn origin(args: &ArgumentArray) -> Result<(u32, u32, u32), MuracError> {
        args.expect_len(5)?;
        let (width, r, c) = (args.get(2), args.get(3), args.get(4));
        check(args, r >= 1 && c >= 1 && c as u64 + (SE_BUF as u64) < width as u64, || {
            format!("tile at ({r}, {c}) needs a border inside width {width}")
        })?;
        Ok((width, r, c))
    }
}

impl Accelerator for SeTile {
    fn name(&self) -> &str {
        "se_tile"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        Self::origin(args)?;
        Ok(self.model.cost((SE_BUF * SE_BUF * 9) as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        let (width, r, c) = Self::origin(args)?;
        let mut port = Port::new(mem, args);
        // Height only bounds clamping, which never triggers for a valid tile.
        pixels(&mut port, args.get(0), args.get(1), u32::MAX, width, r..r + SE_BUF, c..c + SE_BUF)
    }
}

/// The whole image, border included.
#[derive(Debug, Clone)]
pub struct SeFull {
    pub model: CycleModel,
}

impl SeFull {
    pub fn new(model: CycleModel) -> Self {
        Self { model }
    }
}

impl Accelerator for SeFull {
    fn name(&self) -> &str {
        "se_full"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        args.expect_len(4)?;
        Ok(self.model.cost(args.get(2) as u64 * args.get(3) as u64 * 9))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        args.expect_len(4)?;
        let (height, width) = (args.get(2), args.get(3));
        check(args, height >= 1 && width >= 1, || "empty image".into())?;
        let mut port = Port::new(mem, args);
        pixels(&mut port, args.get(0), args.get(1), height, width, 0..height, 0..width)
    }
}
