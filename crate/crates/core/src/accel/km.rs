//! One k-means assignment pass. Each node goes to the centroid with the
//! smallest squared Euclidean distance (wrapping 32-bit, compared unsigned;
//! ties go to the lowest index), and its coordinates are accumulated into
//! that centroid's running sums and count.

use super::{check, CycleModel, Port};
use crate::mem::WordMemory;
use crate::murac::{Accelerator, ArgumentArray, MuracError};

#[derive(Debug, Clone, Copy)]
struct Layout {
    nodes: u32,
    centroids: u32,
    assign: u32,
    sums: u32,
    counts: u32,
    k: u32,
    dims: u32,
}

fn assign_range(port: &mut Port, l: Layout, start: u32, count: u32) -> Result<(), MuracError> {
    let (k, dims) = (l.k as u64, l.dims as u64);
    let cents: Vec<u32> = (0..k * dims).map(|i| port.ld(l.centroids, i)).collect::<Result<_, _>>()?;
    for node in start as u64..start as u64 + count as u64 {
        let coords: Vec<u32> = (0..dims).map(|d| port.ld(l.nodes, node * dims + d)).collect::<Result<_, _>>()?;
        let mut best = 0u64;
        let mut best_dist = u32::MAX;
        for c in 0..k {
            let dist = coords.iter().enumerate().fold(0u32, |acc, (d, &x)| {
                let diff = x.wrapping_sub(cents[(c * dims) as usize + d]);
                acc.wrapping_add(diff.wrapping_mul(diff))
            });
            if c == 0 || dist < best_dist {
                best = c;
                best_dist = dist;
            }
        }
        port.st(l.assign, node, best as u32)?;
        for (d, &x) in coords.iter().enumerate() {
            let i = best * dims + d as u64;
            let s = port.ld(l.sums, i)?;
            port.st(l.sums, i, s.wrapping_add(x))?;
        }
        let n = port.ld(l.counts, best)?;
        port.st(l.counts, best, n.wrapping_add(1))?;
    }
    Ok(())
}

/// Assigns `node_count` nodes per call.
#[derive(Debug, Clone)]
pub struct KmTile {
    pub model: CycleModel,
    pub max_nodes: u32,
}

impl KmTile {
    pub const NODES: u32 = 125;

    pub fn new(model: CycleModel) -> Self {
        Self { model, max_nodes: Self::NODES }
    }

    fn layout(&self, args: &ArgumentArray) -> Result<(Layout, u32, u32), MuracError> {
        args.expect_len(9)?;
        let e = &args.elements;
        let layout =
            Layout { nodes: e[0], centroids: e[1], assign: e[2], sums: e[3], counts: e[4], k: e[7], dims: e[8] };
        check(args, layout.k >= 1, || "k must be at least 1".into())?;
        check(args, e[6] <= self.max_nodes, || format!("{} nodes exceed the tile size {}", e[6], self.max_nodes))?;
        Ok((layout, e[5], e[6]))
    }
}

impl Accelerator for KmTile {
    fn name(&self) -> &str {
        "km_tile"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        let (l, _, count) = self.layout(args)?;
        Ok(self.model.cost(count as u64 * l.k as u64 * l.dims as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        let (l, start, count) = self.layout(args)?;
        assign_range(&mut Port::new(mem, args), l, start, count)
    }
}

#[derive(Debug, Clone)]
pub struct KmFull {
    pub model: CycleModel,
}

impl KmFull {
    pub fn new(model: CycleModel) -> Self {
        Self { model }
    }

    fn layout(args: &ArgumentArray) -> Result<(Layout, u32), MuracError> {
        args.expect_len(8)?;
        let e = &args.elements;
        let layout =
            Layout { nodes: e[0], centroids: e[1], assign: e[2], sums: e[3], counts: e[4], k: e[6], dims: e[7] };
        check(args, layout.k >= 1, || "k must be at least 1".into())?;
        Ok((layout, e[5]))
    }
}

impl Accelerator for KmFull {
    fn name(&self) -> &str {
        "km_full"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        let (l, n) = Self::layout(args)?;
        Ok(self.model.cost(n as u64 * l.k as u64 * l.dims as u64))
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        let (l, n) = Self::layout(args)?;
        assign_range(&mut Port::new(mem, args), l, 0, n)
    }
}
