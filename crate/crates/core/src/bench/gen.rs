//! Assembly generators for the benchmark kernels.
//!
//! Generated programs use RV32I only. Software products go through the
//! shift-add subroutine `__mul` (`a0 = a0 * a1`, clobbers `t0`, `t1`, `a1`).
//! DMEM holds the argument array at address 0 and the kernel's data regions
//! from `DATA_BASE` up.

use std::fmt::Write as _;

use super::rng::XorShift64;
use super::{BenchError, Mode};
use crate::accel::{FirTile, KernelParams, KmTile, MmTile, SE_BUF};

/// Argument array location, reachable with a 12-bit offset from `x0`.
pub const ARGS_ADDR: u32 = 0;
pub const DATA_BASE: u32 = 0x100;

/// Byte range of DMEM that makes up a benchmark's result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub addr: u32,
    pub len_bytes: u32,
}

/// What a generated program is expected to do, computed while generating it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schedule {
    /// Work items of each accelerator invocation, in program order.
    pub tile_work: Vec<u64>,
    /// Pixels a tightly-coupled edge program leaves to software.
    pub sw_pixels: u64,
}

impl Schedule {
    pub fn invocations(&self) -> u64 {
        self.tile_work.len() as u64
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub source: String,
    /// Initial DMEM words from address 0, argument array included.
    pub dmem_words: Vec<u32>,
    pub output: Region,
    pub schedule: Schedule,
}

/// Lays out word arrays after `DATA_BASE`.
struct Alloc {
    words: Vec<u32>,
}

impl Alloc {
    fn new() -> Self {
        Self { words: vec![0; (DATA_BASE / 4) as usize] }
    }

    fn put(&mut self, data: &[u32]) -> u32 {
        let addr = self.words.len() as u32 * 4;
        self.words.extend_from_slice(data);
        addr
    }

    fn zeros(&mut self, n: usize) -> u32 {
        let addr = self.words.len() as u32 * 4;
        self.words.resize(self.words.len() + n, 0);
        addr
    }

    fn args(&mut self, elements: &[u32]) {
        self.words[0] = elements.len() as u32;
        self.words[1..=elements.len()].copy_from_slice(elements);
    }
}

const MUL: &str = "
__mul:
    mv t0, a0
    li a0, 0
    beq a1, x0, __mul_done
__mul_loop:
    andi t1, a1, 1
    beq t1, x0, __mul_skip
    add a0, a0, t0
__mul_skip:
    slli t0, t0, 1
    srli a1, a1, 1
    bne a1, x0, __mul_loop
__mul_done:
    jalr x0, 0(ra)
";

/// Byte offset of argument element `i` within the argument array.
fn arg_off(i: u32) -> u32 {
    4 * (i + 1)
}

fn full_accel_program() -> String {
    format!("    baa {ARGS_ADDR}(x0)\n    ebreak\n")
}

fn invalid(msg: impl Into<String>) -> BenchError {
    BenchError::InvalidParams(msg.into())
}

pub fn generate(params: &KernelParams, mode: Mode, seed: u64) -> Result<Generated, BenchError> {
    let mut rng = XorShift64::new(seed);
    match *params {
        KernelParams::Mm { n } => mm(n, mode, &mut rng),
        KernelParams::Fir { n_inputs, n_taps } => fir(n_inputs, n_taps, mode, &mut rng),
        KernelParams::Km { n_nodes, k, dims } => km(n_nodes, k, dims, mode, &mut rng),
        KernelParams::Se { height, width } => se(height, width, mode, &mut rng),
    }
}

fn mm(n: u32, mode: Mode, rng: &mut XorShift64) -> Result<Generated, BenchError> {
    if n == 0 {
        return Err(invalid("matrix order must be positive"));
    }
    let nn = (n * n) as usize;
    let mut m = Alloc::new();
    let a = m.put(&rng.bytes(nn));
    let b = m.put(&rng.bytes(nn));
    let c = m.zeros(nn);
    let w = MmTile::WIDTH;
    let mut schedule = Schedule::default();
    let source = match mode {
        Mode::Sw => format!(
            "
    li s0, {a}
    li s2, {c}
    li s3, {n}
    slli s8, s3, 2
    li s4, 0
mm_i:
    li s5, 0
    li s9, {b}
mm_j:
    li s7, 0
    mv s10, s0
    mv s11, s9
    li s6, 0
mm_k:
    lw a0, 0(s10)
    lw a1, 0(s11)
    jal ra, __mul
    add s7, s7, a0
    addi s10, s10, 4
    add s11, s11, s8
    addi s6, s6, 1
    blt s6, s3, mm_k
    sw s7, 0(s2)
    addi s2, s2, 4
    addi s9, s9, 4
    addi s5, s5, 1
    blt s5, s3, mm_j
    add s0, s0, s8
    addi s4, s4, 1
    blt s4, s3, mm_i
    ebreak
{MUL}"
        ),
        Mode::Tc => {
            m.args(&[a, b, c, n, 0, 0]);
            for _row in 0..n {
                for col in (0..n).step_by(w as usize) {
                    schedule.tile_work.push(n as u64 * (n - col).min(w) as u64);
                }
            }
            format!(
                "
    li s0, {ARGS_ADDR}
    li s3, {n}
    li s4, 0
mm_row:
    sw s4, {row}(s0)
    li s5, 0
mm_col:
    sw s5, {col}(s0)
    baa 0(s0)
    addi s5, s5, {w}
    blt s5, s3, mm_col
    addi s4, s4, 1
    blt s4, s3, mm_row
    ebreak
",
                row = arg_off(4),
                col = arg_off(5),
            )
        }
        Mode::Hw => {
            m.args(&[a, b, c, n]);
            schedule.tile_work.push((n as u64).pow(3));
            full_accel_program()
        }
    };
    Ok(Generated { source, dmem_words: m.words, output: Region { addr: c, len_bytes: 4 * nn as u32 }, schedule })
}

fn fir(n_out: u32, taps: u32, mode: Mode, rng: &mut XorShift64) -> Result<Generated, BenchError> {
    if n_out == 0 || taps == 0 {
        return Err(invalid("FIR needs at least one output and one tap"));
    }
    if mode == Mode::Tc && taps > FirTile::TAPS {
        return Err(invalid(format!("{taps} taps exceed the FIR tile limit of {}", FirTile::TAPS)));
    }
    let mut m = Alloc::new();
    let x = m.put(&rng.bytes((n_out + taps - 1) as usize));
    let h = m.put(&rng.bytes(taps as usize));
    let y = m.zeros(n_out as usize);
    let tile = FirTile::OUTPUTS;
    let mut schedule = Schedule::default();
    let source = match mode {
        Mode::Sw => format!(
            "
    li s0, {x}
    li s1, {h}
    li s2, {y}
    li s3, {n_out}
    li s4, {taps}
    li s5, 0
fir_i:
    li s7, 0
    mv s10, s0
    mv s11, s1
    li s6, 0
fir_t:
    lw a0, 0(s11)
    lw a1, 0(s10)
    jal ra, __mul
    add s7, s7, a0
    addi s10, s10, 4
    addi s11, s11, 4
    addi s6, s6, 1
    blt s6, s4, fir_t
    sw s7, 0(s2)
    addi s2, s2, 4
    addi s0, s0, 4
    addi s5, s5, 1
    blt s5, s3, fir_i
    ebreak
{MUL}"
        ),
        Mode::Tc => {
            m.args(&[x, h, y, taps, 0, 0]);
            for start in (0..n_out).step_by(tile as usize) {
                schedule.tile_work.push((n_out - start).min(tile) as u64 * taps as u64);
            }
            format!(
                "
    li s0, {ARGS_ADDR}
    li s3, {n_out}
    li s6, {tile}
    li s5, 0
fir_blk:
    sub t2, s3, s5
    blt t2, s6, fir_short
    mv t2, s6
fir_short:
    sw s5, {start}(s0)
    sw t2, {count}(s0)
    baa 0(s0)
    addi s5, s5, {tile}
    blt s5, s3, fir_blk
    ebreak
",
                start = arg_off(4),
                count = arg_off(5),
            )
        }
        Mode::Hw => {
            m.args(&[x, h, y, taps, n_out]);
            schedule.tile_work.push(n_out as u64 * taps as u64);
            full_accel_program()
        }
    };
    Ok(Generated { source, dmem_words: m.words, output: Region { addr: y, len_bytes: 4 * n_out }, schedule })
}

fn km(n: u32, k: u32, dims: u32, mode: Mode, rng: &mut XorShift64) -> Result<Generated, BenchError> {
    if n == 0 || k == 0 || dims == 0 {
        return Err(invalid("k-means needs nodes, clusters and dimensions"));
    }
    if k > n {
        return Err(invalid("k-means seeds its centroids from the first k nodes, so k must not exceed the node count"));
    }
    let mut m = Alloc::new();
    let node_data = rng.bytes((n * dims) as usize);
    let nodes = m.put(&node_data);
    let cents = m.put(&node_data[..(k * dims) as usize]);
    let assign = m.zeros(n as usize);
    let sums = m.zeros((k * dims) as usize);
    let counts = m.zeros(k as usize);
    let out_len = 4 * (n + k * dims + k);
    let tile = KmTile::NODES;
    let mut schedule = Schedule::default();
    let source = match mode {
        Mode::Sw => format!(
            "
    li s0, {nodes}
    li s1, {n}
    li s2, 0
    li s3, {assign}
    li a2, {k}
    li a3, {dims}
    li a4, {cents}
km_node:
    li s4, 0
    li s5, -1
    li s6, 0
    mv s7, a4
km_c:
    li s8, 0
    mv s9, s0
    li s10, 0
km_d:
    lw t2, 0(s9)
    lw t3, 0(s7)
    sub a0, t2, t3
    bge a0, x0, km_abs
    sub a0, x0, a0
km_abs:
    mv a1, a0
    jal ra, __mul
    add s8, s8, a0
    addi s9, s9, 4
    addi s7, s7, 4
    addi s10, s10, 1
    blt s10, a3, km_d
    beq s4, x0, km_take
    bgeu s8, s5, km_keep
km_take:
    mv s5, s8
    mv s6, s4
km_keep:
    addi s4, s4, 1
    blt s4, a2, km_c
    sw s6, 0(s3)
    addi s3, s3, 4
    mv a0, s6
    mv a1, a3
    jal ra, __mul
    slli a0, a0, 2
    li t4, {sums}
    add t4, t4, a0
    mv t5, s0
    li s10, 0
km_acc:
    lw t2, 0(t5)
    lw t3, 0(t4)
    add t3, t3, t2
    sw t3, 0(t4)
    addi t5, t5, 4
    addi t4, t4, 4
    addi s10, s10, 1
    blt s10, a3, km_acc
    slli t2, s6, 2
    li t3, {counts}
    add t3, t3, t2
    lw t4, 0(t3)
    addi t4, t4, 1
    sw t4, 0(t3)
    mv s0, s9
    addi s2, s2, 1
    blt s2, s1, km_node
    ebreak
{MUL}"
        ),
        Mode::Tc => {
            m.args(&[nodes, cents, assign, sums, counts, 0, 0, k, dims]);
            for start in (0..n).step_by(tile as usize) {
                schedule.tile_work.push((n - start).min(tile) as u64 * k as u64 * dims as u64);
            }
            format!(
                "
    li s0, {ARGS_ADDR}
    li s3, {n}
    li s6, {tile}
    li s5, 0
km_blk:
    sub t2, s3, s5
    blt t2, s6, km_short
    mv t2, s6
km_short:
    sw s5, {start}(s0)
    sw t2, {count}(s0)
    baa 0(s0)
    addi s5, s5, {tile}
    blt s5, s3, km_blk
    ebreak
",
                start = arg_off(5),
                count = arg_off(6),
            )
        }
        Mode::Hw => {
            m.args(&[nodes, cents, assign, sums, counts, n, k, dims]);
            schedule.tile_work.push(n as u64 * k as u64 * dims as u64);
            full_accel_program()
        }
    };
    Ok(Generated { source, dmem_words: m.words, output: Region { addr: assign, len_bytes: out_len }, schedule })
}

/// Software Sobel for one pixel: `a2` = row, `a3` = column. Row addresses
/// are formed with `__mul`, neighbours are clamped to the image.
fn sobel_px(height: u32, width: u32, input: u32, output: u32) -> String {
    let out_minus_in = output.wrapping_sub(input) as i32;
    format!(
        "
__sobel_px:
    mv s11, ra
    addi t2, a2, -1
    bge t2, x0, sp_r0
    li t2, 0
sp_r0:
    addi t3, a2, 1
    li t4, {hm1}
    bge t4, t3, sp_r2
    mv t3, t4
sp_r2:
    addi a4, a3, -1
    bge a4, x0, sp_c0
    li a4, 0
sp_c0:
    addi a5, a3, 1
    li t4, {wm1}
    bge t4, a5, sp_c2
    mv a5, t4
sp_c2:
    mv a0, t2
    li a1, {width}
    jal ra, __mul
    slli a0, a0, 2
    li t5, {input}
    add a6, t5, a0
    mv a0, a2
    li a1, {width}
    jal ra, __mul
    slli a0, a0, 2
    li t5, {input}
    add a7, t5, a0
    mv a0, t3
    li a1, {width}
    jal ra, __mul
    slli a0, a0, 2
    li t5, {input}
    add t4, t5, a0
    slli a4, a4, 2
    slli t5, a3, 2
    slli a5, a5, 2
    add t6, a6, a5
    lw t2, 0(t6)
    mv t0, t2
    sub t1, x0, t2
    add t6, a6, a4
    lw t2, 0(t6)
    sub t0, t0, t2
    sub t1, t1, t2
    add t6, a6, t5
    lw t2, 0(t6)
    slli t2, t2, 1
    sub t1, t1, t2
    add t6, a7, a5
    lw t2, 0(t6)
    slli t2, t2, 1
    add t0, t0, t2
    add t6, a7, a4
    lw t2, 0(t6)
    slli t2, t2, 1
    sub t0, t0, t2
    add t6, t4, a5
    lw t2, 0(t6)
    add t0, t0, t2
    add t1, t1, t2
    add t6, t4, a4
    lw t2, 0(t6)
    sub t0, t0, t2
    add t1, t1, t2
    add t6, t4, t5
    lw t2, 0(t6)
    slli t2, t2, 1
    add t1, t1, t2
    bge t0, x0, sp_gx
    sub t0, x0, t0
sp_gx:
    bge t1, x0, sp_gy
    sub t1, x0, t1
sp_gy:
    add t0, t0, t1
    bge t0, x0, sp_lo
    li t0, 0
sp_lo:
    li t2, 255
    bge t2, t0, sp_hi
    mv t0, t2
sp_hi:
    li t2, {out_minus_in}
    add t6, a7, t2
    add t6, t6, t5
    sw t0, 0(t6)
    jalr x0, 0(s11)
",
        hm1 = height - 1,
        wm1 = width - 1,
    )
}

fn se(height: u32, width: u32, mode: Mode, rng: &mut XorShift64) -> Result<Generated, BenchError> {
    if height < 3 || width < 3 {
        return Err(invalid("edge detection needs an image of at least 3x3"));
    }
    if mode == Mode::Tc && (!(height - 2).is_multiple_of(SE_BUF) || !(width - 2).is_multiple_of(SE_BUF)) {
        return Err(invalid(format!("the image interior must be a multiple of {SE_BUF} in both dimensions")));
    }
    let px = (height * width) as usize;
    let mut m = Alloc::new();
    let input = m.put(&rng.bytes(px));
    let output = m.zeros(px);
    let mut schedule = Schedule::default();
    let mut source = String::new();
    match mode {
        Mode::Sw => {
            write!(
                source,
                "
    li s0, 0
    li s2, {height}
    li s3, {width}
se_r:
    li s1, 0
se_c:
    mv a2, s0
    mv a3, s1
    jal ra, __sobel_px
    addi s1, s1, 1
    blt s1, s3, se_c
    addi s0, s0, 1
    blt s0, s2, se_r
    ebreak
"
            )
            .unwrap();
        }
        Mode::Tc => {
            m.args(&[input, output, width, 0, 0]);
            let mask = SE_BUF - 1;
            for r in 0..height {
                for c in 0..width {
                    if r == 0 || c == 0 || r == height - 1 || c == width - 1 {
                        schedule.sw_pixels += 1;
                    } else if (r - 1) & mask == 0 && (c - 1) & mask == 0 {
                        schedule.tile_work.push((SE_BUF * SE_BUF * 9) as u64);
                    }
                }
            }
            write!(
                source,
                "
    li s0, 0
    li s2, {height}
    li s3, {width}
    addi s4, s2, -1
    addi s5, s3, -1
    li s6, {ARGS_ADDR}
se_r:
    li s1, 0
se_c:
    beq s0, x0, se_edge
    beq s1, x0, se_edge
    beq s0, s4, se_edge
    beq s1, s5, se_edge
    addi t2, s0, -1
    andi t2, t2, {mask}
    bne t2, x0, se_next
    addi t2, s1, -1
    andi t2, t2, {mask}
    bne t2, x0, se_next
    sw s0, {r_off}(s6)
    sw s1, {c_off}(s6)
    baa 0(s6)
    j se_next
se_edge:
    mv a2, s0
    mv a3, s1
    jal ra, __sobel_px
se_next:
    addi s1, s1, 1
    blt s1, s3, se_c
    addi s0, s0, 1
    blt s0, s2, se_r
    ebreak
",
                r_off = arg_off(3),
                c_off = arg_off(4),
            )
            .unwrap();
        }
        Mode::Hw => {
            m.args(&[input, output, height, width]);
            schedule.tile_work.push(px as u64 * 9);
            source = full_accel_program();
        }
    }
    if mode != Mode::Hw {
        source.push_str(&sobel_px(height, width, input, output));
        source.push_str(MUL);
    }
    Ok(Generated { source, dmem_words: m.words, output: Region { addr: output, len_bytes: 4 * px as u32 }, schedule })
}
