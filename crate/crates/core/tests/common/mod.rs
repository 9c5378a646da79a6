#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rvmurac::accel::KernelParams;
use rvmurac::asm::{assemble, SourceProgram};
use rvmurac::golden::Interpreter;
use rvmurac::mem::MemoryBank;
use rvmurac::murac::AuxiliaryRegistry;
use rvmurac::pipeline::{Pipeline, RunReport};

// ---------------------------------------------------------------------------
// Host reference kernels

pub fn ref_mm(a: &[u32], b: &[u32], n: usize) -> Vec<u32> {
    let mut c = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u32;
            for k in 0..n {
                acc = acc.wrapping_add(a[i * n + k].wrapping_mul(b[k * n + j]));
            }
            c[i * n + j] = acc;
        }
    }
    c
}

pub fn ref_fir(x: &[u32], h: &[u32], n_out: usize) -> Vec<u32> {
    (0..n_out)
        .map(|i| h.iter().enumerate().fold(0u32, |acc, (t, &ht)| acc.wrapping_add(ht.wrapping_mul(x[i + t]))))
        .collect()
}

/// One assignment pass with centroids seeded from the first `k` nodes.
/// Returns assignments, per-centroid coordinate sums and counts.
pub fn ref_km(nodes: &[u32], cents: &[u32], k: usize, dims: usize) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let n = nodes.len() / dims;
    let mut assign = vec![0u32; n];
    let mut sums = vec![0u32; k * dims];
    let mut counts = vec![0u32; k];
    for i in 0..n {
        let p = &nodes[i * dims..(i + 1) * dims];
        let dist = |c: usize| {
            (0..dims).fold(0u32, |acc, d| {
                let diff = p[d].wrapping_sub(cents[c * dims + d]);
                acc.wrapping_add(diff.wrapping_mul(diff))
            })
        };
        let best = (0..k).min_by_key(|&c| (dist(c), c)).unwrap();
        assign[i] = best as u32;
        for d in 0..dims {
            sums[best * dims + d] = sums[best * dims + d].wrapping_add(p[d]);
        }
        counts[best] += 1;
    }
    (assign, sums, counts)
}

/// Sobel magnitude |Gx| + |Gy| clamped to 0..=255, with edge samples
/// replicated outward.
pub fn ref_se(img: &[u32], h: usize, w: usize) -> Vec<u32> {
    let at = |y: isize, x: isize| {
        let y = y.clamp(0, h as isize - 1) as usize;
        let x = x.clamp(0, w as isize - 1) as usize;
        img[y * w + x] as i64
    };
    let mut out = vec![0u32; h * w];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = at(y - 1, x + 1) + 2 * at(y, x + 1) + at(y + 1, x + 1)
                - at(y - 1, x - 1)
                - 2 * at(y, x - 1)
                - at(y + 1, x - 1);
            let gy = at(y + 1, x - 1) + 2 * at(y + 1, x) + at(y + 1, x + 1)
                - at(y - 1, x - 1)
                - 2 * at(y - 1, x)
                - at(y - 1, x + 1);
            out[(y as usize) * w + x as usize] = (gx.abs() + gy.abs()).clamp(0, 255) as u32;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Independent input generation and digest

/// Marsaglia xorshift64 with shifts 13/7/17, top byte per draw.
pub fn host_bytes(seed: u64, n: usize, state: &mut u64) -> Vec<u32> {
    if *state == 0 {
        *state = if seed == 0 { 0x9e37_79b9_7f4a_7c15 } else { seed };
    }
    (0..n)
        .map(|_| {
            let mut x = *state;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            *state = x;
            (x >> 56) as u32
        })
        .collect()
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn words_digest(words: &[u32]) -> u64 {
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    fnv1a64(&bytes)
}

/// Expected output digest of a benchmark, computed entirely on the host.
pub fn expected_digest(params: &KernelParams, seed: u64) -> u64 {
    let mut st = 0;
    let out = match *params {
        KernelParams::Mm { n } => {
            let n = n as usize;
            let a = host_bytes(seed, n * n, &mut st);
            let b = host_bytes(seed, n * n, &mut st);
            ref_mm(&a, &b, n)
        }
        KernelParams::Fir { n_inputs, n_taps } => {
            let x = host_bytes(seed, (n_inputs + n_taps - 1) as usize, &mut st);
            let h = host_bytes(seed, n_taps as usize, &mut st);
            ref_fir(&x, &h, n_inputs as usize)
        }
        KernelParams::Km { n_nodes, k, dims } => {
            let (k, dims) = (k as usize, dims as usize);
            let nodes = host_bytes(seed, n_nodes as usize * dims, &mut st);
            let (mut a, s, c) = ref_km(&nodes, &nodes[..k * dims], k, dims);
            a.extend(s);
            a.extend(c);
            a
        }
        KernelParams::Se { height, width } => {
            let img = host_bytes(seed, (height * width) as usize, &mut st);
            ref_se(&img, height as usize, width as usize)
        }
    };
    words_digest(&out)
}

// ---------------------------------------------------------------------------
// Random halting programs

pub const DATA_BASE_REG: u8 = 31;
pub const LOOP_REG: u8 = 30;
pub const SCRATCH_REG: u8 = 29;
/// DMEM window the random programs load from and store to.
pub const DATA_BASE: u32 = 0x800;

fn dest(rng: &mut StdRng) -> u8 {
    // x0 occasionally, to check writes are discarded.
    if rng.gen_ratio(1, 20) {
        0
    } else {
        rng.gen_range(1..=28)
    }
}

fn src(rng: &mut StdRng) -> u8 {
    if rng.gen_ratio(1, 10) {
        0
    } else {
        rng.gen_range(1..=28)
    }
}

fn imm12(rng: &mut StdRng) -> i32 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-2048..=2047),
        1 => *[-2048, -1, 0, 1, 2047].get(rng.gen_range(0..5)).unwrap(),
        _ => rng.gen_range(-16..=16),
    }
}

fn straight_line(rng: &mut StdRng, out: &mut Vec<String>) {
    const R: [&str; 10] = ["add", "sub", "sll", "slt", "sltu", "xor", "srl", "sra", "or", "and"];
    const I: [&str; 6] = ["addi", "slti", "sltiu", "xori", "ori", "andi"];
    const SH: [&str; 3] = ["slli", "srli", "srai"];
    const LD: [(&str, i32); 5] = [("lb", 1), ("lh", 2), ("lw", 4), ("lbu", 1), ("lhu", 2)];
    const ST: [(&str, i32); 3] = [("sb", 1), ("sh", 2), ("sw", 4)];
    let b = DATA_BASE_REG;
    match rng.gen_range(0..100) {
        0..=29 => out.push(format!("{} x{}, x{}, x{}", R[rng.gen_range(0..10)], dest(rng), src(rng), src(rng))),
        30..=49 => out.push(format!("{} x{}, x{}, {}", I[rng.gen_range(0..6)], dest(rng), src(rng), imm12(rng))),
        50..=57 => {
            out.push(format!("{} x{}, x{}, {}", SH[rng.gen_range(0..3)], dest(rng), src(rng), rng.gen_range(0..32)))
        }
        58..=61 => out.push(format!("lui x{}, {}", dest(rng), rng.gen_range(0..(1 << 20)))),
        62..=63 => out.push(format!("auipc x{}, {}", dest(rng), rng.gen_range(0..16))),
        64..=79 => {
            let (op, size) = LD[rng.gen_range(0..5)];
            let off = rng.gen_range(-64..64) * size;
            out.push(format!("{op} x{}, {off}(x{b})", dest(rng)));
        }
        80..=93 => {
            let (op, size) = ST[rng.gen_range(0..3)];
            let off = rng.gen_range(-64..64) * size;
            out.push(format!("{op} x{}, {off}(x{b})", src(rng)));
        }
        94..=96 => out.push("nop".into()),
        97 => out.push("fence".into()),
        98 => out.push("ecall".into()),
        _ => {
            // Load, then use the result immediately.
            let r = rng.gen_range(1..=28);
            out.push(format!("lw x{r}, {}(x{b})", rng.gen_range(-64..64) * 4));
            out.push(format!("add x{}, x{r}, x{}", dest(rng), src(rng)));
        }
    }
}

/// A random RV32I program that always halts: straight-line code, forward
/// branches and jumps, and counted loops. At most `max_len` instructions.
pub fn random_program(seed: u64, max_len: usize) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lines = vec![format!("li x{DATA_BASE_REG}, {DATA_BASE}")];
    for r in 1..=28 {
        if rng.gen_bool(0.5) {
            lines.push(format!("li x{r}, {}", rng.gen::<i32>()));
        }
    }
    let mut label = 0;
    let budget = max_len.saturating_sub(12);
    while lines.len() < budget {
        let room = budget - lines.len();
        match rng.gen_range(0..10) {
            0..=5 => straight_line(&mut rng, &mut lines),
            6 if room > 12 => {
                // Forward conditional branch over a few instructions.
                const BR: [&str; 6] = ["beq", "bne", "blt", "bge", "bltu", "bgeu"];
                label += 1;
                lines.push(format!("{} x{}, x{}, f{label}", BR[rng.gen_range(0..6)], src(&mut rng), src(&mut rng)));
                for _ in 0..rng.gen_range(0..4) {
                    straight_line(&mut rng, &mut lines);
                }
                lines.push(format!("f{label}:"));
            }
            7 if room > 12 => {
                label += 1;
                if rng.gen_bool(0.5) {
                    lines.push(format!("jal x{}, f{label}", dest(&mut rng)));
                    straight_line(&mut rng, &mut lines);
                } else {
                    // Indirect jump over one instruction.
                    lines.push(format!("auipc x{SCRATCH_REG}, 0"));
                    lines.push(format!("jalr x{}, 13(x{SCRATCH_REG})", dest(&mut rng)));
                    lines.push(format!("addi x{}, x0, 99", dest(&mut rng)));
                }
                lines.push(format!("f{label}:"));
            }
            8 if room > 40 => {
                label += 1;
                lines.push(format!("li x{LOOP_REG}, {}", rng.gen_range(1..6)));
                lines.push(format!("l{label}:"));
                for _ in 0..rng.gen_range(1..8) {
                    straight_line(&mut rng, &mut lines);
                }
                lines.push(format!("addi x{LOOP_REG}, x{LOOP_REG}, -1"));
                lines.push(format!("bne x{LOOP_REG}, x0, l{label}"));
            }
            _ => straight_line(&mut rng, &mut lines),
        }
    }
    lines.push("ebreak".into());
    lines.join("\n")
}

pub const MEM_BYTES: usize = 16 * 1024;

pub fn banks(src: &str) -> (MemoryBank, MemoryBank) {
    let img = assemble(&SourceProgram::new(src)).unwrap_or_else(|e| panic!("{e}\n{src}"));
    let mut imem = MemoryBank::new(MEM_BYTES).unwrap();
    img.load_into(&mut imem).unwrap();
    let mut dmem = MemoryBank::new(MEM_BYTES).unwrap();
    for (i, b) in (0..MEM_BYTES as u32).step_by(4).enumerate() {
        dmem.write_u32(b, (i as u32).wrapping_mul(0x9e37_79b9)).unwrap();
    }
    (imem, dmem)
}

pub fn run_golden(src: &str) -> Interpreter {
    let (imem, dmem) = banks(src);
    let mut m = Interpreter::new(imem, dmem, AuxiliaryRegistry::empty());
    m.run_to_halt(1_000_000).unwrap_or_else(|e| panic!("{e}\n{src}"));
    m
}

pub fn run_pipeline(src: &str) -> (Pipeline, RunReport) {
    let (imem, dmem) = banks(src);
    let mut p = Pipeline::new(imem, dmem, AuxiliaryRegistry::empty());
    let r = p.run(10_000_000, 100.0).unwrap_or_else(|e| panic!("{e}\n{src}"));
    (p, r)
}

/// Runs `src` on both models and returns a description of the first
/// architectural difference, if any.
pub fn compare_models(src: &str) -> Option<String> {
    let g = run_golden(src);
    let (p, _) = run_pipeline(src);
    if g.state.regs != p.machine.regs {
        return Some(format!("registers differ:\n golden {:x?}\n pipe   {:x?}", g.state.regs, p.machine.regs));
    }
    if g.state.retired != p.machine.retired {
        return Some(format!("retired {} vs {}", g.state.retired, p.machine.retired));
    }
    if g.state.pc != p.machine.pc {
        return Some(format!("pc 0x{:x} vs 0x{:x}", g.state.pc, p.machine.pc));
    }
    if g.dmem.as_bytes() != p.dmem().as_bytes() {
        return Some("DMEM differs".into());
    }
    None
}

// ---------------------------------------------------------------------------
// Instruction sweep

use rvmurac::isa::{Format, Instruction, Kind};

pub const SWEEP_REGS: [u8; 4] = [0, 1, 15, 31];

/// Every kind crossed with register indices {0, 1, 15, 31} and the boundary
/// immediates of its format.
pub fn sweep_instructions() -> Vec<Instruction> {
    let mut out = Vec::new();
    for &kind in Kind::ALL {
        let fmt = kind.format();
        let imms: Vec<i32> = match fmt {
            Format::R | Format::System => vec![0],
            Format::I | Format::S | Format::Custom => vec![-2048, -1, 0, 1, 2047],
            Format::Shift => vec![0, 1, 15, 31],
            Format::B => vec![-4096, -2, 0, 2, 4094],
            Format::U => vec![0, 0x1000, 0x7fff_f000, 0x8000_0000u32 as i32, 0xffff_f000u32 as i32],
            Format::J => vec![-(1 << 20), -2, 0, 2, (1 << 20) - 2],
            Format::Fence => vec![0, 0x0f, 0x33, 0xff],
        };
        let (uses_rd, uses_rs1, uses_rs2) = match fmt {
            Format::R => (true, true, true),
            Format::I | Format::Shift => (true, true, false),
            Format::S | Format::B => (false, true, true),
            Format::U | Format::J => (true, false, false),
            Format::Custom => (false, true, false),
            Format::Fence | Format::System => (false, false, false),
        };
        let pick = |used: bool| if used { SWEEP_REGS.to_vec() } else { vec![0] };
        for &rd in &pick(uses_rd) {
            for &rs1 in &pick(uses_rs1) {
                for &rs2 in &pick(uses_rs2) {
                    for &imm in &imms {
                        out.push(Instruction { kind, rd, rs1, rs2, imm });
                    }
                }
            }
        }
    }
    out
}
