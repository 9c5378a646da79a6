//! Benchmark harness: builds each kernel as a pure-software (`sw`),
//! tightly-coupled (`tc`) or full-accelerator (`hw`) program, runs it on the
//! pipeline and reports cycles and an FNV-1a digest of the result region.
//!
//! Inputs come from a seeded xorshift generator and are identical across
//! modes, so the three digests of one seed must agree.

mod gen;
mod rng;

use std::fmt;
use std::hash::Hasher;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::accel::{full_accelerator, tile_accelerator, App, CycleModel, KernelParams};
use crate::asm::{assemble, AsmError, SourceProgram};
use crate::golden::{Interpreter, SimError};
use crate::image::MemoryImage;
use crate::mem::{MemoryBank, DEFAULT_DMEM_BYTES, DEFAULT_IMEM_BYTES};
use crate::murac::{AuxiliaryRegistry, PortStats};
use crate::pipeline::{Pipeline, PipelineConfig, RunReport};

pub use gen::{Region, Schedule, ARGS_ADDR, DATA_BASE};
pub use rng::XorShift64;

/// Default clock, the reported post-route frequency.
pub const DEFAULT_FREQ_MHZ: f64 = 147.929;
pub const DEFAULT_MAX_CYCLES: u64 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sw,
    Tc,
    Hw,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Sw, Mode::Tc, Mode::Hw];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sw => "sw",
            Mode::Tc => "tc",
            Mode::Hw => "hw",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected sw, tc or hw)"))
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("benchmark needs {needed} bytes of DMEM but only {available} are configured")]
    ParamsExceedMemory { needed: usize, available: usize },
    #[error("generated program does not fit in {available} bytes of IMEM")]
    ProgramTooLarge { available: usize },
    #[error("generated program failed to assemble: {0}")]
    Assemble(#[from] AsmError),
    #[error("simulation failed: {0}")]
    Sim(#[from] SimError),
    #[error("output digests differ across modes for {app}: {}", fmt_digests(.digests))]
    DigestMismatch { app: App, digests: Vec<(Mode, u64)> },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn fmt_digests(d: &[(Mode, u64)]) -> String {
    d.iter().map(|(m, v)| format!("{m}={}", digest_hex(*v))).collect::<Vec<_>>().join(" ")
}

pub fn digest_hex(d: u64) -> String {
    format!("{d:016x}")
}

/// FNV-1a 64 over the little-endian bytes of `region`.
pub fn digest_region(dmem: &MemoryBank, region: Region) -> u64 {
    let start = region.addr as usize;
    let mut h = fnv::FnvHasher::default();
    h.write(&dmem.as_bytes()[start..start + region.len_bytes as usize]);
    h.finish()
}

/// One benchmark run's inputs.
#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub params: KernelParams,
    pub mode: Mode,
    pub seed: u64,
    pub freq_mhz: f64,
    /// Accelerator timing; `None` uses the declared default for the app.
    pub cycle_model: Option<CycleModel>,
    /// Fixed DMEM size; `None` picks the smallest power of two that fits,
    /// and never less than the default.
    pub dmem_bytes: Option<usize>,
    pub imem_bytes: usize,
    pub max_cycles: u64,
    pub pipeline: PipelineConfig,
}

impl BenchmarkSpec {
    pub fn new(params: KernelParams, mode: Mode, seed: u64) -> Self {
        Self {
            params,
            mode,
            seed,
            freq_mhz: DEFAULT_FREQ_MHZ,
            cycle_model: None,
            dmem_bytes: None,
            imem_bytes: DEFAULT_IMEM_BYTES,
            max_cycles: DEFAULT_MAX_CYCLES,
            pipeline: PipelineConfig::default(),
        }
    }

    pub fn app(&self) -> App {
        self.params.app()
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Self { mode, ..self.clone() }
    }

    pub fn model(&self) -> CycleModel {
        self.cycle_model.unwrap_or_else(|| CycleModel::default_for(self.app()))
    }

    /// The accelerator a program of this mode invokes. Software programs
    /// get an empty slot.
    pub fn registry(&self) -> AuxiliaryRegistry {
        match self.mode {
            Mode::Sw => AuxiliaryRegistry::empty(),
            Mode::Tc => AuxiliaryRegistry::with(tile_accelerator(self.app(), self.model())),
            Mode::Hw => AuxiliaryRegistry::with(full_accelerator(self.app(), self.model())),
        }
    }
}

/// A generated benchmark, ready to load.
#[derive(Debug, Clone)]
pub struct BenchProgram {
    pub source: SourceProgram,
    pub imem: MemoryImage,
    pub dmem: MemoryImage,
    pub imem_bytes: usize,
    pub dmem_bytes: usize,
    pub output: Region,
    pub schedule: Schedule,
}

impl BenchProgram {
    pub fn imem_bank(&self) -> MemoryBank {
        let mut bank = MemoryBank::new(self.imem_bytes).expect("size validated at generation");
        self.imem.load_into(&mut bank).expect("program validated to fit");
        bank
    }

    pub fn dmem_bank(&self) -> MemoryBank {
        let mut bank = MemoryBank::new(self.dmem_bytes).expect("size validated at generation");
        self.dmem.load_into(&mut bank).expect("data validated to fit");
        bank
    }
}

pub fn gen_program(spec: &BenchmarkSpec) -> Result<BenchProgram, BenchError> {
    let g = gen::generate(&spec.params, spec.mode, spec.seed)?;
    let source = SourceProgram::new(&g.source);
    let imem = assemble(&source)?;
    if imem.end_address() > spec.imem_bytes as u64 || MemoryBank::new(spec.imem_bytes).is_err() {
        return Err(BenchError::ProgramTooLarge { available: spec.imem_bytes });
    }
    let needed = g.dmem_words.len() * 4;
    let dmem_bytes = match spec.dmem_bytes {
        Some(available) if available < needed || MemoryBank::new(available).is_err() => {
            return Err(BenchError::ParamsExceedMemory { needed, available })
        }
        Some(available) => available,
        None => needed.next_power_of_two().max(DEFAULT_DMEM_BYTES),
    };
    Ok(BenchProgram {
        source,
        imem,
        dmem: MemoryImage::new(0, g.dmem_words),
        imem_bytes: spec.imem_bytes,
        dmem_bytes,
        output: g.output,
        schedule: g.schedule,
    })
}

/// Outcome of one cycle-accurate benchmark run.
#[derive(Debug, Clone)]
pub struct BenchResult {
    pub app: App,
    pub mode: Mode,
    pub params: KernelParams,
    pub seed: u64,
    pub report: RunReport,
    pub digest: u64,
    pub port: PortStats,
}

impl BenchResult {
    pub fn record(&self) -> BenchRecord {
        let r = &self.report;
        BenchRecord {
            app: self.app,
            mode: self.mode,
            params: self.params,
            seed: self.seed,
            total_cycles: r.total_cycles,
            retired: r.retired,
            stall_cycles: r.stall_cycles,
            aux_cycles: r.aux_cycles,
            flushes: r.flushes,
            baa_count: r.baa_count,
            freq_mhz: r.freq_mhz,
            latency_s: r.latency_s,
            output_digest: digest_hex(self.digest),
        }
    }
}

/// Serialized form of a run, one JSON object per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub app: App,
    pub mode: Mode,
    pub params: KernelParams,
    pub seed: u64,
    pub total_cycles: u64,
    pub retired: u64,
    pub stall_cycles: u64,
    pub aux_cycles: u64,
    pub flushes: u64,
    pub baa_count: u64,
    pub freq_mhz: f64,
    pub latency_s: f64,
    pub output_digest: String,
}

pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchResult, BenchError> {
    let prog = gen_program(spec)?;
    let mut pipe = Pipeline::with_config(prog.imem_bank(), prog.dmem_bank(), spec.registry(), spec.pipeline);
    let report = pipe.run(spec.max_cycles, spec.freq_mhz)?;
    Ok(BenchResult {
        app: spec.app(),
        mode: spec.mode,
        params: spec.params,
        seed: spec.seed,
        report,
        digest: digest_region(pipe.dmem(), prog.output),
        port: pipe.port_stats(),
    })
}

/// Runs the benchmark on the architectural interpreter instead of the
/// pipeline. Returns the halted interpreter and the output digest.
pub fn run_golden(spec: &BenchmarkSpec) -> Result<(Interpreter, u64), BenchError> {
    let prog = gen_program(spec)?;
    let mut m = Interpreter::new(prog.imem_bank(), prog.dmem_bank(), spec.registry());
    m.run_to_halt(spec.max_cycles)?;
    let digest = digest_region(&m.dmem, prog.output);
    Ok((m, digest))
}

/// The three modes of one benchmark.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub results: Vec<BenchResult>,
}

impl Comparison {
    pub fn get(&self, mode: Mode) -> Option<&BenchResult> {
        self.results.iter().find(|r| r.mode == mode)
    }

    pub fn cycles(&self, mode: Mode) -> Option<u64> {
        self.get(mode).map(|r| r.report.total_cycles)
    }

    /// `cycles(a) / cycles(b)`.
    pub fn ratio(&self, a: Mode, b: Mode) -> Option<f64> {
        Some(self.cycles(a)? as f64 / self.cycles(b)? as f64)
    }

    pub fn records(&self) -> Vec<BenchRecord> {
        self.results.iter().map(BenchResult::record).collect()
    }
}

/// Runs `modes` of `spec` in parallel and checks that their digests agree.
pub fn compare_modes(spec: &BenchmarkSpec, modes: &[Mode]) -> Result<Comparison, BenchError> {
    let results: Vec<Result<BenchResult, BenchError>> = std::thread::scope(|s| {
        let handles: Vec<_> = modes.iter().map(|&m| s.spawn(move || run_benchmark(&spec.with_mode(m)))).collect();
        handles.into_iter().map(|h| h.join().expect("benchmark thread panicked")).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let first = results.first().map(|r| r.digest);
    if results.iter().any(|r| Some(r.digest) != first) {
        return Err(BenchError::DigestMismatch {
            app: spec.app(),
            digests: results.iter().map(|r| (r.mode, r.digest)).collect(),
        });
    }
    Ok(Comparison { results })
}

/// Formats problem sizes as `key=value` pairs separated by spaces.
pub fn params_label(p: &KernelParams) -> String {
    match *p {
        KernelParams::Mm { n } => format!("n={n}"),
        KernelParams::Fir { n_inputs, n_taps } => format!("n_inputs={n_inputs} n_taps={n_taps}"),
        KernelParams::Km { n_nodes, k, dims } => format!("n_nodes={n_nodes} k={k} dims={dims}"),
        KernelParams::Se { height, width } => format!("height={height} width={width}"),
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    app: App,
    mode: Mode,
    params: String,
    seed: u64,
    total_cycles: u64,
    retired: u64,
    stall_cycles: u64,
    aux_cycles: u64,
    flushes: u64,
    baa_count: u64,
    freq_mhz: f64,
    latency_s: f64,
    output_digest: &'a str,
}

pub fn write_csv<W: io::Write>(out: W, records: &[BenchRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow {
            app: r.app,
            mode: r.mode,
            params: params_label(&r.params),
            seed: r.seed,
            total_cycles: r.total_cycles,
            retired: r.retired,
            stall_cycles: r.stall_cycles,
            aux_cycles: r.aux_cycles,
            flushes: r.flushes,
            baa_count: r.baa_count,
            freq_mhz: r.freq_mhz,
            latency_s: r.latency_s,
            output_digest: &r.output_digest,
        })?;
    }
    w.flush()?;
    Ok(())
}
