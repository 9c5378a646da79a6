//! The `rvmurac` command line: `asm`, `run` and `bench`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 simulation fault,
//! 3 runaway program, 4 cross-mode digest mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::accel::{full_accelerator, tile_accelerator, App, KernelParams};
use crate::asm::{assemble, SourceProgram};
use crate::bench::{self, BenchError, BenchRecord, BenchmarkSpec, Mode};
use crate::config::Config;
use crate::golden::{Interpreter, SimError};
use crate::image::MemoryImage;
use crate::mem::{MemoryBank, DEFAULT_DMEM_BYTES};
use crate::murac::AuxiliaryRegistry;
use crate::pipeline::Pipeline;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SIM: i32 = 2;
pub const EXIT_RUNAWAY: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rvmurac", version, about = "RV32I pipeline simulator with MURAC accelerator sessions")]
struct Cli {
    /// JSON config file; defaults to $RVMURAC_CONFIG if set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble a source file into a hex image.
    Asm {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a hex image on the interpreter or the pipeline.
    Run {
        #[arg(long)]
        imem: PathBuf,
        #[arg(long)]
        dmem: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Engine::Pipeline)]
        mode: Engine,
        /// Accelerator to attach, e.g. `mm_tile` or `se_full`.
        #[arg(long)]
        accel: Option<String>,
        /// Print the per-stage pipeline trace.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        max_cycles: Option<u64>,
        #[arg(long)]
        freq_mhz: Option<f64>,
    },
    /// Generate, run and compare a benchmark.
    Bench {
        #[arg(long)]
        app: App,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Scale::Desk)]
        scale: Scale,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON report, one object per mode.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        max_cycles: Option<u64>,
        #[arg(long)]
        freq_mhz: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Golden,
    Pipeline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Sw,
    Tc,
    Hw,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Desk,
    Paper,
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let code = if e.is_runaway() { EXIT_RUNAWAY } else { EXIT_SIM };
        Self { code, message: e.to_string() }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Sim(s) => s.into(),
            BenchError::DigestMismatch { .. } => Self { code: EXIT_MISMATCH, message: e.to_string() },
            other => Self::usage(other.to_string()),
        }
    }
}

/// Runs the tool with `args` (program name first) and returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = Config::resolve(cli.config.as_deref()).map_err(|e| Failure::usage(e.to_string()))?;
    match cli.command {
        Command::Asm { input, output } => cmd_asm(&input, &output, out),
        Command::Run { imem, dmem, mode, accel, trace, report, max_cycles, freq_mhz } => {
            let mut cfg = cfg;
            cfg.trace |= trace;
            cfg.report = report.or(cfg.report);
            cfg.max_cycles = max_cycles.unwrap_or(cfg.max_cycles);
            cfg.freq_mhz = freq_mhz.unwrap_or(cfg.freq_mhz);
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            cmd_run(&cfg, &imem, dmem.as_deref(), mode, accel.as_deref(), out)
        }
        Command::Bench { app, mode, scale, seed, csv, report, max_cycles, freq_mhz } => {
            let mut cfg = cfg;
            cfg.csv = csv.or(cfg.csv);
            cfg.report = report.or(cfg.report);
            cfg.max_cycles = max_cycles.unwrap_or(cfg.max_cycles);
            cfg.freq_mhz = freq_mhz.unwrap_or(cfg.freq_mhz);
            cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
            let params = match scale {
                Scale::Desk => KernelParams::desk(app),
                Scale::Paper => KernelParams::paper(app),
            };
            cmd_bench(&cfg, params, mode, seed, out)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_asm(input: &Path, output: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let src = SourceProgram::new(&read(input)?);
    let img = assemble(&src).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
    write_file(output, img.to_hex().as_bytes())?;
    let _ = writeln!(out, "{} words written to {}", img.words.len(), output.display());
    Ok(())
}

fn load_image(path: &Path, size: usize) -> Result<MemoryBank, Failure> {
    let img = MemoryImage::from_hex(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut bank = MemoryBank::new(size).map_err(|e| Failure::usage(e.to_string()))?;
    img.load_into(&mut bank)
        .map_err(|e| Failure::usage(format!("{} does not fit in {size} bytes: {e}", path.display())))?;
    Ok(bank)
}

fn registry_for(cfg: &Config, name: Option<&str>) -> Result<AuxiliaryRegistry, Failure> {
    let Some(name) = name else { return Ok(AuxiliaryRegistry::empty()) };
    let bad = || Failure::usage(format!("unknown accelerator `{name}` (expected <app>_tile or <app>_full)"));
    let (app, kind) = name.split_once('_').ok_or_else(bad)?;
    let app: App = app.parse().map_err(|_| bad())?;
    let model = cfg.cycle_model(app);
    let accel = match kind {
        "tile" => tile_accelerator(app, model),
        "full" => full_accelerator(app, model),
        _ => return Err(bad()),
    };
    Ok(AuxiliaryRegistry::with(accel))
}

fn cmd_run(
    cfg: &Config,
    imem_path: &Path,
    dmem_path: Option<&Path>,
    engine: Engine,
    accel: Option<&str>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let imem = load_image(imem_path, cfg.imem_size_bytes)?;
    let dmem_size = cfg.dmem_size_bytes.unwrap_or(DEFAULT_DMEM_BYTES);
    let dmem = match dmem_path {
        Some(p) => load_image(p, dmem_size)?,
        None => MemoryBank::new(dmem_size).map_err(|e| Failure::usage(e.to_string()))?,
    };
    let aux = registry_for(cfg, accel)?;
    let report = match engine {
        Engine::Golden => {
            let mut m = Interpreter::new(imem, dmem, aux);
            m.run_to_halt(cfg.max_cycles)?;
            let s = &m.state;
            let _ = writeln!(out, "halted at pc 0x{:08x} after {} instructions", s.pc, s.retired);
            json!({
                "mode": "golden",
                "retired": s.retired,
                "pc": s.pc,
                "baa_count": m.baa_count,
                "regs": s.regs.to_vec(),
            })
        }
        Engine::Pipeline => {
            let mut p = Pipeline::with_config(imem, dmem, aux, cfg.pipeline());
            let result = p.run(cfg.max_cycles, cfg.freq_mhz);
            if let Some(trace) = p.trace() {
                for entry in trace {
                    let _ = writeln!(out, "{entry}");
                }
            }
            let r = result?;
            let _ = writeln!(
                out,
                "{} cycles, {} retired, {} stall, {} aux, {} flushes, {} baa, {:.6} s at {} MHz",
                r.total_cycles,
                r.retired,
                r.stall_cycles,
                r.aux_cycles,
                r.flushes,
                r.baa_count,
                r.latency_s,
                r.freq_mhz
            );
            let mut v = serde_json::to_value(r).expect("report serializes");
            v["mode"] = json!("pipeline");
            v["pc"] = json!(p.machine.pc);
            v["regs"] = json!(p.machine.regs.to_vec());
            v
        }
    };
    if let Some(path) = &cfg.report {
        write_file(path, serde_json::to_string_pretty(&report).expect("json").as_bytes())?;
    }
    Ok(())
}

fn cmd_bench(cfg: &Config, params: KernelParams, mode: ModeArg, seed: u64, out: &mut dyn Write) -> Result<(), Failure> {
    let app = params.app();
    let mut spec = BenchmarkSpec::new(params, Mode::Sw, seed);
    spec.freq_mhz = cfg.freq_mhz;
    spec.max_cycles = cfg.max_cycles;
    spec.cycle_model = Some(cfg.cycle_model(app));
    spec.dmem_bytes = cfg.dmem_size_bytes;
    spec.imem_bytes = cfg.imem_size_bytes;
    spec.pipeline = cfg.pipeline();
    spec.pipeline.trace = false;

    let single = |m| bench::run_benchmark(&spec.with_mode(m)).map(|r| vec![r.record()]);
    let records: Vec<BenchRecord> = match mode {
        ModeArg::Sw => single(Mode::Sw)?,
        ModeArg::Tc => single(Mode::Tc)?,
        ModeArg::Hw => single(Mode::Hw)?,
        ModeArg::All => bench::compare_modes(&spec, &Mode::ALL)?.records(),
    };

    let _ = writeln!(out, "{app} ({})", bench::params_label(&params));
    let _ = writeln!(
        out,
        "{:<4} {:>14} {:>14} {:>12} {:>12} {:>10} {:>8} {:>12}  digest",
        "mode", "cycles", "retired", "stall", "aux", "flushes", "baa", "latency_s"
    );
    for r in &records {
        let _ = writeln!(
            out,
            "{:<4} {:>14} {:>14} {:>12} {:>12} {:>10} {:>8} {:>12.6}  {}",
            r.mode.name(),
            r.total_cycles,
            r.retired,
            r.stall_cycles,
            r.aux_cycles,
            r.flushes,
            r.baa_count,
            r.latency_s,
            r.output_digest
        );
    }
    if let [sw, tc, hw] = records.as_slice() {
        let x = |a: &BenchRecord, b: &BenchRecord| a.total_cycles as f64 / b.total_cycles as f64;
        let _ = writeln!(out, "speedup sw/tc {:.2}  sw/hw {:.2}  tc/hw {:.3}", x(sw, tc), x(sw, hw), x(tc, hw));
    }

    if let Some(path) = &cfg.report {
        write_file(path, serde_json::to_string_pretty(&records).expect("json").as_bytes())?;
    }
    if let Some(path) = &cfg.csv {
        let mut buf = Vec::new();
        bench::write_csv(&mut buf, &records)?;
        write_file(path, &buf)?;
    }
    Ok(())
}
