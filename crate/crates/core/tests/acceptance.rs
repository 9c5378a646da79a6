//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::{Duration, Instant};

use rvmurac::accel::{App, KernelParams};
use rvmurac::bench::{compare_modes, gen_program, run_benchmark, BenchmarkSpec, Comparison, Mode};
use rvmurac::golden::Interpreter;
use rvmurac::isa::{decode, encode, DecodeError, InstructionWord};
use rvmurac::pipeline::{latency_seconds, Pipeline, PipelineConfig, Stage, Tag};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<f64, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {:.2} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64());
    Ok(t.as_secs_f64())
}

fn c1_isa_round_trip() -> Outcome {
    let start = Instant::now();
    let sweep = common::sweep_instructions();
    for i in &sweep {
        let w = encode(i).map_err(|e| format!("{i:?}: {e}"))?;
        ensure!(decode(w) == Ok(*i), "{i:?} decoded as {:?}", decode(w));
    }
    let mut illegal = 0;
    for funct3 in 2..8u32 {
        for rs1 in [0u32, 1, 15, 31] {
            for imm in [0u32, 0x7ff, 0x800, 0xfff] {
                let w = (imm << 20) | (rs1 << 15) | (funct3 << 12) | 0b000_1011;
                ensure!(decode(InstructionWord(w)) == Err(DecodeError::IllegalInstruction(w)), "{w:08x} decoded");
                illegal += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("{} instructions round-trip, {illegal} custom-0 words rejected, {t:.3} s", sweep.len()))
}

fn c2_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut instructions = 0;
    for seed in 0..1000u64 {
        let src = common::random_program(seed, 500);
        let n = rvmurac::asm::assemble(&rvmurac::asm::SourceProgram::new(&src)).unwrap().words.len();
        ensure!(n <= 500, "seed {seed} has {n} instructions");
        ensure!(!src.contains("baa"), "seed {seed} uses baa");
        instructions += n;
        if let Some(diff) = common::compare_models(&src) {
            return Err(format!("seed {seed}: {diff}"));
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("1000 programs ({instructions} instructions) identical, {t:.2} s"))
}

fn pipeline_for(src: &str, trace: bool) -> Pipeline {
    let (imem, dmem) = common::banks(src);
    let config = PipelineConfig { trace, ..PipelineConfig::default() };
    Pipeline::with_config(imem, dmem, rvmurac::murac::AuxiliaryRegistry::empty(), config)
}

fn c3_timing_laws() -> Outcome {
    // (a) N independent ALU instructions: the last one leaves WB at N + 3.
    for n in [1usize, 8, 100] {
        let mut src: String = (0..n).map(|i| format!("addi x{}, x0, {}\n", 1 + i % 28, i)).collect();
        src.push_str("ebreak\n");
        let mut p = pipeline_for(&src, true);
        let r = p.run(10_000, 100.0).map_err(|e| e.to_string())?;
        let done = p
            .trace()
            .unwrap()
            .iter()
            .filter(|e| e.stage == Stage::Wb && e.tag == Tag::Normal && e.pc == Some(4 * (n as u32 - 1)))
            .map(|e| e.cycle)
            .next();
        ensure!(done == Some(n as u64 + 3), "N={n}: last ALU op retired at {done:?}");
        ensure!(r.stall_cycles == 0 && r.total_cycles == r.retired + 3, "N={n}: {r:?}");
    }
    // (b) load followed by a dependent use.
    let timing = |src: &str| {
        let (p, r) = common::run_pipeline(src);
        (r, p.machine.regs)
    };
    let (indep, _) = timing("li x2, 0x800\nlw x1, 0(x2)\nadd x3, x4, x4\nebreak");
    let (dep, regs) = timing("li x2, 0x800\nlw x1, 0(x2)\nadd x3, x1, x1\nebreak");
    ensure!(dep.stall_cycles == 0 && dep.total_cycles == indep.total_cycles, "load-use: {dep:?} vs {indep:?}");
    ensure!(regs[3] == regs[1].wrapping_mul(2), "load-use value not forwarded");
    // (c) each taken branch adds exactly two cycles.
    for k in 1..=6 {
        let body = |op: &str| -> String {
            (0..k).map(|i| format!("{op} x0, x0, t{i}\nt{i}: addi x{}, x0, {i}\n", 1 + i)).collect::<String>()
                + "ebreak"
        };
        let (taken, _) = timing(&body("beq"));
        let (fall, _) = timing(&body("bne"));
        ensure!(
            taken.total_cycles == fall.total_cycles + 2 * k as u64,
            "k={k}: {} vs {}",
            taken.total_cycles,
            fall.total_cycles
        );
        ensure!(taken.flushes == k as u64, "k={k}: {} flushes", taken.flushes);
    }
    // (d) accounting identity on random halting programs.
    for seed in 5000..5100 {
        let (_, r) = common::run_pipeline(&common::random_program(seed, 500));
        ensure!(r.total_cycles == r.retired + 3 + r.stall_cycles + 2 * r.flushes, "seed {seed}: {r:?}");
    }
    Ok("N+3 fill for N in {1,8,100}; load-use 0 stalls; +2 per taken branch; identity on 100 programs".into())
}

fn c4_latency() -> Outcome {
    let table = [(1_965_954_155u64, 13.29), (350_096_784, 2.37), (32_382_531, 0.22), (388_273_610, 2.62)];
    let mut shown = Vec::new();
    for (cycles, secs) in table {
        let l = latency_seconds(cycles, 147.929);
        ensure!((l - secs).abs() <= 0.01, "{cycles} cycles -> {l:.4} s, expected {secs}");
        shown.push(format!("{l:.2}"));
    }
    Ok(format!("latencies {} s at 147.929 MHz", shown.join(", ")))
}

/// Counts how often `label` is entered while running `spec` on the
/// interpreter. Returns the count and the output digest.
fn golden_with_entry_count(spec: &BenchmarkSpec, label: &str) -> Result<(u64, u64, Interpreter), String> {
    let prog = gen_program(spec).map_err(|e| e.to_string())?;
    let target = prog.imem.symbol(label).ok_or(format!("no `{label}` in program"))?;
    let mut m = Interpreter::new(prog.imem_bank(), prog.dmem_bank(), spec.registry());
    let mut entries = 0;
    while !m.state.halted {
        if m.state.pc == target {
            entries += 1;
        }
        m.step().map_err(|e| e.to_string())?;
    }
    let digest = rvmurac::bench::digest_region(&m.dmem, prog.output);
    Ok((entries, digest, m))
}

fn c5_sobel_structure() -> Outcome {
    let params = KernelParams::paper(App::Se);
    ensure!(params == KernelParams::Se { height: 130, width: 130 }, "unexpected SE size {params:?}");
    let tc = BenchmarkSpec::new(params, Mode::Tc, 1);
    let prog = gen_program(&tc).map_err(|e| e.to_string())?;
    ensure!(prog.schedule.invocations() == 64, "{} tiles scheduled", prog.schedule.invocations());
    ensure!(prog.schedule.sw_pixels == 516, "{} software pixels scheduled", prog.schedule.sw_pixels);

    let (sw_pixels, tc_golden, m) = golden_with_entry_count(&tc, "__sobel_px")?;
    ensure!(sw_pixels == 516, "{sw_pixels} pixels handled in software");
    ensure!(m.baa_count == 64, "{} accelerator invocations", m.baa_count);
    let tc_run = run_benchmark(&tc).map_err(|e| e.to_string())?;
    ensure!(tc_run.report.baa_count == 64, "pipeline issued {} baa", tc_run.report.baa_count);
    ensure!(tc_run.digest == tc_golden, "pipeline and interpreter disagree");

    let (_, sw_digest, _) = golden_with_entry_count(&tc.with_mode(Mode::Sw), "__sobel_px")?;
    ensure!(sw_digest == tc_run.digest, "TC {:016x} vs SW {sw_digest:016x}", tc_run.digest);
    ensure!(sw_digest == common::expected_digest(&params, 1), "SW output differs from the host Sobel");
    Ok(format!("130x130: 64 tiles, 516 software pixels, TC == SW ({:016x})", sw_digest))
}

/// Desk-scale comparisons for seeds 1..=3, shared by criteria 6, 7 and 9.
struct Desk {
    runs: Vec<(App, u64, Result<Comparison, String>)>,
    elapsed: Duration,
}

fn desk_runs() -> Desk {
    let start = Instant::now();
    let mut runs = Vec::new();
    for app in App::ALL {
        for seed in 1..=3 {
            let spec = BenchmarkSpec::new(KernelParams::desk(app), Mode::Sw, seed);
            runs.push((app, seed, compare_modes(&spec, &Mode::ALL).map_err(|e| e.to_string())));
        }
    }
    Desk { runs, elapsed: start.elapsed() }
}

fn c6_cross_mode(desk: &Desk) -> Outcome {
    for (app, seed, cmp) in &desk.runs {
        let cmp = cmp.as_ref().map_err(|e| format!("{app} seed {seed}: {e}"))?;
        let digests: Vec<u64> = cmp.results.iter().map(|r| r.digest).collect();
        ensure!(digests.len() == 3 && digests.iter().all(|d| *d == digests[0]), "{app} seed {seed}: {digests:x?}");
        let expect = common::expected_digest(&KernelParams::desk(*app), *seed);
        ensure!(digests[0] == expect, "{app} seed {seed}: digest differs from host reference");
    }
    ensure!(desk.elapsed < Duration::from_secs(60), "took {:.1} s", desk.elapsed.as_secs_f64());
    Ok(format!("4 apps x 3 seeds x 3 modes identical, {:.1} s", desk.elapsed.as_secs_f64()))
}

fn c7_ordering(desk: &Desk) -> Outcome {
    let mut ratios = Vec::new();
    for app in App::ALL {
        let mut app_ratio = None;
        for (a, seed, cmp) in desk.runs.iter().filter(|(a, ..)| *a == app) {
            let cmp = cmp.as_ref().map_err(|e| format!("{a} seed {seed}: {e}"))?;
            let c = |m| cmp.cycles(m).unwrap();
            ensure!(
                c(Mode::Hw) <= c(Mode::Tc) && c(Mode::Tc) < c(Mode::Sw),
                "{app} seed {seed}: sw {} tc {} hw {}",
                c(Mode::Sw),
                c(Mode::Tc),
                c(Mode::Hw)
            );
            if *seed == 1 {
                app_ratio = cmp.ratio(Mode::Tc, Mode::Hw);
            }
        }
        ratios.push((app, app_ratio.unwrap()));
    }
    let se = ratios.iter().find(|(a, _)| *a == App::Se).unwrap().1;
    for (app, r) in &ratios {
        ensure!(*app == App::Se || se > *r, "se tc/hw {se:.3} does not exceed {app} {r:.3}");
    }
    let shown: Vec<String> = ratios.iter().map(|(a, r)| format!("{a} {r:.2}")).collect();
    Ok(format!("hw <= tc < sw everywhere; tc/hw: {}", shown.join(", ")))
}

fn c8_rv32i_purity() -> Outcome {
    let mut programs = 0;
    for app in App::ALL {
        for params in [KernelParams::desk(app), KernelParams::paper(app)] {
            for mode in Mode::ALL {
                let prog = gen_program(&BenchmarkSpec::new(params, mode, 1)).map_err(|e| e.to_string())?;
                for (i, w) in prog.imem.words.iter().enumerate() {
                    ensure!(decode(InstructionWord(*w)).is_ok(), "{app} {mode}: word {i} ({w:08x}) is illegal");
                    let m_extension = w & 0x7f == 0b011_0011 && w >> 25 == 0b000_0001;
                    ensure!(!m_extension, "{app} {mode}: word {i} ({w:08x}) is a multiply/divide");
                }
                programs += 1;
            }
        }
    }
    let spec = BenchmarkSpec::new(KernelParams::desk(App::Se), Mode::Sw, 1);
    let (calls, _, _) = golden_with_entry_count(&spec, "__mul")?;
    ensure!(calls > 0, "SE software path never calls __mul");
    Ok(format!("{programs} programs scanned; SE software path calls __mul {calls} times"))
}

fn c9_arbitration(desk: &Desk) -> Outcome {
    let mut sessions = 0;
    for (app, seed, cmp) in &desk.runs {
        let cmp = cmp.as_ref().map_err(|e| format!("{app} seed {seed}: {e}"))?;
        for r in cmp.results.iter().filter(|r| r.mode != Mode::Sw) {
            ensure!(r.port.primary_while_auxiliary == 0, "{app} {} seed {seed}: {:?}", r.mode, r.port);
            ensure!(r.port.auxiliary_while_primary == 0, "{app} {} seed {seed}: {:?}", r.mode, r.port);
            sessions += r.report.baa_count;
        }
    }
    let tc =
        run_benchmark(&BenchmarkSpec::new(KernelParams::paper(App::Se), Mode::Tc, 1)).map_err(|e| e.to_string())?;
    ensure!(tc.port.primary_while_auxiliary == 0, "se paper tc: {:?}", tc.port);
    sessions += tc.report.baa_count;
    Ok(format!("0 processor accesses during {sessions} sessions"))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS  criterion {n}: {name}: {detail}"),
        Err(why) => {
            failed += 1;
            println!("FAIL  criterion {n}: {name}: {why}");
        }
    };
    report(1, "encode/decode round trip", c1_isa_round_trip());
    report(2, "golden vs pipeline equivalence", c2_oracle_equivalence());
    report(3, "timing laws", c3_timing_laws());
    report(4, "latency arithmetic", c4_latency());
    report(5, "edge detection structure", c5_sobel_structure());
    let desk = desk_runs();
    report(6, "cross-mode functional equality", c6_cross_mode(&desk));
    report(7, "mode ordering", c7_ordering(&desk));
    report(8, "RV32I purity", c8_rv32i_purity());
    report(9, "shared memory arbitration", c9_arbitration(&desk));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
