use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rvmurac(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvmurac"))
        .args(args)
        .current_dir(dir)
        .env_remove("RVMURAC_CONFIG")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn assembled(dir: &Path, src: &str) {
    write(dir, "p.s", src);
    assert_eq!(rvmurac(dir, &["asm", "p.s", "-o", "p.hex"]).status.code(), Some(0));
}

#[test]
fn asm_writes_hex() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.s", "addi x1, x0, 5\nebreak\n");
    let out = rvmurac(dir.path(), &["asm", "a.s", "-o", "a.hex"]);
    assert_eq!(out.status.code(), Some(0));
    let hex = std::fs::read_to_string(dir.path().join("a.hex")).unwrap();
    assert_eq!(hex.split_whitespace().collect::<Vec<_>>(), ["00500093", "00100073"]);
}

#[test]
fn asm_reports_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.s", "nop\nnop\naddi x1, x0\n");
    let out = rvmurac(dir.path(), &["asm", "bad.s", "-o", "bad.hex"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn asm_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e.s", "");
    assert_eq!(rvmurac(dir.path(), &["asm", "e.s", "-o", "e.hex"]).status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("e.hex")).unwrap().trim().is_empty());
}

#[test]
fn run_reports_fill_latency() {
    let dir = tempfile::tempdir().unwrap();
    assembled(dir.path(), "addi x1, x0, 5\nebreak\n");
    let out = rvmurac(dir.path(), &["run", "--imem", "p.hex", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(dir.path(), "r.json");
    assert_eq!(r["total_cycles"], 5);
    assert_eq!(r["retired"], 2);
    assert_eq!(r["regs"][1], 5);

    let out = rvmurac(dir.path(), &["run", "--imem", "p.hex", "--mode", "golden", "--report", "g.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(dir.path(), "g.json")["retired"], 2);
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assembled(dir.path(), "l: j l\n");
    assert_eq!(rvmurac(dir.path(), &["run", "--imem", "p.hex", "--max-cycles", "500"]).status.code(), Some(3));
    assert_eq!(
        rvmurac(dir.path(), &["run", "--imem", "p.hex", "--mode", "golden", "--max-cycles", "500"]).status.code(),
        Some(3)
    );
    assembled(dir.path(), "lw x1, 2(x0)\nebreak\n");
    let out = rvmurac(dir.path(), &["run", "--imem", "p.hex"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("misaligned"));
    assert_eq!(rvmurac(dir.path(), &["run", "--imem", "missing.hex"]).status.code(), Some(1));
    assert_eq!(rvmurac(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(rvmurac(dir.path(), &["run", "--imem", "p.hex", "--freq-mhz", "0"]).status.code(), Some(1));
}

#[test]
fn run_with_dmem_and_accelerator() {
    let dir = tempfile::tempdir().unwrap();
    // 2x2 identity times [[1,2],[3,4]] with the full MM accelerator.
    write(
        dir.path(),
        "d.hex",
        "00000004\n00000040\n00000050\n00000060\n00000002\n@10\n00000001\n00000000\n00000000\n00000001\n@14\n00000001\n00000002\n00000003\n00000004\n",
    );
    assembled(dir.path(), "baa 0(x0)\nlw x1, 0x6c(x0)\nebreak\n");
    let out =
        rvmurac(dir.path(), &["run", "--imem", "p.hex", "--dmem", "d.hex", "--accel", "mm_full", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(dir.path(), "r.json");
    assert_eq!(r["regs"][1], 4);
    assert_eq!(r["baa_count"], 1);
    assert_eq!(rvmurac(dir.path(), &["run", "--imem", "p.hex", "--dmem", "d.hex"]).status.code(), Some(2));
    assert_eq!(rvmurac(dir.path(), &["run", "--imem", "p.hex", "--accel", "gpu"]).status.code(), Some(1));
}

#[test]
fn trace_lists_stages() {
    let dir = tempfile::tempdir().unwrap();
    assembled(dir.path(), "addi x1, x0, 5\nebreak\n");
    let out = rvmurac(dir.path(), &["run", "--imem", "p.hex", "--trace"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for stage in ["IF", "ID", "EXMEM", "WB"] {
        assert!(text.contains(stage), "{text}");
    }
}

#[test]
fn bench_se_all_modes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = rvmurac(dir.path(), &["bench", "--app", "se", "--mode", "all", "--scale", "desk", "--csv", "se.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("se.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let modes: Vec<&str> = rows.iter().map(|r| &r[1]).collect();
    assert_eq!(modes, ["sw", "tc", "hw"]);
    assert!(rows.iter().all(|r| r[12] == rows[0][12]));
}

#[test]
fn bench_mm_ordering_and_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let out = rvmurac(dir.path(), &["bench", "--app", "mm", "--freq-mhz", "147.929", "--report", "mm.json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(dir.path(), "mm.json");
    let cycles: Vec<u64> = (0..3).map(|i| rows[i]["total_cycles"].as_u64().unwrap()).collect();
    assert!(cycles[2] <= cycles[1] && cycles[1] < cycles[0], "{cycles:?}");
    for i in 0..3 {
        let lat = rows[i]["latency_s"].as_f64().unwrap();
        assert!((lat - cycles[i] as f64 / 147.929e6).abs() < 1e-12);
        assert_eq!(rows[i]["freq_mhz"], 147.929);
    }

    let first = std::fs::read(dir.path().join("mm.json")).unwrap();
    rvmurac(dir.path(), &["bench", "--app", "mm", "--freq-mhz", "147.929", "--report", "mm.json"]);
    assert_eq!(std::fs::read(dir.path().join("mm.json")).unwrap(), first);
}

#[test]
fn bench_single_mode_and_bad_app() {
    let dir = tempfile::tempdir().unwrap();
    let out = rvmurac(dir.path(), &["bench", "--app", "km", "--mode", "hw", "--report", "k.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(dir.path(), "k.json").as_array().unwrap().len(), 1);
    assert_eq!(rvmurac(dir.path(), &["bench", "--app", "dsp"]).status.code(), Some(1));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    assembled(dir.path(), "addi x1, x0, 5\nebreak\n");
    write(dir.path(), "cfg.json", r#"{"freq_mhz": 50.0, "report": "from_cfg.json"}"#);
    let out = rvmurac(dir.path(), &["--config", "cfg.json", "run", "--imem", "p.hex"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(dir.path(), "from_cfg.json")["freq_mhz"], 50.0);

    let out = rvmurac(
        dir.path(),
        &["--config", "cfg.json", "run", "--imem", "p.hex", "--freq-mhz", "25", "--report", "flag.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(dir.path(), "flag.json")["freq_mhz"], 25.0);

    let out = Command::new(env!("CARGO_BIN_EXE_rvmurac"))
        .args(["run", "--imem", "p.hex", "--report", "env.json"])
        .current_dir(dir.path())
        .env("RVMURAC_CONFIG", "cfg.json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(dir.path(), "env.json")["freq_mhz"], 50.0);

    write(dir.path(), "bad.json", r#"{"imem_size_bytes": 1000}"#);
    assert_eq!(rvmurac(dir.path(), &["--config", "bad.json", "run", "--imem", "p.hex"]).status.code(), Some(1));
}
