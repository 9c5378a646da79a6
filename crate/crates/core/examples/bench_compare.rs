// Software, tightly-coupled and full-accelerator versions of each kernel
// at desk scale, with cross-mode digest checks and a CSV report.

use rvmurac::accel::{App, KernelParams};
use rvmurac::bench::{compare_modes, write_csv, BenchmarkSpec, Mode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut records = Vec::new();
    for app in App::ALL {
        let spec = BenchmarkSpec::new(KernelParams::desk(app), Mode::Sw, 1);
        let cmp = compare_modes(&spec, &Mode::ALL)?;
        println!(
            "{app:<4} sw {:>9}  tc {:>7}  hw {:>6}  sw/tc {:>8.1}  tc/hw {:>6.2}",
            cmp.cycles(Mode::Sw).unwrap(),
            cmp.cycles(Mode::Tc).unwrap(),
            cmp.cycles(Mode::Hw).unwrap(),
            cmp.ratio(Mode::Sw, Mode::Tc).unwrap(),
            cmp.ratio(Mode::Tc, Mode::Hw).unwrap(),
        );
        records.extend(cmp.records());
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &records)?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
