// How accelerator throughput moves the tightly-coupled / hardware gap.
// Edge detection keeps its border in software, so its gap stays wide.

use rvmurac::accel::{App, CycleModel, KernelParams};
use rvmurac::bench::{compare_modes, BenchmarkSpec, Mode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for app in [App::Mm, App::Se] {
        for elems in [1, 4, 16, 64] {
            let mut spec = BenchmarkSpec::new(KernelParams::desk(app), Mode::Tc, 1);
            spec.cycle_model = Some(CycleModel::new(4, elems));
            let cmp = compare_modes(&spec, &[Mode::Tc, Mode::Hw])?;
            println!(
                "{app} {elems:>2} elems/cycle: tc {:>7} hw {:>7} tc/hw {:.2}",
                cmp.cycles(Mode::Tc).unwrap(),
                cmp.cycles(Mode::Hw).unwrap(),
                cmp.ratio(Mode::Tc, Mode::Hw).unwrap()
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
