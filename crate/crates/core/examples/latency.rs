// Cycle counts to wall-clock latency at the default 147.929 MHz clock.

use rvmurac::bench::DEFAULT_FREQ_MHZ;
use rvmurac::pipeline::latency_seconds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let published = [
        ("mm", 1_965_954_155u64, 13.29),
        ("fir", 350_096_784, 2.37),
        ("km", 32_382_531, 0.22),
        ("se", 388_273_610, 2.62),
    ];
    for (app, cycles, secs) in published {
        let l = latency_seconds(cycles, DEFAULT_FREQ_MHZ);
        println!("{app:<4} {cycles:>13} cycles -> {l:.2} s");
        assert!((l - secs).abs() <= 0.01);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
