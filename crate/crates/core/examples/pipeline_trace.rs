// Cycle-by-cycle trace of the four-stage pipeline: a load feeding the next
// instruction without a bubble, and a taken branch flushing two slots.

use rvmurac::asm::{assemble, SourceProgram};
use rvmurac::mem::MemoryBank;
use rvmurac::murac::AuxiliaryRegistry;
use rvmurac::pipeline::{Pipeline, PipelineConfig};

const PROGRAM: &str = "
    li t0, 7
    sw t0, 0x40(zero)
    lw t1, 0x40(zero)
    add t2, t1, t1
    beq t2, t2, done
    addi a0, zero, 1
    addi a1, zero, 2
done:
    ebreak
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut imem = MemoryBank::new(4096)?;
    assemble(&SourceProgram::new(PROGRAM))?.load_into(&mut imem)?;
    let config = PipelineConfig { trace: true, ..PipelineConfig::default() };
    let mut p = Pipeline::with_config(imem, MemoryBank::new(4096)?, AuxiliaryRegistry::empty(), config);
    let report = p.run(1000, 147.929)?;
    for entry in p.trace().unwrap() {
        println!("{entry}");
    }
    println!("{report:#?}");
    assert_eq!(p.machine.regs[7], 14);
    assert_eq!(report.stall_cycles, 0);
    assert_eq!(report.flushes, 1);
    assert_eq!(report.total_cycles, report.accounted_cycles());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
