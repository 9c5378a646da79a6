// Lock-step differential check: every retired instruction of the pipeline
// is compared against the interpreter's architectural state.

use rvmurac::asm::{assemble, SourceProgram};
use rvmurac::golden::Interpreter;
use rvmurac::mem::MemoryBank;
use rvmurac::murac::AuxiliaryRegistry;
use rvmurac::pipeline::Pipeline;

const PROGRAM: &str = "
    li a0, 0x200
    li a1, 16
    li t0, 0x1234
fill:
    sw t0, 0(a0)
    slli t1, t0, 3
    xor t0, t0, t1
    srli t1, t0, 5
    xor t0, t0, t1
    addi a0, a0, 4
    addi a1, a1, -1
    bne a1, zero, fill
    lh a2, -2(a0)
    lbu a3, -7(a0)
    ebreak
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut imem = MemoryBank::new(4096)?;
    assemble(&SourceProgram::new(PROGRAM))?.load_into(&mut imem)?;
    let mut golden = Interpreter::new(imem.clone(), MemoryBank::new(4096)?, AuxiliaryRegistry::empty());
    let mut pipe = Pipeline::new(imem, MemoryBank::new(4096)?, AuxiliaryRegistry::empty());

    let mut checked = 0;
    while !pipe.machine.halted {
        let before = pipe.machine.retired;
        pipe.tick()?;
        if pipe.machine.retired > before {
            golden.step()?;
            assert_eq!(golden.state.regs, pipe.machine.regs, "after {} instructions", golden.state.retired);
            checked += 1;
        }
    }
    assert_eq!(golden.dmem.as_bytes(), pipe.dmem().as_bytes());
    println!("{checked} instructions checked in {} cycles", pipe.counters().cycle);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
