// Run a program on the architectural interpreter.

use rvmurac::asm::{assemble, SourceProgram};
use rvmurac::golden::Interpreter;
use rvmurac::mem::MemoryBank;
use rvmurac::murac::AuxiliaryRegistry;

/// Writes the first twelve Fibonacci numbers to DMEM from address 0x100.
const FIB: &str = "
    li s0, 0x100
    li t0, 0
    li t1, 1
    li t2, 12
next:
    sw t0, 0(s0)
    add t3, t0, t1
    mv t0, t1
    mv t1, t3
    addi s0, s0, 4
    addi t2, t2, -1
    bne t2, zero, next
    ebreak
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut imem = MemoryBank::new(4096)?;
    assemble(&SourceProgram::new(FIB))?.load_into(&mut imem)?;
    let mut m = Interpreter::new(imem, MemoryBank::new(4096)?, AuxiliaryRegistry::empty());
    let state = m.run_to_halt(10_000)?;
    println!("halted at pc 0x{:x} after {} instructions", state.pc, state.retired);
    let fib = m.dmem.read_words(0x100, 12)?;
    println!("{fib:?}");
    assert_eq!(fib[11], 89);

    // Faults stop the run and name the instruction.
    let mut imem = MemoryBank::new(4096)?;
    assemble(&SourceProgram::new("li t0, 0x102\nlw a0, 0(t0)"))?.load_into(&mut imem)?;
    let err = Interpreter::new(imem, MemoryBank::new(4096)?, AuxiliaryRegistry::empty()).run_to_halt(10).unwrap_err();
    println!("{err}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
