// A user-defined accelerator behind `baa`. The processor stalls while the
// session is busy and the accelerator's writes land when it completes.

use std::sync::Arc;

use rvmurac::asm::{assemble, SourceProgram};
use rvmurac::mem::{MemoryBank, WordMemory};
use rvmurac::murac::{Accelerator, ArgumentArray, AuxiliaryRegistry, MuracError};
use rvmurac::pipeline::Pipeline;

/// Arguments: src, dst, len. Writes dst[i] = src[i] + i, one word per cycle.
#[derive(Debug)]
struct AddIndex;

impl Accelerator for AddIndex {
    fn name(&self) -> &str {
        "add_index"
    }

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError> {
        args.expect_len(3)?;
        Ok(2 + args.get(2) as u64)
    }

    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError> {
        args.expect_len(3)?;
        let (src, dst, len) = (args.get(0), args.get(1), args.get(2));
        for i in 0..len {
            let v = mem.load_word(src + 4 * i).map_err(|e| args.fault(e))?;
            mem.store_word(dst + 4 * i, v + i).map_err(|e| args.fault(e))?;
        }
        Ok(())
    }
}

const PROGRAM: &str = "
    li s0, 0x80          # argument array
    li t0, 3
    sw t0, 0(s0)         # three elements follow
    li t0, 0x100
    sw t0, 4(s0)
    li t0, 0x200
    sw t0, 8(s0)
    li t0, 8
    sw t0, 12(s0)
    baa 0(s0)
    lw a0, 0x21c(zero)   # dst[7]
    ebreak
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut imem = MemoryBank::new(4096)?;
    assemble(&SourceProgram::new(PROGRAM))?.load_into(&mut imem)?;
    let mut dmem = MemoryBank::new(4096)?;
    dmem.load_words(0x100, &[100; 8])?;

    let mut p = Pipeline::new(imem, dmem, AuxiliaryRegistry::with(Arc::new(AddIndex)));
    let r = p.run(1000, 147.929)?;
    println!("a0 = {}", p.machine.regs[10]);
    println!(
        "{} cycles: {} retired, {} stalled ({} in the accelerator), {} flushes",
        r.total_cycles, r.retired, r.stall_cycles, r.aux_cycles, r.flushes
    );
    println!("{:?}", p.port_stats());
    assert_eq!(p.machine.regs[10], 107);
    assert_eq!(r.aux_cycles, 10);
    assert_eq!(p.port_stats().primary_while_auxiliary, 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
