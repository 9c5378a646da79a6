//! Non-pipelined architectural interpreter: the functional oracle for the
//! cycle-accurate model.
//!
//! There is no trap architecture. Every fault stops the run and is reported
//! with the faulting PC. `ebreak` is the halt convention.

use thiserror::Error;

use crate::isa::{self, Instruction, InstructionWord, Kind};
use crate::mem::{MemError, MemoryBank};
use crate::murac::{self, AuxiliaryRegistry, MuracError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Fault {
    #[error("misaligned data access at 0x{addr:08x}")]
    MisalignedAccess { addr: u32 },
    #[error("data access at 0x{addr:08x} is out of range")]
    OutOfRangeAccess { addr: u32 },
    #[error("illegal instruction 0x{word:08x}")]
    IllegalInstruction { word: u32 },
    #[error("misaligned instruction fetch at 0x{addr:08x}")]
    MisalignedFetch { addr: u32 },
    #[error(transparent)]
    Auxiliary(#[from] MuracError),
    #[error("no halt within {limit} steps")]
    RunawayProgram { limit: u64 },
}

impl From<MemError> for Fault {
    fn from(e: MemError) -> Self {
        match e {
            MemError::Misaligned { addr, .. } => Fault::MisalignedAccess { addr },
            MemError::OutOfRange { addr, .. } => Fault::OutOfRangeAccess { addr },
        }
    }
}

/// A fault together with where (and, for the pipeline, when) it happened.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{fault} (pc 0x{pc:08x}{})", cycle.map(|c| format!(", cycle {c}")).unwrap_or_default())]
pub struct SimError {
    pub pc: u32,
    pub cycle: Option<u64>,
    pub fault: Fault,
}

impl SimError {
    pub fn is_runaway(&self) -> bool {
        matches!(self.fault, Fault::RunawayProgram { .. })
    }
}

/// Architectural state. `regs[0]` is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineState {
    pub regs: [u32; 32],
    pub pc: u32,
    pub halted: bool,
    pub retired: u64,
}

impl MachineState {
    pub fn reg(&self, r: u8) -> u32 {
        self.regs[r as usize]
    }

    pub fn set_reg(&mut self, r: u8, value: u32) {
        if r != 0 {
            self.regs[r as usize] = value;
        }
    }
}

/// Fetches and decodes the word at `pc`.
pub fn fetch(imem: &MemoryBank, pc: u32) -> Result<Instruction, Fault> {
    if !pc.is_multiple_of(4) {
        return Err(Fault::MisalignedFetch { addr: pc });
    }
    let word = imem.read_u32(pc).map_err(|_| Fault::OutOfRangeAccess { addr: pc })?;
    isa::decode(InstructionWord(word)).map_err(|_| Fault::IllegalInstruction { word })
}

#[derive(Debug, Clone)]
pub struct Interpreter {
    pub state: MachineState,
    pub imem: MemoryBank,
    pub dmem: MemoryBank,
    pub aux: AuxiliaryRegistry,
    /// Accelerator invocations executed so far.
    pub baa_count: u64,
    /// Cycle costs the accelerators reported, summed.
    pub aux_cost: u64,
}

impl Interpreter {
    pub fn new(imem: MemoryBank, dmem: MemoryBank, aux: AuxiliaryRegistry) -> Self {
        Self { state: MachineState::default(), imem, dmem, aux, baa_count: 0, aux_cost: 0 }
    }

    /// Executes one instruction. On error the state is left as it was
    /// before the faulting instruction.
    pub fn step(&mut self) -> Result<(), SimError> {
        let pc = self.state.pc;
        self.execute().map_err(|fault| SimError { pc, cycle: None, fault })
    }

    fn execute(&mut self) -> Result<(), Fault> {
        let s = &mut self.state;
        let pc = s.pc;
        let instr = fetch(&self.imem, pc)?;
        let Instruction { kind, rd, rs1, rs2, imm } = instr;
        let a = s.reg(rs1);
        let b = s.reg(rs2);
        let uimm = imm as u32;
        let mut next = pc.wrapping_add(4);
        let addr = a.wrapping_add(uimm);

        use Kind::*;
        let result: Option<u32> = match kind {
            Lui => Some(uimm),
            Auipc => Some(pc.wrapping_add(uimm)),
            Jal => {
                next = pc.wrapping_add(uimm);
                Some(pc.wrapping_add(4))
            }
            Jalr => {
                next = addr & !1;
                Some(pc.wrapping_add(4))
            }
            Beq | Bne | Blt | Bge | Bltu | Bgeu => {
                let taken = match kind {
                    Beq => a == b,
                    Bne => a != b,
                    Blt => (a as i32) < (b as i32),
                    Bge => (a as i32) >= (b as i32),
                    Bltu => a < b,
                    _ => a >= b,
                };
                if taken {
                    next = pc.wrapping_add(uimm);
                }
                None
            }
            Lb => Some(self.dmem.read_u8(addr)? as i8 as i32 as u32),
            Lh => Some(self.dmem.read_u16(addr)? as i16 as i32 as u32),
            Lw => Some(self.dmem.read_u32(addr)?),
            Lbu => Some(self.dmem.read_u8(addr)? as u32),
            Lhu => Some(self.dmem.read_u16(addr)? as u32),
            Sb => {
                self.dmem.write_u8(addr, b as u8)?;
                None
            }
            Sh => {
                self.dmem.write_u16(addr, b as u16)?;
                None
            }
            Sw => {
                self.dmem.write_u32(addr, b)?;
                None
            }
            Addi => Some(a.wrapping_add(uimm)),
            Slti => Some(((a as i32) < imm) as u32),
            Sltiu => Some((a < uimm) as u32),
            Xori => Some(a ^ uimm),
            Ori => Some(a | uimm),
            Andi => Some(a & uimm),
            Slli => Some(a << (uimm & 31)),
            Srli => Some(a >> (uimm & 31)),
            Srai => Some(((a as i32) >> (uimm & 31)) as u32),
            Add => Some(a.wrapping_add(b)),
            Sub => Some(a.wrapping_sub(b)),
            Sll => Some(a << (b & 31)),
            Slt => Some(((a as i32) < (b as i32)) as u32),
            Sltu => Some((a < b) as u32),
            Xor => Some(a ^ b),
            Srl => Some(a >> (b & 31)),
            Sra => Some(((a as i32) >> (b & 31)) as u32),
            Or => Some(a | b),
            And => Some(a & b),
            Fence | Ecall => None,
            Ebreak => {
                s.halted = true;
                next = pc;
                None
            }
            Baa => {
                self.aux_cost += murac::execute_atomically(&self.aux, addr, &mut self.dmem)?;
                self.baa_count += 1;
                None
            }
            Rpa => {
                next = addr;
                None
            }
        };
        if let Some(v) = result {
            s.set_reg(rd, v);
        }
        s.pc = next;
        s.retired += 1;
        Ok(())
    }

    /// Steps until `ebreak` or until `max_steps` instructions have executed.
    pub fn run_to_halt(&mut self, max_steps: u64) -> Result<&MachineState, SimError> {
        let mut steps = 0;
        while !self.state.halted {
            if steps == max_steps {
                return Err(SimError {
                    pc: self.state.pc,
                    cycle: None,
                    fault: Fault::RunawayProgram { limit: max_steps },
                });
            }
            self.step()?;
            steps += 1;
        }
        Ok(&self.state)
    }
}
