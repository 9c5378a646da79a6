//! Datapath functions of the EX/MEM stage.

use crate::isa::Kind;
use crate::mem::{MemError, MemoryBank};

/// ALU result for register-register, register-immediate and upper-immediate
/// instructions. `b` is the forwarded `rs2` value.
pub(super) fn alu(kind: Kind, a: u32, b: u32, imm: i32, pc: u32) -> u32 {
    let i = imm as u32;
    match kind {
        Kind::Lui => i,
        Kind::Auipc => pc.wrapping_add(i),
        Kind::Addi => a.wrapping_add(i),
        Kind::Slti => ((a as i32) < imm) as u32,
        Kind::Sltiu => (a < i) as u32,
        Kind::Xori => a ^ i,
        Kind::Ori => a | i,
        Kind::Andi => a & i,
        Kind::Slli => a.wrapping_shl(i),
        Kind::Srli => a.wrapping_shr(i),
        Kind::Srai => (a as i32).wrapping_shr(i) as u32,
        Kind::Add => a.wrapping_add(b),
        Kind::Sub => a.wrapping_sub(b),
        Kind::Sll => a.wrapping_shl(b),
        Kind::Slt => ((a as i32) < (b as i32)) as u32,
        Kind::Sltu => (a < b) as u32,
        Kind::Xor => a ^ b,
        Kind::Srl => a.wrapping_shr(b),
        Kind::Sra => (a as i32).wrapping_shr(b) as u32,
        Kind::Or => a | b,
        Kind::And => a & b,
        other => unreachable!("{other:?} does not use the ALU"),
    }
}

pub(super) fn branch_taken(kind: Kind, a: u32, b: u32) -> bool {
    match kind {
        Kind::Beq => a == b,
        Kind::Bne => a != b,
        Kind::Blt => (a as i32) < (b as i32),
        Kind::Bge => (a as i32) >= (b as i32),
        Kind::Bltu => a < b,
        Kind::Bgeu => a >= b,
        other => unreachable!("{other:?} is not a branch"),
    }
}

pub(super) fn load(kind: Kind, mem: &mut MemoryBank, addr: u32) -> Result<u32, MemError> {
    Ok(match kind {
        Kind::Lb => mem.read_u8(addr)? as i8 as u32,
        Kind::Lbu => mem.read_u8(addr)? as u32,
        Kind::Lh => mem.read_u16(addr)? as i16 as u32,
        Kind::Lhu => mem.read_u16(addr)? as u32,
        _ => mem.read_u32(addr)?,
    })
}

pub(super) fn store(kind: Kind, mem: &mut MemoryBank, addr: u32, value: u32) -> Result<(), MemError> {
    match kind {
        Kind::Sb => mem.write_u8(addr, value as u8),
        Kind::Sh => mem.write_u16(addr, value as u16),
        _ => mem.write_u32(addr, value),
    }
}
