//! Bit-exact encoding and decoding of the RV32I base set plus the two
//! custom-0 instructions used to hand control to an accelerator (`baa`) and
//! to return from one (`rpa`).

use std::fmt;

use thiserror::Error;

/// Major opcode of the custom-0 space that carries BAA and RPA.
pub const OPCODE_CUSTOM0: u32 = 0b000_1011;

const OP_LUI: u32 = 0b011_0111;
const OP_AUIPC: u32 = 0b001_0111;
const OP_JAL: u32 = 0b110_1111;
const OP_JALR: u32 = 0b110_0111;
const OP_BRANCH: u32 = 0b110_0011;
const OP_LOAD: u32 = 0b000_0011;
const OP_STORE: u32 = 0b010_0011;
const OP_IMM: u32 = 0b001_0011;
const OP_OP: u32 = 0b011_0011;
const OP_MISC_MEM: u32 = 0b000_1111;
const OP_SYSTEM: u32 = 0b111_0011;

/// `width` (funct3) value selecting BAA on custom-0.
pub const FUNCT3_BAA: u32 = 0b000;
/// `width` (funct3) value selecting RPA on custom-0.
pub const FUNCT3_RPA: u32 = 0b001;

/// A raw 32-bit instruction word. Little-endian in memory images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstructionWord(pub u32);

impl InstructionWord {
    pub fn to_le_bytes(self) -> [u8; 4] {
        self.0.to_le_bytes()
    }

    pub fn from_le_bytes(bytes: [u8; 4]) -> Self {
        Self(u32::from_le_bytes(bytes))
    }

    pub fn opcode(self) -> u32 {
        self.0 & 0x7f
    }
}

impl From<u32> for InstructionWord {
    fn from(bits: u32) -> Self {
        Self(bits)
    }
}

impl fmt::LowerHex for InstructionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Instruction encoding formats, with the RV32I oddities split out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    R,
    I,
    /// I-type with a 5-bit shift amount and funct7 in the upper bits.
    Shift,
    S,
    B,
    U,
    J,
    Fence,
    /// ECALL / EBREAK: no operands.
    System,
    /// BAA / RPA: I-type with the `rd` slot unused.
    Custom,
}

macro_rules! kinds {
    ($($variant:ident => $mnemonic:literal, $format:ident;)*) => {
        /// Every instruction the decoder accepts.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Kind {
            $($variant,)*
        }

        impl Kind {
            pub const ALL: &'static [Kind] = &[$(Kind::$variant,)*];

            pub fn mnemonic(self) -> &'static str {
                match self {
                    $(Kind::$variant => $mnemonic,)*
                }
            }

            pub fn format(self) -> Format {
                match self {
                    $(Kind::$variant => Format::$format,)*
                }
            }

            pub fn from_mnemonic(name: &str) -> Option<Kind> {
                match name {
                    $($mnemonic => Some(Kind::$variant),)*
                    _ => None,
                }
            }
        }
    };
}

kinds! {
    Lui => "lui", U;
    Auipc => "auipc", U;
    Jal => "jal", J;
    Jalr => "jalr", I;
    Beq => "beq", B;
    Bne => "bne", B;
    Blt => "blt", B;
    Bge => "bge", B;
    Bltu => "bltu", B;
    Bgeu => "bgeu", B;
    Lb => "lb", I;
    Lh => "lh", I;
    Lw => "lw", I;
    Lbu => "lbu", I;
    Lhu => "lhu", I;
    Sb => "sb", S;
    Sh => "sh", S;
    Sw => "sw", S;
    Addi => "addi", I;
    Slti => "slti", I;
    Sltiu => "sltiu", I;
    Xori => "xori", I;
    Ori => "ori", I;
    Andi => "andi", I;
    Slli => "slli", Shift;
    Srli => "srli", Shift;
    Srai => "srai", Shift;
    Add => "add", R;
    Sub => "sub", R;
    Sll => "sll", R;
    Slt => "slt", R;
    Sltu => "sltu", R;
    Xor => "xor", R;
    Srl => "srl", R;
    Sra => "sra", R;
    Or => "or", R;
    And => "and", R;
    Fence => "fence", Fence;
    Ecall => "ecall", System;
    Ebreak => "ebreak", System;
    Baa => "baa", Custom;
    Rpa => "rpa", Custom;
}

impl Kind {
    pub fn is_load(self) -> bool {
        matches!(self, Kind::Lb | Kind::Lh | Kind::Lw | Kind::Lbu | Kind::Lhu)
    }

    pub fn is_store(self) -> bool {
        matches!(self, Kind::Sb | Kind::Sh | Kind::Sw)
    }

    pub fn is_branch(self) -> bool {
        self.format() == Format::B
    }

    /// Instructions whose effective address comes from the decode-stage
    /// `rs1 + imm` adder.
    pub fn uses_address_adder(self) -> bool {
        self.is_load() || self.is_store() || matches!(self, Kind::Jalr | Kind::Baa | Kind::Rpa)
    }

    fn opcode(self) -> u32 {
        match self.format() {
            Format::R => OP_OP,
            Format::Shift => OP_IMM,
            Format::S => OP_STORE,
            Format::B => OP_BRANCH,
            Format::J => OP_JAL,
            Format::Fence => OP_MISC_MEM,
            Format::System => OP_SYSTEM,
            Format::Custom => OPCODE_CUSTOM0,
            Format::U => match self {
                Kind::Lui => OP_LUI,
                _ => OP_AUIPC,
            },
            Format::I => match self {
                Kind::Jalr => OP_JALR,
                k if k.is_load() => OP_LOAD,
                _ => OP_IMM,
            },
        }
    }

    fn funct3(self) -> u32 {
        use Kind::*;
        match self {
            Jalr | Beq | Lb | Sb | Addi | Add | Sub | Fence | Ecall | Ebreak | Baa => 0b000,
            Bne | Lh | Sh | Slli | Sll | Rpa => 0b001,
            Lw | Sw | Slti | Slt => 0b010,
            Sltiu | Sltu => 0b011,
            Blt | Lbu | Xori | Xor => 0b100,
            Bge | Lhu | Srli | Srai | Srl | Sra => 0b101,
            Bltu | Ori | Or => 0b110,
            Bgeu | Andi | And => 0b111,
            Lui | Auipc | Jal => 0,
        }
    }

    fn funct7(self) -> u32 {
        match self {
            Kind::Sub | Kind::Sra | Kind::Srai => 0b010_0000,
            _ => 0,
        }
    }
}

/// A fully decoded instruction.
///
/// Fields a format does not use are zero. `imm` is the sign-extended
/// immediate as the instruction consumes it: the byte offset for branches
/// and jumps, the shifted upper value (low 12 bits clear) for LUI/AUIPC, the
/// shift amount for immediate shifts and the `pred << 4 | succ` byte for
/// FENCE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub kind: Kind,
    pub rd: u8,
    pub rs1: u8,
    pub rs2: u8,
    pub imm: i32,
}

impl Instruction {
    pub const NOP: Instruction = Instruction { kind: Kind::Addi, rd: 0, rs1: 0, rs2: 0, imm: 0 };

    pub fn r(kind: Kind, rd: u8, rs1: u8, rs2: u8) -> Self {
        Self { kind, rd, rs1, rs2, imm: 0 }
    }

    pub fn i(kind: Kind, rd: u8, rs1: u8, imm: i32) -> Self {
        Self { kind, rd, rs1, rs2: 0, imm }
    }

    pub fn s(kind: Kind, rs1: u8, rs2: u8, imm: i32) -> Self {
        Self { kind, rd: 0, rs1, rs2, imm }
    }

    pub fn b(kind: Kind, rs1: u8, rs2: u8, imm: i32) -> Self {
        Self::s(kind, rs1, rs2, imm)
    }

    pub fn u(kind: Kind, rd: u8, imm: i32) -> Self {
        Self { kind, rd, rs1: 0, rs2: 0, imm }
    }

    pub fn j(rd: u8, imm: i32) -> Self {
        Self::u(Kind::Jal, rd, imm)
    }

    pub fn baa(base: u8, offset: i32) -> Self {
        Self::i(Kind::Baa, 0, base, offset)
    }

    pub fn rpa(base: u8, offset: i32) -> Self {
        Self::i(Kind::Rpa, 0, base, offset)
    }

    pub fn system(kind: Kind) -> Self {
        Self { kind, rd: 0, rs1: 0, rs2: 0, imm: 0 }
    }

    /// Destination register, if the instruction writes one (x0 included).
    pub fn dest(&self) -> Option<u8> {
        match self.kind.format() {
            Format::R | Format::I | Format::Shift | Format::U | Format::J => Some(self.rd),
            _ => None,
        }
    }

    pub fn reads_rs1(&self) -> bool {
        matches!(self.kind.format(), Format::R | Format::I | Format::Shift | Format::S | Format::B | Format::Custom)
    }

    pub fn reads_rs2(&self) -> bool {
        matches!(self.kind.format(), Format::R | Format::S | Format::B)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("illegal instruction 0x{0:08x}")]
    IllegalInstruction(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("immediate {imm} is not representable for `{kind}`")]
    ImmediateOutOfRange { kind: &'static str, imm: i32 },
    #[error("operand {field} is invalid for `{kind}`")]
    InvalidOperandForFormat { kind: &'static str, field: &'static str },
}

fn bits(word: u32, hi: u32, lo: u32) -> u32 {
    (word >> lo) & ((1u32 << (hi - lo + 1)) - 1)
}

fn sign_extend(value: u32, width: u32) -> i32 {
    let shift = 32 - width;
    ((value << shift) as i32) >> shift
}

/// Decodes one instruction word.
pub fn decode(word: InstructionWord) -> Result<Instruction, DecodeError> {
    use Kind::*;
    let w = word.0;
    let illegal = Err(DecodeError::IllegalInstruction(w));
    let opcode = bits(w, 6, 0);
    let rd = bits(w, 11, 7) as u8;
    let funct3 = bits(w, 14, 12);
    let rs1 = bits(w, 19, 15) as u8;
    let rs2 = bits(w, 24, 20) as u8;
    let funct7 = bits(w, 31, 25);
    let imm_i = sign_extend(bits(w, 31, 20), 12);

    let instr = match opcode {
        OP_LUI => Instruction::u(Lui, rd, (w & 0xffff_f000) as i32),
        OP_AUIPC => Instruction::u(Auipc, rd, (w & 0xffff_f000) as i32),
        OP_JAL => {
            let raw =
                (bits(w, 31, 31) << 20) | (bits(w, 19, 12) << 12) | (bits(w, 20, 20) << 11) | (bits(w, 30, 21) << 1);
            Instruction::j(rd, sign_extend(raw, 21))
        }
        OP_JALR if funct3 == 0 => Instruction::i(Jalr, rd, rs1, imm_i),
        OP_BRANCH => {
            let kind = match funct3 {
                0b000 => Beq,
                0b001 => Bne,
                0b100 => Blt,
                0b101 => Bge,
                0b110 => Bltu,
                0b111 => Bgeu,
                _ => return illegal,
            };
            let raw = (bits(w, 31, 31) << 12) | (bits(w, 7, 7) << 11) | (bits(w, 30, 25) << 5) | (bits(w, 11, 8) << 1);
            Instruction::b(kind, rs1, rs2, sign_extend(raw, 13))
        }
        OP_LOAD => {
            let kind = match funct3 {
                0b000 => Lb,
                0b001 => Lh,
                0b010 => Lw,
                0b100 => Lbu,
                0b101 => Lhu,
                _ => return illegal,
            };
            Instruction::i(kind, rd, rs1, imm_i)
        }
        OP_STORE => {
            let kind = match funct3 {
                0b000 => Sb,
                0b001 => Sh,
                0b010 => Sw,
                _ => return illegal,
            };
            let raw = (bits(w, 31, 25) << 5) | bits(w, 11, 7);
            Instruction::s(kind, rs1, rs2, sign_extend(raw, 12))
        }
        OP_IMM => match funct3 {
            0b001 | 0b101 => {
                let kind = match (funct3, funct7) {
                    (0b001, 0) => Slli,
                    (0b101, 0) => Srli,
                    (0b101, 0b010_0000) => Srai,
                    _ => return illegal,
                };
                Instruction::i(kind, rd, rs1, rs2 as i32)
            }
            _ => {
                let kind = match funct3 {
                    0b000 => Addi,
                    0b010 => Slti,
                    0b011 => Sltiu,
                    0b100 => Xori,
                    0b110 => Ori,
                    _ => Andi,
                };
                Instruction::i(kind, rd, rs1, imm_i)
            }
        },
        OP_OP => {
            let kind = match (funct7, funct3) {
                (0, 0b000) => Add,
                (0b010_0000, 0b000) => Sub,
                (0, 0b001) => Sll,
                (0, 0b010) => Slt,
                (0, 0b011) => Sltu,
                (0, 0b100) => Xor,
                (0, 0b101) => Srl,
                (0b010_0000, 0b101) => Sra,
                (0, 0b110) => Or,
                (0, 0b111) => And,
                _ => return illegal,
            };
            Instruction::r(kind, rd, rs1, rs2)
        }
        // FENCE with fm, rd and rs1 all zero; FENCE.I (funct3 001) is not RV32I.
        OP_MISC_MEM if funct3 == 0 && rd == 0 && rs1 == 0 && bits(w, 31, 28) == 0 => {
            Instruction::i(Fence, 0, 0, bits(w, 27, 20) as i32)
        }
        OP_SYSTEM => match w {
            0x0000_0073 => Instruction::system(Ecall),
            0x0010_0073 => Instruction::system(Ebreak),
            _ => return illegal,
        },
        // rd (bits 11:7) is don't-care for both custom instructions.
        OPCODE_CUSTOM0 => match funct3 {
            FUNCT3_BAA => Instruction::baa(rs1, imm_i),
            FUNCT3_RPA => Instruction::rpa(rs1, imm_i),
            _ => return illegal,
        },
        _ => return illegal,
    };
    Ok(instr)
}

fn check_reg(kind: Kind, field: &'static str, reg: u8) -> Result<u32, EncodeError> {
    if reg < 32 {
        Ok(reg as u32)
    } else {
        Err(EncodeError::InvalidOperandForFormat { kind: kind.mnemonic(), field })
    }
}

fn require_zero(kind: Kind, field: &'static str, value: i64) -> Result<(), EncodeError> {
    if value == 0 {
        Ok(())
    } else {
        Err(EncodeError::InvalidOperandForFormat { kind: kind.mnemonic(), field })
    }
}

fn check_imm(kind: Kind, imm: i32, ok: bool) -> Result<(), EncodeError> {
    if ok {
        Ok(())
    } else {
        Err(EncodeError::ImmediateOutOfRange { kind: kind.mnemonic(), imm })
    }
}

/// Produces the canonical encoding of `instr`.
pub fn encode(instr: &Instruction) -> Result<InstructionWord, EncodeError> {
    let Instruction { kind, rd, rs1, rs2, imm } = *instr;
    let rd_bits = check_reg(kind, "rd", rd)?;
    let rs1_bits = check_reg(kind, "rs1", rs1)?;
    let rs2_bits = check_reg(kind, "rs2", rs2)?;
    let opcode = kind.opcode();
    let funct3 = kind.funct3();
    let fits12 = (-2048..=2047).contains(&imm);

    let word = match kind.format() {
        Format::R => {
            require_zero(kind, "imm", imm as i64)?;
            (kind.funct7() << 25) | (rs2_bits << 20) | (rs1_bits << 15) | (funct3 << 12) | (rd_bits << 7) | opcode
        }
        Format::I => {
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, fits12)?;
            ((imm as u32 & 0xfff) << 20) | (rs1_bits << 15) | (funct3 << 12) | (rd_bits << 7) | opcode
        }
        Format::Shift => {
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, (0..32).contains(&imm))?;
            (kind.funct7() << 25) | ((imm as u32) << 20) | (rs1_bits << 15) | (funct3 << 12) | (rd_bits << 7) | opcode
        }
        Format::S => {
            require_zero(kind, "rd", rd as i64)?;
            check_imm(kind, imm, fits12)?;
            let imm = imm as u32;
            (bits(imm, 11, 5) << 25)
                | (rs2_bits << 20)
                | (rs1_bits << 15)
                | (funct3 << 12)
                | (bits(imm, 4, 0) << 7)
                | opcode
        }
        Format::B => {
            require_zero(kind, "rd", rd as i64)?;
            check_imm(kind, imm, (-4096..=4094).contains(&imm) && imm % 2 == 0)?;
            let imm = imm as u32;
            (bits(imm, 12, 12) << 31)
                | (bits(imm, 10, 5) << 25)
                | (rs2_bits << 20)
                | (rs1_bits << 15)
                | (funct3 << 12)
                | (bits(imm, 4, 1) << 8)
                | (bits(imm, 11, 11) << 7)
                | opcode
        }
        Format::U => {
            require_zero(kind, "rs1", rs1 as i64)?;
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, imm & 0xfff == 0)?;
            (imm as u32) | (rd_bits << 7) | opcode
        }
        Format::J => {
            require_zero(kind, "rs1", rs1 as i64)?;
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, (-(1 << 20)..(1 << 20)).contains(&imm) && imm % 2 == 0)?;
            let imm = imm as u32;
            (bits(imm, 20, 20) << 31)
                | (bits(imm, 10, 1) << 21)
                | (bits(imm, 11, 11) << 20)
                | (bits(imm, 19, 12) << 12)
                | (rd_bits << 7)
                | opcode
        }
        Format::Fence => {
            require_zero(kind, "rd", rd as i64)?;
            require_zero(kind, "rs1", rs1 as i64)?;
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, (0..=0xff).contains(&imm))?;
            ((imm as u32) << 20) | opcode
        }
        Format::System => {
            require_zero(kind, "rd", rd as i64)?;
            require_zero(kind, "rs1", rs1 as i64)?;
            require_zero(kind, "rs2", rs2 as i64)?;
            require_zero(kind, "imm", imm as i64)?;
            let which = if kind == Kind::Ebreak { 1 } else { 0 };
            (which << 20) | opcode
        }
        Format::Custom => {
            require_zero(kind, "rd", rd as i64)?;
            require_zero(kind, "rs2", rs2 as i64)?;
            check_imm(kind, imm, fits12)?;
            ((imm as u32 & 0xfff) << 20) | (rs1_bits << 15) | (funct3 << 12) | opcode
        }
    };
    Ok(InstructionWord(word))
}

const FENCE_BITS: [(u32, char); 4] = [(8, 'i'), (4, 'o'), (2, 'r'), (1, 'w')];

fn fence_set(bits: u32) -> String {
    if bits == 0 {
        return "0".to_string();
    }
    FENCE_BITS.iter().filter(|(mask, _)| bits & mask != 0).map(|(_, c)| *c).collect()
}

/// Parses a FENCE predecessor/successor set: letters from `iorw` or `0`.
pub fn parse_fence_set(text: &str) -> Option<u32> {
    if text == "0" {
        return Some(0);
    }
    let mut out = 0;
    for ch in text.chars() {
        let (mask, _) = FENCE_BITS.iter().find(|(_, c)| *c == ch)?;
        if out & mask != 0 {
            return None;
        }
        out |= mask;
    }
    if out == 0 {
        None
    } else {
        Some(out)
    }
}

/// Assembly rendering in the syntax the assembler accepts. Branch and jump
/// targets print as PC-relative byte offsets.
impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.kind.mnemonic();
        let Instruction { rd, rs1, rs2, imm, .. } = *self;
        match self.kind.format() {
            Format::R => write!(f, "{m} x{rd}, x{rs1}, x{rs2}"),
            Format::I if self.kind.is_load() || self.kind == Kind::Jalr => {
                write!(f, "{m} x{rd}, {imm}(x{rs1})")
            }
            Format::I | Format::Shift => write!(f, "{m} x{rd}, x{rs1}, {imm}"),
            Format::S => write!(f, "{m} x{rs2}, {imm}(x{rs1})"),
            Format::B => write!(f, "{m} x{rs1}, x{rs2}, {imm}"),
            Format::U => write!(f, "{m} x{rd}, 0x{:x}", (imm as u32) >> 12),
            Format::J => write!(f, "{m} x{rd}, {imm}"),
            Format::Fence => {
                let imm = imm as u32;
                write!(f, "{m} {}, {}", fence_set(imm >> 4), fence_set(imm & 0xf))
            }
            Format::System => f.write_str(m),
            Format::Custom => write!(f, "{m} {imm}(x{rs1})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_nop() {
        assert_eq!(decode(InstructionWord(0x0000_0013)).unwrap(), Instruction::NOP);
        assert_eq!(encode(&Instruction::NOP).unwrap(), InstructionWord(0x13));
    }

    #[test]
    fn addi_matches_reference_encoding() {
        // riscv64-unknown-elf-as: addi x1, x0, 5 => 00500093
        let word = encode(&Instruction::i(Kind::Addi, 1, 0, 5)).unwrap();
        assert_eq!(word.0, 0x0050_0093);
    }

    #[test]
    fn baa_field_layout() {
        // imm=0x008 | rs1=00001 | funct3=000 | rd=00000 | opcode=0001011
        let composed = (0x008 << 20) | (1 << 15) | (FUNCT3_BAA << 12) | OPCODE_CUSTOM0;
        assert_eq!(composed, 0x0080_800B);
        assert_eq!(encode(&Instruction::baa(1, 8)).unwrap().0, composed);
        assert_eq!(decode(InstructionWord(composed)).unwrap(), Instruction::baa(1, 8));
    }

    #[test]
    fn custom_rd_is_ignored_on_decode() {
        let with_rd = 0x0080_800B | (7 << 7);
        assert_eq!(decode(InstructionWord(with_rd)).unwrap(), Instruction::baa(1, 8));
    }

    #[test]
    fn rpa_differs_from_baa_only_in_width() {
        let baa = encode(&Instruction::baa(5, -4)).unwrap().0;
        let rpa = encode(&Instruction::rpa(5, -4)).unwrap().0;
        assert_eq!(baa ^ rpa, 1 << 12);
    }

    #[test]
    fn all_ones_is_illegal() {
        assert_eq!(decode(InstructionWord(0xffff_ffff)), Err(DecodeError::IllegalInstruction(0xffff_ffff)));
    }

    #[test]
    fn unused_custom_widths_are_illegal() {
        for funct3 in 2..8u32 {
            let word = (funct3 << 12) | OPCODE_CUSTOM0;
            assert!(decode(InstructionWord(word)).is_err(), "funct3 {funct3}");
        }
    }

    #[test]
    fn csr_instructions_are_illegal() {
        // csrrw x1, mstatus, x2
        assert!(decode(InstructionWord(0x3001_10f3)).is_err());
    }

    #[test]
    fn immediate_range_errors() {
        assert!(matches!(
            encode(&Instruction::i(Kind::Addi, 1, 0, 4096)),
            Err(EncodeError::ImmediateOutOfRange { .. })
        ));
        assert!(encode(&Instruction::b(Kind::Beq, 1, 2, 3)).is_err());
        assert!(encode(&Instruction::u(Kind::Lui, 1, 0x123)).is_err());
        assert!(encode(&Instruction::i(Kind::Slli, 1, 1, 32)).is_err());
        assert!(matches!(
            encode(&Instruction::r(Kind::Add, 32, 0, 0)),
            Err(EncodeError::InvalidOperandForFormat { .. })
        ));
    }

    #[test]
    fn known_words() {
        // Cross-checked against the GNU assembler.
        let cases: &[(Instruction, u32)] = &[
            (Instruction::u(Kind::Lui, 5, 0x12345 << 12), 0x1234_52b7),
            (Instruction::j(1, 2048), 0x0010_00ef),
            (Instruction::b(Kind::Bne, 10, 11, -8), 0xfeb5_1ce3),
            (Instruction::s(Kind::Sw, 2, 1, -4), 0xfe11_2e23),
            (Instruction::i(Kind::Srai, 3, 4, 7), 0x4072_5193),
            (Instruction::r(Kind::Sub, 1, 2, 3), 0x4031_00b3),
            (Instruction::i(Kind::Lbu, 6, 7, 100), 0x0643_c303),
            (Instruction::i(Kind::Fence, 0, 0, 0xff), 0x0ff0_000f),
            (Instruction::system(Kind::Ebreak), 0x0010_0073),
        ];
        for (instr, word) in cases {
            assert_eq!(encode(instr).unwrap().0, *word, "{instr}");
            assert_eq!(decode(InstructionWord(*word)).unwrap(), *instr);
        }
    }

    #[test]
    fn fence_sets_parse() {
        assert_eq!(parse_fence_set("iorw"), Some(0xf));
        assert_eq!(parse_fence_set("rw"), Some(0x3));
        assert_eq!(parse_fence_set("0"), Some(0));
        assert_eq!(parse_fence_set("rr"), None);
        assert_eq!(fence_set(0xf), "iorw");
    }
}
