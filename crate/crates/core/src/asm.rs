//! Two-pass assembler and disassembler.
//!
//! Syntax follows the usual RISC-V conventions: `label:` definitions,
//! `#` or `//` comments, registers as `x0`..`x31` or ABI names, decimal or
//! `0x` literals. Loads, stores and the accelerator instructions use the
//! `imm(rs1)` operand form, e.g. `baa 8(x5)`. A numeric branch or jump
//! target is a PC-relative byte offset; a symbolic one is a label.
//!
//! Directives: `.org ADDR`, `.word V[, V...]` (values may be labels) and
//! `.space NBYTES`. Pseudo-instructions: `nop`, `li`, `mv`, `j`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::image::MemoryImage;
use crate::isa::{self, EncodeError, Format, Instruction, InstructionWord, Kind};

/// Assembly source text, one entry per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceProgram {
    pub lines: Vec<String>,
}

impl SourceProgram {
    pub fn new(text: &str) -> Self {
        Self { lines: text.lines().map(str::to_string).collect() }
    }

    pub fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

impl From<&str> for SourceProgram {
    fn from(text: &str) -> Self {
        Self::new(text)
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsmErrorKind {
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("undefined label `{0}`")]
    UndefinedLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("operand out of range: {0}")]
    OperandOutOfRange(String),
    #[error("misaligned target: {0}")]
    MisalignedTarget(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct AsmError {
    pub line: usize,
    pub kind: AsmErrorKind,
}

type Result<T, E = AsmErrorKind> = std::result::Result<T, E>;

const ABI_NAMES: [&str; 32] = [
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "s2",
    "s3", "s4", "s5", "s6", "s7", "s8", "s9", "s10", "s11", "t3", "t4", "t5", "t6",
];

pub fn parse_register(token: &str) -> Option<u8> {
    let token = token.trim();
    if let Some(digits) = token.strip_prefix('x') {
        let canonical = digits == "0" || !digits.starts_with('0');
        if canonical && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(n) = digits.parse::<u8>() {
                if n < 32 {
                    return Some(n);
                }
            }
        }
    }
    if token == "fp" {
        return Some(8);
    }
    ABI_NAMES.iter().position(|name| *name == token).map(|i| i as u8)
}

fn parse_number(token: &str) -> Option<i64> {
    let token = token.trim();
    let (neg, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let value = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        i64::from_str_radix(hex, 16).ok()?
    } else if !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit()) {
        body.parse::<i64>().ok()?
    } else {
        return None;
    };
    Some(if neg { -value } else { value })
}

fn is_label_name(token: &str) -> bool {
    let mut chars = token.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '.' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '$')
}

fn strip_comment(line: &str) -> &str {
    let mut end = line.len();
    if let Some(i) = line.find('#') {
        end = end.min(i);
    }
    if let Some(i) = line.find("//") {
        end = end.min(i);
    }
    &line[..end]
}

fn split_operands(rest: &str) -> Vec<String> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Vec::new();
    }
    rest.split(',').map(|s| s.trim().to_string()).collect()
}

/// A value that is either known now or names a label.
#[derive(Debug, Clone)]
enum Value {
    Num(i64),
    Label(String),
}

fn parse_value(token: &str) -> Result<Value> {
    if let Some(n) = parse_number(token) {
        Ok(Value::Num(n))
    } else if is_label_name(token) {
        Ok(Value::Label(token.to_string()))
    } else {
        Err(AsmErrorKind::Syntax(format!("expected a number or label, found `{token}`")))
    }
}

#[derive(Debug, Clone)]
enum Stmt {
    Instr { mnemonic: String, operands: Vec<String> },
    Org(u32),
    Word(Vec<Value>),
    Space(u32),
}

struct Line {
    number: usize,
    labels: Vec<String>,
    stmt: Option<Stmt>,
}

fn parse_line(number: usize, raw: &str) -> Result<Line, AsmError> {
    let err = |kind| AsmError { line: number, kind };
    let mut rest = strip_comment(raw).trim();
    let mut labels = Vec::new();
    while let Some(colon) = rest.find(':') {
        let name = rest[..colon].trim();
        if !is_label_name(name) {
            break;
        }
        labels.push(name.to_string());
        rest = rest[colon + 1..].trim();
    }
    if rest.is_empty() {
        return Ok(Line { number, labels, stmt: None });
    }
    let (head, tail) = match rest.find(char::is_whitespace) {
        Some(i) => (&rest[..i], &rest[i..]),
        None => (rest, ""),
    };
    let head = head.to_ascii_lowercase();
    let operands = split_operands(tail);
    let stmt = match head.as_str() {
        ".org" => {
            let [addr] = operands.as_slice() else {
                return Err(err(AsmErrorKind::Syntax(".org takes one address".into())));
            };
            let addr = parse_number(addr)
                .filter(|a| (0..=u32::MAX as i64).contains(a))
                .ok_or_else(|| err(AsmErrorKind::OperandOutOfRange(format!(".org {addr}"))))?;
            if addr % 4 != 0 {
                return Err(err(AsmErrorKind::MisalignedTarget(format!(".org 0x{addr:x}"))));
            }
            Stmt::Org(addr as u32)
        }
        ".word" => {
            if operands.is_empty() {
                return Err(err(AsmErrorKind::Syntax(".word needs a value".into())));
            }
            let values = operands.iter().map(|o| parse_value(o)).collect::<Result<Vec<_>>>();
            Stmt::Word(values.map_err(err)?)
        }
        ".space" => {
            let [n] = operands.as_slice() else {
                return Err(err(AsmErrorKind::Syntax(".space takes one byte count".into())));
            };
            let n = parse_number(n)
                .filter(|v| (0..=u32::MAX as i64).contains(v))
                .ok_or_else(|| err(AsmErrorKind::OperandOutOfRange(format!(".space {n}"))))?;
            if n % 4 != 0 {
                return Err(err(AsmErrorKind::MisalignedTarget(format!(".space {n} is not a word multiple"))));
            }
            Stmt::Space(n as u32)
        }
        d if d.starts_with('.') => return Err(err(AsmErrorKind::UnknownMnemonic(d.to_string()))),
        _ => Stmt::Instr { mnemonic: head, operands },
    };
    Ok(Line { number, labels, stmt: Some(stmt) })
}

fn li_parts(value: i64) -> (i32, i32) {
    let v = value as u32 as i32;
    let lo = (v << 20) >> 20;
    let hi = v.wrapping_sub(lo);
    (hi, lo)
}

fn li_value(token: &str) -> Result<Value> {
    match parse_value(token)? {
        Value::Num(n) if !(i32::MIN as i64..=u32::MAX as i64).contains(&n) => {
            Err(AsmErrorKind::OperandOutOfRange(format!("li value {n}")))
        }
        v => Ok(v),
    }
}

/// Size in bytes of one instruction statement, known in pass one.
fn instr_size(mnemonic: &str, operands: &[String]) -> Result<u32> {
    if mnemonic != "li" {
        return Ok(4);
    }
    let [_, value] = operands else {
        return Err(AsmErrorKind::Syntax("li takes `rd, value`".into()));
    };
    Ok(match li_value(value)? {
        Value::Label(_) => 8,
        Value::Num(n) => {
            let (hi, lo) = li_parts(n);
            if hi == 0 || lo == 0 {
                4
            } else {
                8
            }
        }
    })
}

struct Ctx<'a> {
    symbols: &'a BTreeMap<String, u32>,
    pc: u32,
}

impl Ctx<'_> {
    fn resolve(&self, value: &Value) -> Result<i64> {
        match value {
            Value::Num(n) => Ok(*n),
            Value::Label(name) => {
                self.symbols.get(name).map(|a| *a as i64).ok_or_else(|| AsmErrorKind::UndefinedLabel(name.clone()))
            }
        }
    }

    /// Branch/jump target operand as a PC-relative offset.
    fn target(&self, token: &str) -> Result<i32> {
        let offset = match parse_value(token)? {
            Value::Num(n) => n,
            label => self.resolve(&label)? - self.pc as i64,
        };
        if offset % 2 != 0 {
            return Err(AsmErrorKind::MisalignedTarget(format!("{token} (offset {offset})")));
        }
        i32::try_from(offset).map_err(|_| AsmErrorKind::OperandOutOfRange(token.to_string()))
    }
}

fn reg(token: &str) -> Result<u8> {
    parse_register(token).ok_or_else(|| AsmErrorKind::Syntax(format!("expected a register, found `{token}`")))
}

fn imm(token: &str) -> Result<i32> {
    let n =
        parse_number(token).ok_or_else(|| AsmErrorKind::Syntax(format!("expected an immediate, found `{token}`")))?;
    i32::try_from(n).map_err(|_| AsmErrorKind::OperandOutOfRange(token.to_string()))
}

/// Parses `imm(reg)` or `(reg)`.
fn mem_operand(token: &str) -> Result<(i32, u8)> {
    let bad = || AsmErrorKind::Syntax(format!("expected `offset(register)`, found `{token}`"));
    let open = token.find('(').ok_or_else(bad)?;
    let inner = token[open + 1..].strip_suffix(')').ok_or_else(bad)?;
    let base = reg(inner)?;
    let off = token[..open].trim();
    let off = if off.is_empty() { 0 } else { imm(off)? };
    Ok((off, base))
}

fn arity(mnemonic: &str, operands: &[String], n: usize) -> Result<()> {
    if operands.len() == n {
        Ok(())
    } else {
        Err(AsmErrorKind::Syntax(format!("`{mnemonic}` takes {n} operand(s), found {}", operands.len())))
    }
}

fn map_encode(err: EncodeError) -> AsmErrorKind {
    match err {
        EncodeError::ImmediateOutOfRange { kind, imm } => {
            AsmErrorKind::OperandOutOfRange(format!("{imm} does not fit `{kind}`"))
        }
        EncodeError::InvalidOperandForFormat { kind, field } => {
            AsmErrorKind::Syntax(format!("invalid {field} for `{kind}`"))
        }
    }
}

fn build(mnemonic: &str, ops: &[String], ctx: &Ctx) -> Result<Vec<Instruction>> {
    let one = |i: Instruction| Ok(vec![i]);
    match mnemonic {
        "nop" => {
            arity(mnemonic, ops, 0)?;
            return one(Instruction::NOP);
        }
        "mv" => {
            arity(mnemonic, ops, 2)?;
            return one(Instruction::i(Kind::Addi, reg(&ops[0])?, reg(&ops[1])?, 0));
        }
        "j" => {
            arity(mnemonic, ops, 1)?;
            return one(Instruction::j(0, ctx.target(&ops[0])?));
        }
        "li" => {
            arity(mnemonic, ops, 2)?;
            let rd = reg(&ops[0])?;
            let value = li_value(&ops[1])?;
            let fixed = matches!(value, Value::Label(_));
            let (hi, lo) = li_parts(ctx.resolve(&value)?);
            return Ok(if fixed || (hi != 0 && lo != 0) {
                vec![Instruction::u(Kind::Lui, rd, hi), Instruction::i(Kind::Addi, rd, rd, lo)]
            } else if hi == 0 {
                vec![Instruction::i(Kind::Addi, rd, 0, lo)]
            } else {
                vec![Instruction::u(Kind::Lui, rd, hi)]
            });
        }
        _ => {}
    }

    let kind = Kind::from_mnemonic(mnemonic).ok_or_else(|| AsmErrorKind::UnknownMnemonic(mnemonic.to_string()))?;
    let instr = match kind.format() {
        Format::R => {
            arity(mnemonic, ops, 3)?;
            Instruction::r(kind, reg(&ops[0])?, reg(&ops[1])?, reg(&ops[2])?)
        }
        Format::I if kind.is_load() => {
            arity(mnemonic, ops, 2)?;
            let (off, base) = mem_operand(&ops[1])?;
            Instruction::i(kind, reg(&ops[0])?, base, off)
        }
        Format::I if kind == Kind::Jalr => match ops.len() {
            1 => Instruction::i(kind, 1, reg(&ops[0])?, 0),
            2 => {
                let (off, base) = mem_operand(&ops[1])?;
                Instruction::i(kind, reg(&ops[0])?, base, off)
            }
            _ => {
                arity(mnemonic, ops, 3)?;
                Instruction::i(kind, reg(&ops[0])?, reg(&ops[1])?, imm(&ops[2])?)
            }
        },
        Format::I | Format::Shift => {
            arity(mnemonic, ops, 3)?;
            Instruction::i(kind, reg(&ops[0])?, reg(&ops[1])?, imm(&ops[2])?)
        }
        Format::S => {
            arity(mnemonic, ops, 2)?;
            let (off, base) = mem_operand(&ops[1])?;
            Instruction::s(kind, base, reg(&ops[0])?, off)
        }
        Format::B => {
            arity(mnemonic, ops, 3)?;
            Instruction::b(kind, reg(&ops[0])?, reg(&ops[1])?, ctx.target(&ops[2])?)
        }
        Format::U => {
            arity(mnemonic, ops, 2)?;
            let upper = parse_number(&ops[1])
                .filter(|v| (-(1 << 19)..(1 << 20)).contains(v))
                .ok_or_else(|| AsmErrorKind::OperandOutOfRange(format!("upper immediate `{}`", ops[1])))?;
            Instruction::u(kind, reg(&ops[0])?, ((upper as u32) << 12) as i32)
        }
        Format::J => match ops.len() {
            1 => Instruction::j(1, ctx.target(&ops[0])?),
            _ => {
                arity(mnemonic, ops, 2)?;
                Instruction::j(reg(&ops[0])?, ctx.target(&ops[1])?)
            }
        },
        Format::Fence => match ops.len() {
            0 => Instruction::i(kind, 0, 0, 0xff),
            _ => {
                arity(mnemonic, ops, 2)?;
                let set = |t: &String| {
                    isa::parse_fence_set(t).ok_or_else(|| AsmErrorKind::Syntax(format!("bad fence set `{t}`")))
                };
                Instruction::i(kind, 0, 0, ((set(&ops[0])? << 4) | set(&ops[1])?) as i32)
            }
        },
        Format::System => {
            arity(mnemonic, ops, 0)?;
            Instruction::system(kind)
        }
        Format::Custom => {
            arity(mnemonic, ops, 1)?;
            let (off, base) = mem_operand(&ops[0])?;
            Instruction::i(kind, 0, base, off)
        }
    };
    one(instr)
}

/// Assembles `src` into a memory image whose symbol table holds every label.
pub fn assemble(src: &SourceProgram) -> Result<MemoryImage, AsmError> {
    let lines = src.lines.iter().enumerate().map(|(i, l)| parse_line(i + 1, l)).collect::<Result<Vec<_>, _>>()?;

    // Pass 1: addresses and labels.
    let mut symbols = BTreeMap::new();
    let mut base: Option<u32> = None;
    let mut pc: u64 = 0;
    let mut emitted = false;
    let mut addresses = Vec::with_capacity(lines.len());
    for line in &lines {
        let err = |kind| AsmError { line: line.number, kind };
        if let Some(Stmt::Org(addr)) = &line.stmt {
            let addr = *addr as u64;
            if emitted && addr < pc {
                return Err(err(AsmErrorKind::OperandOutOfRange(format!(
                    ".org 0x{addr:x} moves backwards from 0x{pc:x}"
                ))));
            }
            if !emitted {
                base = Some(addr as u32);
            }
            pc = addr;
        }
        for label in &line.labels {
            if symbols.insert(label.clone(), pc as u32).is_some() {
                return Err(err(AsmErrorKind::DuplicateLabel(label.clone())));
            }
        }
        addresses.push(pc as u32);
        let size = match &line.stmt {
            None | Some(Stmt::Org(_)) => 0,
            Some(Stmt::Word(values)) => 4 * values.len() as u64,
            Some(Stmt::Space(n)) => *n as u64,
            Some(Stmt::Instr { mnemonic, operands }) => instr_size(mnemonic, operands).map_err(err)? as u64,
        };
        if size > 0 {
            emitted = true;
        }
        pc += size;
        if pc > u32::MAX as u64 + 1 {
            return Err(err(AsmErrorKind::OperandOutOfRange("program exceeds the address space".into())));
        }
    }

    // Pass 2: encode.
    let base = base.unwrap_or(0);
    let mut words: Vec<u32> = Vec::new();
    for (line, &addr) in lines.iter().zip(&addresses) {
        let err = |kind| AsmError { line: line.number, kind };
        let Some(stmt) = &line.stmt else { continue };
        let offset = ((addr - base) / 4) as usize;
        if words.len() < offset {
            words.resize(offset, 0);
        }
        match stmt {
            Stmt::Org(_) => {}
            Stmt::Space(n) => words.resize(offset + (*n / 4) as usize, 0),
            Stmt::Word(values) => {
                let ctx = Ctx { symbols: &symbols, pc: addr };
                for v in values {
                    let n = ctx.resolve(v).map_err(err)?;
                    if !(i32::MIN as i64..=u32::MAX as i64).contains(&n) {
                        return Err(err(AsmErrorKind::OperandOutOfRange(format!(".word {n}"))));
                    }
                    words.push(n as u32);
                }
            }
            Stmt::Instr { mnemonic, operands } => {
                let ctx = Ctx { symbols: &symbols, pc: addr };
                for instr in build(mnemonic, operands, &ctx).map_err(err)? {
                    words.push(isa::encode(&instr).map_err(|e| err(map_encode(e)))?.0);
                }
            }
        }
    }
    Ok(MemoryImage { base_address: base, words, symbols })
}

/// Renders every word as assembly. Words that do not decode, or whose
/// canonical re-encoding differs (e.g. a custom instruction with a nonzero
/// `rd` slot), become `.word` lines so the output re-assembles exactly.
pub fn disassemble(img: &MemoryImage) -> SourceProgram {
    let mut out = SourceProgram::default();
    if img.base_address != 0 {
        out.push(format!(".org 0x{:x}", img.base_address));
    }
    for &w in &img.words {
        out.push(disassemble_word(w));
    }
    out
}

pub fn disassemble_word(word: u32) -> String {
    match isa::decode(InstructionWord(word)) {
        Ok(instr) if isa::encode(&instr).map(|e| e.0) == Ok(word) => instr.to_string(),
        _ => format!(".word 0x{word:08x}"),
    }
}
