//! Cycle-accurate model of a 4-stage RV32I soft processor that hands control
//! to tightly-coupled accelerators through the custom `baa` instruction.
//!
//! The crate is organised bottom-up:
//!
//! - [`isa`]: instruction encoding and decoding, including `baa`/`rpa`.
//! - [`asm`] and [`image`]: a two-pass assembler, disassembler and the hex
//!   image format.
//! - [`golden`]: a non-pipelined interpreter used as the functional oracle.
//! - [`pipeline`]: the cycle-accurate IF / ID / EX-MEM / WB model.
//! - [`murac`]: the processor/accelerator coupling (argument arrays, shared
//!   DMEM arbitration, sessions).
//! - [`accel`]: reference accelerators with functional and cycle models.
//! - [`bench`]: benchmark program generators and the SW / tightly-coupled /
//!   HW comparison harness.

pub mod accel;
pub mod asm;
pub mod bench;
pub mod cli;
pub mod config;
pub mod golden;
pub mod image;
pub mod isa;
pub mod mem;
pub mod murac;
pub mod pipeline;

pub use asm::{assemble, disassemble, SourceProgram};
pub use golden::{Interpreter, MachineState};
pub use image::MemoryImage;
pub use isa::{decode, encode, Instruction, InstructionWord, Kind};
pub use mem::MemoryBank;
pub use pipeline::{Pipeline, RunReport};
