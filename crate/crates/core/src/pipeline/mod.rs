//! Cycle-accurate model of the 4-stage pipeline: IF, ID, EX/MEM, WB.
//!
//! Execute and memory access share one stage, so a load's data is available
//! to the very next instruction without a bubble. Load/store/`baa`/`rpa`/
//! `jalr` addresses come from an adder at the end of ID, fed by forwarding
//! from EX/MEM and WB. Control transfers resolve in EX/MEM and flush the two
//! younger instructions. A `baa` in EX/MEM opens an accelerator session and
//! freezes every latch and the PC until the session completes; the pipeline
//! then refills from the instruction after the `baa`.
//!
//! For a halting program the model satisfies
//! `total_cycles == retired + 3 + stall_cycles + 2 * flushes`.

mod exec;
mod report;
mod trace;

use std::fmt;

use crate::golden::{Fault, MachineState, SimError};
use crate::isa::{self, Instruction, InstructionWord, Kind};
use crate::mem::MemoryBank;
use crate::murac::{self, AuxiliaryRegistry, AuxiliarySession, PortStats, SessionStatus, SharedDmem};

pub use report::{latency_seconds, RunReport};
pub use trace::{Stage, Tag, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Forward the EX/MEM result into the ID-stage address adder. With this
    /// off, an address that depends on the instruction in EX/MEM interlocks
    /// for one cycle.
    pub id_adder_forwarding: bool,
    /// Extra frozen cycles charged after each accelerator session, on top of
    /// the 2-cycle refill. Zero by default.
    pub handoff_cycles: u64,
    pub trace: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { id_adder_forwarding: true, handoff_cycles: 0, trace: false }
    }
}

/// IF/ID latch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub pc: u32,
    pub word: Result<u32, Fault>,
}

/// ID/EX-MEM latch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub pc: u32,
    pub instr: Result<Instruction, Fault>,
    pub rs1_val: u32,
    pub rs2_val: u32,
    /// Output of the decode-stage `rs1 + imm` adder.
    pub addr: u32,
}

/// EX-MEM/WB latch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Executed {
    pub pc: u32,
    pub instr: Instruction,
    pub write: Option<(u8, u32)>,
}

/// Contents of the three inter-stage latches. `None` is a bubble.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Latches {
    pub if_id: Option<Fetched>,
    pub id_exmem: Option<Decoded>,
    pub exmem_wb: Option<Executed>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub cycle: u64,
    pub stall_cycles: u64,
    pub flushes: u64,
    pub aux_cycles: u64,
    pub baa_count: u64,
}

/// What EX/MEM decided this cycle.
enum Resolution {
    Continue,
    Redirect(u32),
    Halt,
}

pub struct Pipeline {
    pub machine: MachineState,
    fetch_pc: u32,
    latches: Latches,
    counters: Counters,
    session: Option<AuxiliarySession>,
    handoff_left: u64,
    fetch_stopped: bool,
    config: PipelineConfig,
    imem: MemoryBank,
    dmem: SharedDmem,
    aux: AuxiliaryRegistry,
    trace: Option<Vec<TraceEntry>>,
}

impl fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pipeline")
            .field("cycle", &self.counters.cycle)
            .field("fetch_pc", &self.fetch_pc)
            .field("latches", &self.latches)
            .finish_non_exhaustive()
    }
}

impl Pipeline {
    pub fn new(imem: MemoryBank, dmem: MemoryBank, aux: AuxiliaryRegistry) -> Self {
        Self::with_config(imem, dmem, aux, PipelineConfig::default())
    }

    pub fn with_config(imem: MemoryBank, dmem: MemoryBank, aux: AuxiliaryRegistry, config: PipelineConfig) -> Self {
        Self {
            machine: MachineState::default(),
            fetch_pc: 0,
            latches: Latches::default(),
            counters: Counters::default(),
            session: None,
            handoff_left: 0,
            fetch_stopped: false,
            config,
            imem,
            dmem: SharedDmem::new(dmem),
            aux,
            trace: config.trace.then(Vec::new),
        }
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn latches(&self) -> &Latches {
        &self.latches
    }

    pub fn fetch_pc(&self) -> u32 {
        self.fetch_pc
    }

    pub fn session(&self) -> Option<&AuxiliarySession> {
        self.session.as_ref()
    }

    pub fn aux_busy(&self) -> bool {
        self.session.as_ref().is_some_and(AuxiliarySession::is_busy)
    }

    pub fn dmem(&self) -> &MemoryBank {
        self.dmem.bank()
    }

    pub fn into_dmem(self) -> MemoryBank {
        self.dmem.into_bank()
    }

    pub fn port_stats(&self) -> PortStats {
        self.dmem.stats()
    }

    pub fn trace(&self) -> Option<&[TraceEntry]> {
        self.trace.as_deref()
    }

    fn record(&mut self, stage: Stage, pc: Option<u32>, text: String, tag: Tag) {
        if let Some(t) = &mut self.trace {
            t.push(TraceEntry { cycle: self.counters.cycle, stage, pc, text, tag });
        }
    }

    fn error(&self, pc: u32, fault: Fault) -> SimError {
        SimError { pc, cycle: Some(self.counters.cycle), fault }
    }

    /// Advances one clock cycle.
    pub fn tick(&mut self) -> Result<(), SimError> {
        debug_assert!(!self.machine.halted, "tick on a halted pipeline");
        self.counters.cycle += 1;

        if let Some(session) = self.session.as_mut().filter(|s| s.is_busy()) {
            self.counters.stall_cycles += 1;
            self.counters.aux_cycles += 1;
            let status = session.tick(&mut self.dmem);
            if status == SessionStatus::Done {
                self.handoff_left = self.config.handoff_cycles;
            }
            if self.trace.is_some() {
                for stage in Stage::ALL {
                    self.record(stage, None, String::new(), Tag::Aux);
                }
            }
            return Ok(());
        }
        if self.handoff_left > 0 {
            self.handoff_left -= 1;
            self.counters.stall_cycles += 1;
            if self.trace.is_some() {
                for stage in Stage::ALL {
                    self.record(stage, None, String::new(), Tag::Stall);
                }
            }
            return Ok(());
        }

        // Stages are evaluated back to front so that the register file is
        // written before it is read and EX/MEM results can feed ID.
        let wb_write = self.writeback();
        let (ex_write, resolution) = self.execute(wb_write)?;
        if self.machine.halted {
            return Ok(());
        }

        match resolution {
            Resolution::Redirect(target) => {
                self.counters.flushes += 1;
                if let Some(f) = self.latches.if_id.take() {
                    let text = describe_word(&f.word);
                    self.record(Stage::Id, Some(f.pc), text, Tag::Flush);
                }
                let pc = self.fetch_pc;
                self.record(Stage::If, Some(pc), describe_fetch(&self.imem, pc), Tag::Flush);
                self.latches.id_exmem = None;
                self.fetch_pc = target;
                return Ok(());
            }
            Resolution::Halt => {
                // Nothing younger than ebreak may run.
                self.latches.if_id = None;
                self.latches.id_exmem = None;
                self.fetch_stopped = true;
                return Ok(());
            }
            Resolution::Continue => {}
        }

        let stalled = self.decode(ex_write);
        if !stalled {
            self.fetch();
        }
        Ok(())
    }

    fn writeback(&mut self) -> Option<(u8, u32)> {
        let done = self.latches.exmem_wb.take()?;
        self.record(Stage::Wb, Some(done.pc), done.instr.to_string(), Tag::Normal);
        if let Some((rd, value)) = done.write {
            self.machine.set_reg(rd, value);
        }
        self.machine.retired += 1;
        if done.instr.kind == Kind::Ebreak {
            self.machine.halted = true;
            self.machine.pc = done.pc;
        }
        done.write
    }

    fn execute(&mut self, wb_write: Option<(u8, u32)>) -> Result<(Option<(u8, u32)>, Resolution), SimError> {
        let Some(d) = self.latches.id_exmem.take() else {
            self.record(Stage::ExMem, None, String::new(), Tag::Bubble);
            return Ok((None, Resolution::Continue));
        };
        let pc = d.pc;
        let instr = d.instr.clone().map_err(|f| self.error(pc, f))?;
        self.record(Stage::ExMem, Some(pc), instr.to_string(), Tag::Normal);

        let forward = |reg: u8, latched: u32| match wb_write {
            Some((rd, v)) if rd == reg && reg != 0 => v,
            _ => latched,
        };
        let a = forward(instr.rs1, d.rs1_val);
        let b = forward(instr.rs2, d.rs2_val);

        let mut resolution = Resolution::Continue;
        let mut write = None;
        match instr.kind {
            k if k.is_load() => {
                let value = self.dmem.primary(|m| exec::load(k, m, d.addr)).map_err(|e| self.error(pc, e.into()))?;
                write = Some((instr.rd, value));
            }
            k if k.is_store() => {
                self.dmem.primary(|m| exec::store(k, m, d.addr, b)).map_err(|e| self.error(pc, e.into()))?;
            }
            k if k.is_branch() => {
                if exec::branch_taken(k, a, b) {
                    resolution = Resolution::Redirect(pc.wrapping_add(instr.imm as u32));
                }
            }
            Kind::Jal => {
                write = Some((instr.rd, pc.wrapping_add(4)));
                resolution = Resolution::Redirect(pc.wrapping_add(instr.imm as u32));
            }
            Kind::Jalr => {
                write = Some((instr.rd, pc.wrapping_add(4)));
                resolution = Resolution::Redirect(d.addr & !1);
            }
            Kind::Rpa => resolution = Resolution::Redirect(d.addr),
            Kind::Baa => {
                let session =
                    murac::open_session(&self.aux, d.addr, &mut self.dmem).map_err(|e| self.error(pc, e.into()))?;
                self.counters.baa_count += 1;
                if !session.is_busy() {
                    self.handoff_left = self.config.handoff_cycles;
                }
                self.session = Some(session);
                resolution = Resolution::Redirect(pc.wrapping_add(4));
            }
            Kind::Ebreak => resolution = Resolution::Halt,
            Kind::Fence | Kind::Ecall => {}
            k => write = Some((instr.rd, exec::alu(k, a, b, instr.imm, pc))),
        }
        let write = write.filter(|(rd, _)| *rd != 0);
        self.latches.exmem_wb = Some(Executed { pc, instr, write });
        Ok((write, resolution))
    }

    /// Returns true when ID interlocked this cycle.
    fn decode(&mut self, ex_write: Option<(u8, u32)>) -> bool {
        let Some(f) = self.latches.if_id.clone() else {
            self.record(Stage::Id, None, String::new(), Tag::Bubble);
            self.latches.id_exmem = None;
            return false;
        };
        let instr = f
            .word
            .clone()
            .and_then(|w| isa::decode(InstructionWord(w)).map_err(|_| Fault::IllegalInstruction { word: w }));
        let Ok(i) = instr else {
            self.record(Stage::Id, Some(f.pc), describe_word(&f.word), Tag::Normal);
            self.latches.id_exmem = Some(Decoded { pc: f.pc, instr, rs1_val: 0, rs2_val: 0, addr: 0 });
            self.latches.if_id = None;
            return false;
        };

        let ex_hit = matches!(ex_write, Some((rd, _)) if i.reads_rs1() && rd == i.rs1);
        if i.kind.uses_address_adder() && ex_hit && !self.config.id_adder_forwarding {
            self.counters.stall_cycles += 1;
            self.record(Stage::Id, Some(f.pc), i.to_string(), Tag::Stall);
            self.record(Stage::If, Some(self.fetch_pc), describe_fetch(&self.imem, self.fetch_pc), Tag::Stall);
            self.latches.id_exmem = None;
            return true;
        }

        self.record(Stage::Id, Some(f.pc), i.to_string(), Tag::Normal);
        let rs1_val = self.machine.reg(i.rs1);
        let rs2_val = self.machine.reg(i.rs2);
        let base = match ex_write {
            Some((rd, v)) if ex_hit && rd == i.rs1 => v,
            _ => rs1_val,
        };
        let addr = base.wrapping_add(i.imm as u32);
        self.latches.id_exmem = Some(Decoded { pc: f.pc, instr: Ok(i), rs1_val, rs2_val, addr });
        self.latches.if_id = None;
        false
    }

    fn fetch(&mut self) {
        if self.fetch_stopped {
            self.record(Stage::If, None, String::new(), Tag::Bubble);
            return;
        }
        let pc = self.fetch_pc;
        let word = if !pc.is_multiple_of(4) {
            Err(Fault::MisalignedFetch { addr: pc })
        } else {
            self.imem.read_u32(pc).map_err(|_| Fault::OutOfRangeAccess { addr: pc })
        };
        self.record(Stage::If, Some(pc), describe_word(&word), Tag::Normal);
        self.latches.if_id = Some(Fetched { pc, word });
        self.fetch_pc = pc.wrapping_add(4);
    }

    /// Ticks until `ebreak` retires or `max_cycles` elapse.
    pub fn run(&mut self, max_cycles: u64, freq_mhz: f64) -> Result<RunReport, SimError> {
        while !self.machine.halted {
            if self.counters.cycle >= max_cycles {
                return Err(SimError {
                    pc: self.fetch_pc,
                    cycle: Some(self.counters.cycle),
                    fault: Fault::RunawayProgram { limit: max_cycles },
                });
            }
            self.tick()?;
        }
        Ok(self.report(freq_mhz))
    }

    pub fn report(&self, freq_mhz: f64) -> RunReport {
        let c = self.counters;
        RunReport::new(c.cycle, c.stall_cycles, c.aux_cycles, self.machine.retired, c.flushes, c.baa_count, freq_mhz)
    }
}

fn describe_word(word: &Result<u32, Fault>) -> String {
    match word {
        Ok(w) => crate::asm::disassemble_word(*w),
        Err(f) => format!("<{f}>"),
    }
}

fn describe_fetch(imem: &MemoryBank, pc: u32) -> String {
    imem.read_u32(pc).map(crate::asm::disassemble_word).unwrap_or_default()
}
