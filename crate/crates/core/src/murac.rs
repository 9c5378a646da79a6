//! Coupling between the processor (primary architecture) and an accelerator
//! (auxiliary architecture).
//!
//! `baa` passes the address of an argument array whose first word is the
//! element count. While an accelerator session is busy the processor is
//! stalled and the shared DMEM port belongs to the accelerator. The
//! accelerator's architectural effect is computed when the session opens,
//! buffered, and committed in one step when the session completes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::mem::{MemError, MemoryBank, WordMemory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuracError {
    #[error("baa executed with no accelerator registered")]
    NoAcceleratorRegistered,
    #[error("bad argument array at 0x{addr:08x}: {reason}")]
    BadArgumentArray { addr: u32, reason: String },
}

impl MuracError {
    pub fn bad(addr: u32, reason: impl Into<String>) -> Self {
        MuracError::BadArgumentArray { addr, reason: reason.into() }
    }
}

/// The count-prefixed argument array a `baa` points at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentArray {
    pub addr: u32,
    pub elements: Vec<u32>,
}

impl ArgumentArray {
    pub fn read(mem: &mut dyn WordMemory, addr: u32) -> Result<Self, MuracError> {
        let size = mem.size_bytes() as u64;
        if !addr.is_multiple_of(4) {
            return Err(MuracError::bad(addr, "address is not word aligned"));
        }
        if addr as u64 + 4 > size {
            return Err(MuracError::bad(addr, "address is outside DMEM"));
        }
        let count = mem.load_word(addr).map_err(|e| MuracError::bad(addr, e.to_string()))?;
        if addr as u64 + 4 + 4 * count as u64 > size {
            return Err(MuracError::bad(addr, format!("{count} elements overrun DMEM")));
        }
        let elements = (0..count)
            .map(|i| mem.load_word(addr + 4 + 4 * i))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| MuracError::bad(addr, e.to_string()))?;
        Ok(Self { addr, elements })
    }

    pub fn count(&self) -> usize {
        self.elements.len()
    }

    /// Errors unless the array carries exactly `n` elements.
    pub fn expect_len(&self, n: usize) -> Result<(), MuracError> {
        if self.count() == n {
            Ok(())
        } else {
            Err(MuracError::bad(self.addr, format!("expected {n} elements, found {}", self.count())))
        }
    }

    pub fn get(&self, i: usize) -> u32 {
        self.elements[i]
    }

    /// Maps a memory fault inside the accelerator to an argument error.
    pub fn fault(&self, err: MemError) -> MuracError {
        MuracError::bad(self.addr, err.to_string())
    }
}

/// Behaviour every accelerator provides: an atomic functional effect on
/// DMEM and a deterministic cycle cost for the timing model.
pub trait Accelerator: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    fn cycle_cost(&self, args: &ArgumentArray) -> Result<u64, MuracError>;

    /// Must only touch addresses derivable from `args`.
    fn functional_apply(&self, mem: &mut dyn WordMemory, args: &ArgumentArray) -> Result<(), MuracError>;
}

/// The single accelerator slot of a run. `baa` carries no accelerator id.
#[derive(Debug, Clone, Default)]
pub struct AuxiliaryRegistry {
    accel: Option<Arc<dyn Accelerator>>,
}

impl AuxiliaryRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with(accel: Arc<dyn Accelerator>) -> Self {
        Self { accel: Some(accel) }
    }

    pub fn register(&mut self, accel: Arc<dyn Accelerator>) {
        self.accel = Some(accel);
    }

    pub fn get(&self) -> Result<&Arc<dyn Accelerator>, MuracError> {
        self.accel.as_ref().ok_or(MuracError::NoAcceleratorRegistered)
    }
}

/// Runs an accelerator to completion directly on `mem`. Returns the cycle
/// cost it would have been charged. Used by the golden interpreter.
pub fn execute_atomically(
    registry: &AuxiliaryRegistry,
    args_addr: u32,
    mem: &mut MemoryBank,
) -> Result<u64, MuracError> {
    let accel = registry.get()?;
    let args = ArgumentArray::read(mem, args_addr)?;
    let cost = accel.cycle_cost(&args)?;
    accel.functional_apply(mem, &args)?;
    Ok(cost)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    Primary,
    Auxiliary,
}

/// Access counters on the shared DMEM port, tagged by owner.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PortStats {
    pub primary_accesses: u64,
    pub auxiliary_accesses: u64,
    /// Processor-side accesses issued while the accelerator owned the port.
    /// Must stay zero.
    pub primary_while_auxiliary: u64,
    /// Accelerator-side accesses issued outside a session. Must stay zero.
    pub auxiliary_while_primary: u64,
}

/// DMEM behind the select multiplexers shared by processor and accelerator.
#[derive(Debug, Clone)]
pub struct SharedDmem {
    bank: MemoryBank,
    owner: Owner,
    stats: PortStats,
}

impl SharedDmem {
    pub fn new(bank: MemoryBank) -> Self {
        Self { bank, owner: Owner::Primary, stats: PortStats::default() }
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn stats(&self) -> PortStats {
        self.stats
    }

    /// Read-only view for inspection; not an architectural access.
    pub fn bank(&self) -> &MemoryBank {
        &self.bank
    }

    pub fn into_bank(self) -> MemoryBank {
        self.bank
    }

    /// A processor-issued access.
    pub fn primary<T>(&mut self, f: impl FnOnce(&mut MemoryBank) -> T) -> T {
        self.stats.primary_accesses += 1;
        if self.owner == Owner::Auxiliary {
            self.stats.primary_while_auxiliary += 1;
        }
        f(&mut self.bank)
    }

    fn note_auxiliary(&mut self, n: u64) {
        self.stats.auxiliary_accesses += n;
        if self.owner == Owner::Primary {
            self.stats.auxiliary_while_primary += n;
        }
    }
}

/// Records accelerator writes without exposing them until commit.
struct StagedWrites<'a> {
    bank: &'a MemoryBank,
    writes: BTreeMap<u32, u32>,
    accesses: u64,
}

impl WordMemory for StagedWrites<'_> {
    fn size_bytes(&self) -> usize {
        self.bank.size_bytes()
    }

    fn load_word(&mut self, addr: u32) -> Result<u32, MemError> {
        self.accesses += 1;
        let committed = self.bank.read_u32(addr)?;
        Ok(self.writes.get(&addr).copied().unwrap_or(committed))
    }

    fn store_word(&mut self, addr: u32, value: u32) -> Result<(), MemError> {
        self.accesses += 1;
        self.bank.read_u32(addr)?;
        self.writes.insert(addr, value);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionStatus {
    Busy,
    Done,
}

/// An in-flight accelerator invocation.
#[derive(Debug, Clone)]
pub struct AuxiliarySession {
    pub args_addr: u32,
    pub args: ArgumentArray,
    /// Cycle cost charged for this invocation.
    pub cost: u64,
    remaining: u64,
    status: SessionStatus,
    pending: Vec<(u32, u32)>,
}

impl AuxiliarySession {
    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn is_busy(&self) -> bool {
        self.status == SessionStatus::Busy
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Number of buffered DMEM writes awaiting commit.
    pub fn pending_writes(&self) -> usize {
        self.pending.len()
    }

    /// One clock of accelerator work. Commits and releases DMEM on the last.
    pub fn tick(&mut self, dmem: &mut SharedDmem) -> SessionStatus {
        if self.status == SessionStatus::Busy {
            self.remaining -= 1;
            if self.remaining == 0 {
                self.commit(dmem);
            }
        }
        self.status
    }

    fn commit(&mut self, dmem: &mut SharedDmem) {
        dmem.note_auxiliary(self.pending.len() as u64);
        for (addr, value) in self.pending.drain(..) {
            // Bounds were checked when the write was staged.
            dmem.bank.write_u32(addr, value).expect("staged write in range");
        }
        dmem.owner = Owner::Primary;
        self.status = SessionStatus::Done;
    }
}

/// Hands DMEM to the registered accelerator and starts a session.
pub fn open_session(
    registry: &AuxiliaryRegistry,
    args_addr: u32,
    dmem: &mut SharedDmem,
) -> Result<AuxiliarySession, MuracError> {
    let accel = registry.get()?;
    dmem.owner = Owner::Auxiliary;
    let mut staged = StagedWrites { bank: &dmem.bank, writes: BTreeMap::new(), accesses: 0 };
    let result = ArgumentArray::read(&mut staged, args_addr).and_then(|args| {
        let cost = accel.cycle_cost(&args)?;
        accel.functional_apply(&mut staged, &args)?;
        Ok((args, cost))
    });
    let accesses = staged.accesses;
    let pending: Vec<_> = staged.writes.into_iter().collect();
    dmem.note_auxiliary(accesses);
    let (args, cost) = match result {
        Ok(v) => v,
        Err(e) => {
            dmem.owner = Owner::Primary;
            return Err(e);
        }
    };
    let mut session = AuxiliarySession { args_addr, args, cost, remaining: cost, status: SessionStatus::Busy, pending };
    if cost == 0 {
        session.commit(dmem);
    }
    Ok(session)
}
