use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    If,
    Id,
    ExMem,
    Wb,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::If, Stage::Id, Stage::ExMem, Stage::Wb];
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::If => "IF",
            Stage::Id => "ID",
            Stage::ExMem => "EXMEM",
            Stage::Wb => "WB",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Normal,
    Bubble,
    Stall,
    Flush,
    /// Frozen while the accelerator owns the machine.
    Aux,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Normal => "-",
            Tag::Bubble => "BUBBLE",
            Tag::Stall => "STALL",
            Tag::Flush => "FLUSH",
            Tag::Aux => "AUX",
        })
    }
}

/// One stage's occupancy in one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub cycle: u64,
    pub stage: Stage,
    pub pc: Option<u32>,
    pub text: String,
    pub tag: Tag,
}

/// `cycle stage pc tag text`, one entry per line.
impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pc = self.pc.map(|p| format!("{p:08x}")).unwrap_or_else(|| "--------".into());
        write!(f, "{:>8} {:<5} {} {:<6} {}", self.cycle, self.stage, pc, self.tag, self.text)
    }
}
