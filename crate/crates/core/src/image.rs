//! Memory images and the line-oriented hex file format.
//!
//! A hex file holds one 8-digit hexadecimal word per line. A line of the
//! form `@ADDR` moves the load cursor to word address `ADDR` (hex, counted
//! in words, not bytes). `#` starts a comment. Words land in byte memory
//! little-endian.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::mem::{MemError, MemoryBank};

/// A contiguous run of words starting at a word-aligned byte address.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemoryImage {
    pub base_address: u32,
    pub words: Vec<u32>,
    pub symbols: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexError {
    #[error("line {line}: expected an 8-digit hex word, found `{text}`")]
    BadWord { line: usize, text: String },
    #[error("line {line}: bad address directive `{text}`")]
    BadAddress { line: usize, text: String },
}

impl MemoryImage {
    pub fn new(base_address: u32, words: Vec<u32>) -> Self {
        Self { base_address, words, symbols: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Byte address one past the last word.
    pub fn end_address(&self) -> u64 {
        self.base_address as u64 + 4 * self.words.len() as u64
    }

    pub fn load_into(&self, bank: &mut MemoryBank) -> Result<(), MemError> {
        bank.load_words(self.base_address, &self.words)
    }

    pub fn symbol(&self, name: &str) -> Option<u32> {
        self.symbols.get(name).copied()
    }

    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        if self.base_address != 0 {
            let _ = writeln!(out, "@{:x}", self.base_address / 4);
        }
        for w in &self.words {
            let _ = writeln!(out, "{w:08x}");
        }
        out
    }

    /// Parses the hex format. Gaps between `@` regions are zero-filled;
    /// a word written twice keeps its last value.
    pub fn from_hex(text: &str) -> Result<Self, HexError> {
        let mut cells: BTreeMap<u32, u32> = BTreeMap::new();
        let mut cursor: u32 = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(addr) = content.strip_prefix('@') {
                cursor = u32::from_str_radix(addr.trim(), 16)
                    .ok()
                    .filter(|a| *a <= u32::MAX / 4)
                    .ok_or_else(|| HexError::BadAddress { line, text: content.to_string() })?;
                continue;
            }
            if content.len() != 8 {
                return Err(HexError::BadWord { line, text: content.to_string() });
            }
            let word =
                u32::from_str_radix(content, 16).map_err(|_| HexError::BadWord { line, text: content.to_string() })?;
            cells.insert(cursor, word);
            cursor = cursor.wrapping_add(1);
        }
        let (Some(&first), Some(&last)) = (cells.keys().next(), cells.keys().next_back()) else {
            return Ok(Self::default());
        };
        let mut words = vec![0; (last - first) as usize + 1];
        for (addr, w) in cells {
            words[(addr - first) as usize] = w;
        }
        Ok(Self::new(first * 4, words))
    }
}
