//! Byte-addressable IMEM/DMEM storage.

use thiserror::Error;

pub const KIB: usize = 1024;
pub const DEFAULT_IMEM_BYTES: usize = 64 * KIB;
pub const DEFAULT_DMEM_BYTES: usize = 64 * KIB;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MemError {
    #[error("access of {width} bytes at 0x{addr:08x} is outside the {size}-byte bank")]
    OutOfRange { addr: u32, width: u32, size: usize },
    #[error("access of {width} bytes at 0x{addr:08x} is misaligned")]
    Misaligned { addr: u32, width: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("memory size {0} is not a power of two")]
pub struct BadSize(pub usize);

/// A power-of-two sized memory with little-endian, naturally aligned
/// accesses.
#[derive(Clone, PartialEq, Eq)]
pub struct MemoryBank {
    bytes: Vec<u8>,
}

impl std::fmt::Debug for MemoryBank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MemoryBank").field("size_bytes", &self.bytes.len()).finish()
    }
}

impl MemoryBank {
    pub fn new(size_bytes: usize) -> Result<Self, BadSize> {
        if size_bytes == 0 || !size_bytes.is_power_of_two() {
            return Err(BadSize(size_bytes));
        }
        Ok(Self { bytes: vec![0; size_bytes] })
    }

    pub fn size_bytes(&self) -> usize {
        self.bytes.len()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    fn check(&self, addr: u32, width: u32) -> Result<usize, MemError> {
        if !addr.is_multiple_of(width) {
            return Err(MemError::Misaligned { addr, width });
        }
        let start = addr as usize;
        if start + width as usize > self.bytes.len() {
            return Err(MemError::OutOfRange { addr, width, size: self.bytes.len() });
        }
        Ok(start)
    }

    pub fn read_u8(&self, addr: u32) -> Result<u8, MemError> {
        let i = self.check(addr, 1)?;
        Ok(self.bytes[i])
    }

    pub fn read_u16(&self, addr: u32) -> Result<u16, MemError> {
        let i = self.check(addr, 2)?;
        Ok(u16::from_le_bytes([self.bytes[i], self.bytes[i + 1]]))
    }

    pub fn read_u32(&self, addr: u32) -> Result<u32, MemError> {
        let i = self.check(addr, 4)?;
        let mut w = [0; 4];
        w.copy_from_slice(&self.bytes[i..i + 4]);
        Ok(u32::from_le_bytes(w))
    }

    pub fn write_u8(&mut self, addr: u32, value: u8) -> Result<(), MemError> {
        let i = self.check(addr, 1)?;
        self.bytes[i] = value;
        Ok(())
    }

    pub fn write_u16(&mut self, addr: u32, value: u16) -> Result<(), MemError> {
        let i = self.check(addr, 2)?;
        self.bytes[i..i + 2].copy_from_slice(&value.to_le_bytes());
        Ok(())
    }

    pub fn write_u32(&mut self, addr: u32, value: u32) -> Result<(), MemError> {
        let i = self.check(addr, 4)?;
        self.bytes[i..i + 4].copy_from_slice(&value.to_le_bytes());
        Ok(())
    }

    /// Copies consecutive little-endian words starting at byte address `base`.
    pub fn load_words(&mut self, base: u32, words: &[u32]) -> Result<(), MemError> {
        for (i, w) in words.iter().enumerate() {
            self.write_u32(base + 4 * i as u32, *w)?;
        }
        Ok(())
    }

    pub fn read_words(&self, base: u32, count: usize) -> Result<Vec<u32>, MemError> {
        (0..count).map(|i| self.read_u32(base + 4 * i as u32)).collect()
    }

    /// Raw bytes of `[start, start + len)`, for digests.
    pub fn slice(&self, start: u32, len: usize) -> Result<&[u8], MemError> {
        let s = start as usize;
        if s + len > self.bytes.len() {
            return Err(MemError::OutOfRange { addr: start, width: len as u32, size: self.bytes.len() });
        }
        Ok(&self.bytes[s..s + len])
    }
}

/// Word-granular view used by accelerator functional models.
pub trait WordMemory {
    fn size_bytes(&self) -> usize;
    fn load_word(&mut self, addr: u32) -> Result<u32, MemError>;
    fn store_word(&mut self, addr: u32, value: u32) -> Result<(), MemError>;
}

impl WordMemory for MemoryBank {
    fn size_bytes(&self) -> usize {
        self.bytes.len()
    }

    fn load_word(&mut self, addr: u32) -> Result<u32, MemError> {
        self.read_u32(addr)
    }

    fn store_word(&mut self, addr: u32, value: u32) -> Result<(), MemError> {
        self.write_u32(addr, value)
    }
}
