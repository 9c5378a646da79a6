/// Marsaglia xorshift64 (shifts 13, 7, 17). Benchmark inputs are the top
/// byte of successive states, so every input lies in `0..=255`.
#[derive(Debug, Clone)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        // Zero is a fixed point of the generator.
        Self { state: if seed == 0 { 0x9e37_79b9_7f4a_7c15 } else { seed } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    pub fn next_byte(&mut self) -> u32 {
        (self.next_u64() >> 56) as u32
    }

    pub fn bytes(&mut self, n: usize) -> Vec<u32> {
        (0..n).map(|_| self.next_byte()).collect()
    }
}
