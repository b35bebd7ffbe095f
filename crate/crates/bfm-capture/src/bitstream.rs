//! LSB-first bit packing, the layout used by the compressed feedback report.

/// Reads fields least-significant-bit first from a byte slice.
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn remaining_bits(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    /// Read `count` bits (at most 16). Bits beyond the buffer read as zero;
    /// callers are expected to check `remaining_bits` first.
    pub fn read(&mut self, count: usize) -> u16 {
        debug_assert!(count <= 16);
        let mut result: u32 = 0;
        let mut got = 0;
        while got < count {
            let byte = self.pos / 8;
            let bit = self.pos % 8;
            let avail = 8 - bit;
            let take = avail.min(count - got);
            let val = if byte < self.bytes.len() {
                (self.bytes[byte] >> bit) as u32
            } else {
                0
            };
            result |= (val & ((1 << take) - 1)) << got;
            got += take;
            self.pos += take;
        }
        result as u16
    }
}

/// Writes fields least-significant-bit first into a growing byte buffer.
#[derive(Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, value: u16, count: usize) {
        debug_assert!(count <= 16);
        debug_assert!(count == 16 || value < (1 << count));
        for i in 0..count {
            let byte = self.bit_len / 8;
            let bit = self.bit_len % 8;
            if byte == self.bytes.len() {
                self.bytes.push(0);
            }
            if (value >> i) & 1 == 1 {
                self.bytes[byte] |= 1 << bit;
            }
            self.bit_len += 1;
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    /// Finish, padding the last partial byte with zero bits.
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}
