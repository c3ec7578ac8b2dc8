//! Self-delimiting label encodings.
//!
//! Naturals use Elias gamma on `x + 1`. A tuple is the concatenation of its
//! components, each prefixed by the gamma-coded natural giving its length.

use crate::BitString;

/// Appends the Elias gamma code of `x + 1`.
pub fn push_nat(out: &mut BitString, x: u64) {
    let y = x as u128 + 1;
    let width = 128 - y.leading_zeros() as usize;
    for _ in 1..width {
        out.push(false);
    }
    for k in (0..width).rev() {
        out.push((y >> k) & 1 == 1);
    }
}

pub fn nat(x: u64) -> BitString {
    let mut out = BitString::new();
    push_nat(&mut out, x);
    out
}

/// Bit length of [`nat`]`(x)`.
pub fn nat_len(x: u64) -> usize {
    let y = x as u128 + 1;
    2 * (127 - y.leading_zeros() as usize) + 1
}

/// Cursor over a bit string; every read returns `None` on truncated input.
#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(s: &'a BitString) -> Self {
        BitReader { bits: s.as_slice(), pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn is_done(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let b = *self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    pub fn read_bits(&mut self, k: usize) -> Option<BitString> {
        if self.remaining() < k {
            return None;
        }
        let out = BitString::from_bools(self.bits[self.pos..self.pos + k].iter().copied());
        self.pos += k;
        Some(out)
    }

    pub fn read_nat(&mut self) -> Option<u64> {
        let mut zeros = 0;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 64 {
                return None;
            }
        }
        let mut y: u128 = 1;
        for _ in 0..zeros {
            y = (y << 1) | self.read_bit()? as u128;
        }
        u64::try_from(y - 1).ok()
    }

    /// The rest of the string, consuming it.
    pub fn rest(&mut self) -> BitString {
        let out = BitString::from_bools(self.bits[self.pos..].iter().copied());
        self.pos = self.bits.len();
        out
    }
}

pub fn encode_tuple<'a, I: IntoIterator<Item = &'a BitString>>(parts: I) -> BitString {
    let mut out = BitString::new();
    for p in parts {
        push_nat(&mut out, p.len() as u64);
        out.extend(p);
    }
    out
}

/// Splits a tuple encoding; `None` unless the whole string parses.
pub fn decode_tuple(s: &BitString) -> Option<Vec<BitString>> {
    let mut r = BitReader::new(s);
    let mut out = Vec::new();
    while !r.is_done() {
        let len = r.read_nat()?;
        out.push(r.read_bits(usize::try_from(len).ok()?)?);
    }
    Some(out)
}

/// As [`decode_tuple`], but the arity must be exactly `k`.
pub fn decode_tuple_exact(s: &BitString, k: usize) -> Option<Vec<BitString>> {
    decode_tuple(s).filter(|parts| parts.len() == k)
}
