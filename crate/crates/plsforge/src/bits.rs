//! Bit strings used for node inputs and proof labels.

use std::fmt;

use crate::Error;

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitString(bits.into_iter().collect())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse01(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitString)
    }

    /// `value` written big-endian in exactly `width` bits.
    pub fn from_uint(value: u64, width: usize) -> Self {
        BitString((0..width).rev().map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    pub fn to_uint(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString(self.0[start..end].to_vec())
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// Hex digits, most significant bit first, zero-padded to a whole nibble.
    pub fn to_hex(&self) -> String {
        if self.0.is_empty() {
            return "-".to_string();
        }
        self.0
            .chunks(4)
            .map(|chunk| {
                let mut v = 0u32;
                for i in 0..4 {
                    v = (v << 1) | chunk.get(i).copied().unwrap_or(false) as u32;
                }
                char::from_digit(v, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`BitString::to_hex`]. `bitlen` defaults to four bits per digit.
    pub fn from_hex(hex: &str, bitlen: Option<usize>) -> Result<Self, Error> {
        let digits: &str = if hex == "-" { "" } else { hex };
        let mut bits = Vec::with_capacity(digits.len() * 4);
        for c in digits.chars() {
            let v = c.to_digit(16).ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
            for i in (0..4).rev() {
                bits.push((v >> i) & 1 == 1);
            }
        }
        let len = bitlen.unwrap_or(bits.len());
        if len > bits.len() || bits.len() - len >= 4 {
            return Err(Error::Parse(format!("bit length {len} does not fit hex {hex:?}")));
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::Parse(format!("nonzero padding in hex {hex:?}")));
        }
        bits.truncate(len);
        Ok(BitString(bits))
    }

    /// Every bit string of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> Vec<BitString> {
        let mut out = Vec::new();
        for len in 0..=max_len {
            for v in 0..(1u64 << len) {
                out.push(BitString::from_uint(v, len));
            }
        }
        out
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b\"{self}\"")
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_odd_lengths() {
        for len in 0..20 {
            for v in [0u64, 1, 0x5a5a5, u64::MAX] {
                let b = BitString::from_uint(v, len);
                let back = BitString::from_hex(&b.to_hex(), Some(len)).unwrap();
                assert_eq!(back, b);
            }
        }
    }

    #[test]
    fn hex_rejects_garbage() {
        assert!(BitString::from_hex("zz", None).is_err());
        assert!(BitString::from_hex("f", Some(2)).is_err());
        assert!(BitString::from_hex("0", Some(9)).is_err());
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(BitString::all_up_to(0).len(), 1);
        assert_eq!(BitString::all_up_to(3).len(), 15);
    }

    #[test]
    fn uint_round_trip() {
        assert_eq!(BitString::from_uint(5, 4).to_string(), "0101");
        assert_eq!(BitString::parse01("0101").unwrap().to_uint(), Some(5));
    }
}
