//! Fixed-length bit strings, the universal payload for secrets, shares and
//! wire values.
//!
//! Bits are ordered: index 0 is the leftmost bit of the textual form, so
//! `"101"` parses to `[1, 0, 1]` and displays back as `101`. All bitwise
//! operations require equal lengths.

use std::fmt;
use std::ops::{BitAnd, BitXor};

use rand::Rng;

use crate::error::BitsError;

/// An immutable-by-convention sequence of bits.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// The empty bit string.
    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    /// All-zero string of length `len`.
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    /// Uniformly random string of length `len`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        Self {
            bits: (0..len).map(|_| rng.gen::<bool>()).collect(),
        }
    }

    pub fn from_bits(bits: impl Into<Vec<bool>>) -> Self {
        Self { bits: bits.into() }
    }

    /// Parses a textual bit string of `'0'`/`'1'` characters, leftmost first.
    pub fn parse(text: &str) -> Result<Self, BitsError> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(BitsError::BadCharacter { index: i, ch: other }),
            }
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn flip(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    pub fn push(&mut self, value: bool) {
        self.bits.push(value);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Number of ones.
    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    /// The sub-string `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// Bitwise AND with a single replicated bit: returns `self` when `bit` is
    /// set and the all-zero string otherwise.
    pub fn mask(&self, bit: bool) -> Self {
        if bit {
            self.clone()
        } else {
            Self::zeros(self.len())
        }
    }

    /// Packs the bits into bytes, first bit in the most significant position
    /// of the first byte.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for (i, bit) in self.bits.iter().enumerate() {
            if *bit {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    /// Inverse of [`BitString::to_bytes`] for a known bit length.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self, BitsError> {
        if bytes.len() != len.div_ceil(8) {
            return Err(BitsError::BadByteLength {
                bits: len,
                bytes: bytes.len(),
            });
        }
        let mut bits = Vec::with_capacity(len);
        for i in 0..len {
            bits.push(bytes[i / 8] & (0x80 >> (i % 8)) != 0);
        }
        Ok(Self { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.bits {
            f.write_str(if *bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl BitXor for &BitString {
    type Output = BitString;

    fn bitxor(self, rhs: Self) -> BitString {
        assert_eq!(self.len(), rhs.len(), "xor of unequal bit lengths");
        BitString {
            bits: self
                .bits
                .iter()
                .zip(&rhs.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl BitAnd for &BitString {
    type Output = BitString;

    fn bitand(self, rhs: Self) -> BitString {
        assert_eq!(self.len(), rhs.len(), "and of unequal bit lengths");
        BitString {
            bits: self
                .bits
                .iter()
                .zip(&rhs.bits)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let s = BitString::parse("10110").unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.to_string(), "10110");
        assert!(s.bit(0));
        assert!(!s.bit(1));
    }

    #[test]
    fn parse_rejects_bad_characters() {
        assert!(BitString::parse("10x").is_err());
    }

    #[test]
    fn xor_and_mask() {
        let a = BitString::parse("1100").unwrap();
        let b = BitString::parse("1010").unwrap();
        assert_eq!((&a ^ &b).to_string(), "0110");
        assert_eq!((&a & &b).to_string(), "1000");
        assert_eq!(a.mask(false).to_string(), "0000");
        assert_eq!(a.mask(true), a);
    }

    #[test]
    fn byte_packing_round_trip() {
        for text in ["", "1", "10110010", "110110011"] {
            let s = BitString::parse(text).unwrap();
            let bytes = s.to_bytes();
            assert_eq!(BitString::from_bytes(s.len(), &bytes).unwrap(), s);
        }
    }
}
