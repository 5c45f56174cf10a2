//! Finite binary strings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A finite string over `{0,1}`. The empty string is allowed.
///
/// The derived order is lexicographic with a prefix sorting before its
/// extensions, which is the canonical order used for every sorted output.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString(Vec<bool>);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("invalid bit {found:?} at position {position} in {input:?}")]
pub struct ParseBitStringError {
    pub input: String,
    pub position: usize,
    pub found: char,
}

impl BitString {
    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    /// `self` followed by one more bit.
    pub fn child(&self, bit: bool) -> BitString {
        let mut bits = Vec::with_capacity(self.0.len() + 1);
        bits.extend_from_slice(&self.0);
        bits.push(bit);
        BitString(bits)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    /// Drops the last bit; `None` for the empty string.
    pub fn parent(&self) -> Option<BitString> {
        if self.0.is_empty() {
            None
        } else {
            Some(BitString(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString(self.0[..len].to_vec())
    }

    /// Drops the first `n` bits.
    pub fn suffix_from(&self, n: usize) -> BitString {
        BitString(self.0[n..].to_vec())
    }

    /// True when `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    /// True when one of the two strings is a prefix of the other, i.e. the
    /// intervals they denote intersect.
    pub fn comparable(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Proper prefixes, longest first, ending with the empty string.
    pub fn proper_prefixes(&self) -> impl Iterator<Item = BitString> + '_ {
        (0..self.0.len()).rev().map(move |l| self.prefix(l))
    }

    /// All strings of the given length in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "enumeration of 2^{len} strings requested");
        (0u64..(1u64 << len)).map(move |v| BitString::from_value(v, len))
    }

    /// All strings of length `<= max_len`, shortest first, lexicographic within
    /// a length.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_length)
    }

    /// The `len`-bit big-endian encoding of `value`.
    pub fn from_value(value: u64, len: usize) -> BitString {
        BitString((0..len).rev().map(|i| (value >> i) & 1 == 1).collect())
    }

    /// Binary numeral of a natural number without leading zeros (`0` is "0").
    pub fn numeral(n: u64) -> BitString {
        let len = (64 - n.leading_zeros() as usize).max(1);
        BitString::from_value(n, len)
    }

    /// Shortlex comparison: by length, then lexicographically.
    pub fn cmp_shortlex(&self, other: &BitString) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
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
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = ParseBitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(ParseBitStringError { input: s.to_string(), position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building strings in tests and examples. Panics on bad input.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("binary string literal")
}
