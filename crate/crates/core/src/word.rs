//! Fixed-length binary words.
//!
//! A [`Word`] stores up to [`N_MAX`] bits packed into a `u64`. Position 1 is
//! the leftmost character of the serialized string and is held in the most
//! significant of the `n` used bits, so the numeric order of the packed value
//! coincides with the lexicographic order of the 0/1 strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported word length.
pub const N_MAX: usize = 64;

#[inline]
pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bit offset inside the packed value for the 1-based position `i`.
#[inline]
pub(crate) fn offset(n: usize, i: usize) -> u32 {
    (n - i) as u32
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

// Lengths are at least 1, so there is no `is_empty`.
#[allow(clippy::len_without_is_empty)]
impl Word {
    /// Builds a word of length `n` from its packed value.
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::precondition(format!(
                "word length {n} outside 1..={N_MAX}"
            )));
        }
        if bits & !mask(n) != 0 {
            return Err(Error::precondition(format!(
                "value {bits:#x} does not fit in {n} bits"
            )));
        }
        Ok(Word { len: n as u8, bits })
    }

    #[inline]
    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        debug_assert!((1..=N_MAX).contains(&n) && bits & !mask(n) == 0);
        Word { len: n as u8, bits }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Word::new(n, 0)
    }

    /// Builds a word from bits given left to right.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0u64;
        for &b in bits {
            if b > 1 {
                return Err(Error::precondition(format!("bit value {b} is not 0 or 1")));
            }
            value = (value << 1) | u64::from(b);
        }
        Word::new(bits.len(), value)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Packed value; position 1 is the most significant used bit.
    #[inline]
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit at the 1-based position `i`.
    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len(), "position {i} out of range");
        ((self.bits >> offset(self.len(), i)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.len()).map(|i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> Word {
        Word::from_raw(self.len(), !self.bits & mask(self.len()))
    }

    /// Bits at positions 2, 4, 6, ... in order.
    pub fn even_positions(&self) -> Vec<u8> {
        (2..=self.len()).step_by(2).map(|i| self.bit(i)).collect()
    }

    /// All words of length `n` in increasing lexicographic order.
    pub fn all(n: usize) -> impl DoubleEndedIterator<Item = Word> {
        assert!((1..64).contains(&n), "cannot enumerate all words of length {n}");
        (0..1u64 << n).map(move |v| Word::from_raw(n, v))
    }

    pub(crate) fn ensure_same_len(&self, other: &Word) -> Result<()> {
        if self.len != other.len {
            Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            f.write_str(if self.bit(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit character `{other}` in `{s}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        Word::from_bits(&bits)
    }
}
