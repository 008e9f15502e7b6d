//! Grain-correcting code constructions, verifiers and decoders.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::model::{apply_mask, error_masks, images_raw, ErrorVector};
use crate::word::{Word, N_MAX};

/// How a [`Code`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Rn,
    HammingPrefix,
    GreedyS1,
    File,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Rn => "rn",
            Provenance::HammingPrefix => "hamming-prefix",
            Provenance::GreedyS1 => "greedy-s1",
            Provenance::File => "file",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A set of words of common length, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    words: Vec<Word>,
    provenance: Provenance,
}

impl Code {
    /// Builds a code; rejects mixed lengths and duplicates.
    pub fn new(n: usize, mut words: Vec<Word>, provenance: Provenance) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::precondition(format!("code length {n} outside 1..={N_MAX}")));
        }
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch {
                left: n,
                right: w.len(),
            });
        }
        words.sort();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::precondition(format!("duplicate codeword {}", pair[0])));
        }
        Ok(Code {
            n,
            words,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Parses a code file: one word per line, `#` comments, blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let w: Word = line
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            words.push(w);
        }
        let n = words
            .first()
            .map(Word::len)
            .ok_or_else(|| Error::Parse("code file contains no words".into()))?;
        Code::new(n, words, Provenance::File)
    }

    /// Renders in the code-file format with a one-line header comment.
    pub fn render(&self) -> String {
        let mut out = format!(
            "# {} code, n = {}, {} words\n",
            self.provenance,
            self.n,
            self.len()
        );
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    fn raw(&self) -> Vec<u64> {
        self.words.iter().map(Word::value).collect()
    }
}

impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Code::parse(s)
    }
}

/// `R_n`: for even `n`, words with `x_{i-1} = x_i` at every even `i`; for odd
/// `n`, a free first bit followed by `R_{n-1}`. Corrects any number of grains.
pub fn construct_rn(n: usize) -> Result<Code> {
    if n == 0 || n > N_MAX {
        return Err(Error::precondition(format!("length {n} outside 1..={N_MAX}")));
    }
    let pairs = n / 2;
    let free = n % 2;
    let words = (0..1u64 << (pairs + free))
        .map(|msg| {
            let mut v = 0u64;
            for k in 0..pairs {
                if msg >> k & 1 == 1 {
                    v |= 0b11 << (2 * k);
                }
            }
            if free == 1 {
                v |= (msg >> pairs & 1) << (n - 1);
            }
            Word::from_raw(n, v)
        })
        .collect();
    Code::new(n, words, Provenance::Rn)
}

/// `(0|H) ∪ (1|H)` with `H` the binary Hamming code of length `2^m - 1`,
/// giving `n = 2^m` and `2^n / n` words.
///
/// `H` has parity-check columns `1..2^m-1` in binary: position `i` of a
/// Hamming codeword (1-based) carries column `i`, parity sits at powers of
/// two, and message bits fill the other positions in increasing order.
pub fn construct_hamming_prefix(m: usize) -> Result<Code> {
    if !(2..=6).contains(&m) {
        return Err(Error::precondition(format!(
            "Hamming order m = {m} outside 2..=6"
        )));
    }
    let len = (1usize << m) - 1;
    let k = len - m;
    let n = len + 1;
    if k >= 32 {
        return Err(Error::precondition(format!(
            "2^{k} Hamming codewords cannot be listed"
        )));
    }
    let data_positions: Vec<usize> = (1..=len).filter(|i| !i.is_power_of_two()).collect();
    let mut words = Vec::with_capacity(2 << k);
    for msg in 0..1u64 << k {
        let mut bits = vec![0u8; len + 1];
        let mut syndrome = 0usize;
        for (b, &pos) in data_positions.iter().enumerate() {
            // most significant message bit goes to the first data position
            let bit = (msg >> (k - 1 - b) & 1) as u8;
            bits[pos] = bit;
            if bit == 1 {
                syndrome ^= pos;
            }
        }
        for r in 0..m {
            bits[1 << r] = (syndrome >> r & 1) as u8;
        }
        let mut v = 0u64;
        for &b in &bits[1..] {
            v = v << 1 | u64::from(b);
        }
        words.push(Word::from_raw(n, v));
        words.push(Word::from_raw(n, v | 1u64 << len));
    }
    Code::new(n, words, Provenance::HammingPrefix)
}

/// Greedy code for grains known at the receiver: scan candidates (numeric
/// order unless `order` is given) and keep one unless it differs from an
/// accepted word by a nonzero member of `E_{n,t}`.
pub fn construct_greedy_scenario1(
    n: usize,
    t: usize,
    order: Option<&[Word]>,
    caps: &Caps,
) -> Result<Code> {
    if n == 0 {
        return Err(Error::precondition("length must be positive"));
    }
    Error::check_cap("n (greedy construction)", n, caps.greedy_n)?;
    let masks = error_masks(n, t, caps)?;
    let size = 1usize << n;
    let candidates: Vec<u64> = match order {
        Some(order) => {
            if let Some(w) = order.iter().find(|w| w.len() != n) {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: w.len(),
                });
            }
            order.iter().map(Word::value).collect()
        }
        None => (0..size as u64).collect(),
    };
    let mut blocked = vec![false; size];
    let mut words = Vec::new();
    for c in candidates {
        if std::mem::replace(&mut blocked[c as usize], true) {
            continue;
        }
        words.push(Word::from_raw(n, c));
        for &e in &masks {
            blocked[(c ^ e) as usize] = true;
        }
    }
    Code::new(n, words, Provenance::GreedyS1)
}

/// True iff no two distinct codewords share a `t`-grain image.
pub fn verify_grain_correcting(code: &Code, t: usize, caps: &Caps) -> Result<bool> {
    let masks = error_masks(code.n, t, caps)?;
    let mut owner: HashMap<u64, usize> = HashMap::new();
    for (i, &c) in code.raw().iter().enumerate() {
        for y in images_raw(c, &masks) {
            if let Some(&j) = owner.get(&y) {
                if j != i {
                    return Ok(false);
                }
            }
            owner.insert(y, i);
        }
    }
    Ok(true)
}

/// True iff every word is a `t`-grain image of at most `list` codewords.
pub fn verify_list_decodable(code: &Code, t: usize, list: usize, caps: &Caps) -> Result<bool> {
    let masks = error_masks(code.n, t, caps)?;
    let mut hits: HashMap<u64, usize> = HashMap::new();
    for c in code.raw() {
        for y in images_raw(c, &masks) {
            let h = hits.entry(y).or_default();
            *h += 1;
            if *h > list {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff, for every fixed pattern in `E_{n,t}`, distinct codewords have
/// distinct images.
pub fn verify_known_grain(code: &Code, t: usize, caps: &Caps) -> Result<bool> {
    let masks = error_masks(code.n, t, caps)?;
    let raw = code.raw();
    Ok(masks.par_iter().all(|&e| {
        let mut seen = HashSet::with_capacity(raw.len());
        raw.iter().all(|&c| seen.insert(apply_mask(c, e)))
    }))
}

/// The codeword `c` with `apply_grains(c, e) = y`, for a receiver that knows `e`.
pub fn decode_known_grain(code: &Code, y: &Word, e: &ErrorVector) -> Result<Word> {
    if y.len() != code.n {
        return Err(Error::LengthMismatch {
            left: code.n,
            right: y.len(),
        });
    }
    if e.len() != code.n {
        return Err(Error::LengthMismatch {
            left: code.n,
            right: e.len(),
        });
    }
    let matches: Vec<&Word> = code
        .words
        .iter()
        .filter(|c| apply_mask(c.value(), e.mask()) == y.value())
        .collect();
    match matches.as_slice() {
        [] => Err(Error::NoMatch),
        [c] => Ok(**c),
        many => Err(Error::Ambiguous(many.len())),
    }
}

/// Message bits of an `R_n` codeword: the bits at even positions, which no
/// grain pattern alters when `n` is even.
pub fn decode_rn(y: &Word) -> Vec<u8> {
    y.even_positions()
}

/// Encodes `n/2` message bits into `R_n` (even `n`) by doubling each bit.
pub fn encode_rn(message: &[u8]) -> Result<Word> {
    let bits: Vec<u8> = message.iter().flat_map(|&b| [b, b]).collect();
    Word::from_bits(&bits)
}
