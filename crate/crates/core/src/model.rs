//! The combinatorial grain-error model.
//!
//! A medium of `n` cells made of grains of length one and two acts on a word
//! by letting the first cell of every length-2 grain overwrite the second.
//! Such a pattern is described either by the start cells of its length-2
//! grains ([`GrainPattern`]) or by the cells that get overwritten
//! ([`ErrorVector`]); the two views differ by a shift of one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::word::{mask, offset, Word, N_MAX};

/// Indicator of the overwritten cells of a grain pattern.
///
/// Packed like [`Word`]: position 1 is the most significant of the `n` bits.
/// Position 1 is never set and no two set positions are adjacent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorVector {
    len: u8,
    mask: u64,
}

#[inline]
fn is_valid_error_mask(n: usize, m: u64) -> bool {
    m & !mask(n) == 0 && m & (1u64 << offset(n, 1)) == 0 && m & (m >> 1) == 0
}

#[allow(clippy::len_without_is_empty)]
impl ErrorVector {
    pub fn new(n: usize, support: &[usize]) -> Result<Self> {
        if n == 0 || n > N_MAX {
            return Err(Error::precondition(format!("length {n} outside 1..={N_MAX}")));
        }
        let mut m = 0u64;
        for &j in support {
            if j < 2 || j > n {
                return Err(Error::precondition(format!(
                    "error position {j} outside 2..={n}"
                )));
            }
            m |= 1u64 << offset(n, j);
        }
        if m.count_ones() as usize != support.len() || !is_valid_error_mask(n, m) {
            return Err(Error::precondition(format!(
                "support {support:?} has repeated or adjacent positions"
            )));
        }
        Ok(ErrorVector { len: n as u8, mask: m })
    }

    pub fn zero(n: usize) -> Result<Self> {
        ErrorVector::new(n, &[])
    }

    #[inline]
    pub(crate) fn from_mask(n: usize, m: u64) -> Self {
        debug_assert!(is_valid_error_mask(n, m));
        ErrorVector { len: n as u8, mask: m }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Sorted 1-based positions of the overwritten cells.
    pub fn support(&self) -> Vec<usize> {
        let n = self.len();
        (2..=n)
            .filter(|&j| self.mask >> offset(n, j) & 1 == 1)
            .collect()
    }

    /// The error vector viewed as a word (bit `j` set iff cell `j` is overwritten).
    pub fn as_word(&self) -> Word {
        Word::from_raw(self.len(), self.mask)
    }
}

impl fmt::Display for ErrorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support: Vec<String> = self.support().iter().map(|j| j.to_string()).collect();
        write!(f, "{}:{}", self.len(), support.join(","))
    }
}

impl fmt::Debug for ErrorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ErrorVector({self})")
    }
}

impl FromStr for ErrorVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `n:j1,j2,...`, got `{s}`")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad length in `{s}`")))?;
        let support = rest
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad position `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        ErrorVector::new(n, &support)
    }
}

/// Start cells of the length-2 grains of a medium.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrainPattern {
    len: usize,
    starts: Vec<usize>,
}

#[allow(clippy::len_without_is_empty)]
impl GrainPattern {
    pub fn new(n: usize, starts: &[usize]) -> Result<Self> {
        let mut sorted = starts.to_vec();
        sorted.sort_unstable();
        for &j in &sorted {
            if j < 1 || j + 1 > n {
                return Err(Error::precondition(format!(
                    "grain start {j} outside 1..={}",
                    n.saturating_sub(1)
                )));
            }
        }
        if sorted.windows(2).any(|w| w[1] - w[0] < 2) {
            return Err(Error::precondition(format!(
                "length-2 grains starting at {sorted:?} overlap"
            )));
        }
        Ok(GrainPattern { len: n, starts: sorted })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn error_vector(&self) -> ErrorVector {
        let support: Vec<usize> = self.starts.iter().map(|j| j + 1).collect();
        ErrorVector::new(self.len, &support).expect("grain pattern maps to a valid error vector")
    }
}

impl From<ErrorVector> for GrainPattern {
    fn from(e: ErrorVector) -> Self {
        GrainPattern {
            len: e.len(),
            starts: e.support().iter().map(|j| j - 1).collect(),
        }
    }
}

/// Overwrites every cell in the support of `m` with its left neighbour.
#[inline]
pub(crate) fn apply_mask(x: u64, m: u64) -> u64 {
    (x & !m) | ((x >> 1) & m)
}

/// Applies a grain pattern: `y_j = x_{j-1}` on the support of `e`, `y_j = x_j` elsewhere.
pub fn apply_grains(x: &Word, e: &ErrorVector) -> Result<Word> {
    if x.len() != e.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: e.len(),
        });
    }
    Ok(Word::from_raw(x.len(), apply_mask(x.value(), e.mask())))
}

/// Largest weight an error vector of length `n` can have.
pub fn max_error_weight(n: usize) -> usize {
    n / 2
}

/// Packed masks of all error vectors of length `n` and weight at most `t`,
/// in lexicographic order of their support lists.
pub(crate) fn error_masks(n: usize, t: usize, caps: &Caps) -> Result<Vec<u64>> {
    Error::check_cap("n (error-vector enumeration)", n, caps.error_vectors_n)?;
    Ok(error_masks_unchecked(n, t))
}

pub(crate) fn error_masks_unchecked(n: usize, t: usize) -> Vec<u64> {
    let t = t.min(max_error_weight(n));
    let mut out = Vec::new();
    fn rec(n: usize, t: usize, next: usize, cur: u64, weight: usize, out: &mut Vec<u64>) {
        out.push(cur);
        if weight == t {
            return;
        }
        for j in next..=n {
            rec(n, t, j + 2, cur | 1u64 << offset(n, j), weight + 1, out);
        }
    }
    rec(n, t, 2, 0, 0, &mut out);
    out
}

/// All error vectors of length `n` and weight at most `t` (`t` is clamped to
/// `n / 2`), in lexicographic order of their support lists.
pub fn enumerate_error_vectors(n: usize, t: usize, caps: &Caps) -> Result<Vec<ErrorVector>> {
    if n == 0 {
        return Err(Error::precondition("length must be positive"));
    }
    Ok(error_masks(n, t, caps)?
        .into_iter()
        .map(|m| ErrorVector::from_mask(n, m))
        .collect())
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `|E_{n,t}| = sum_{i=0}^{t} C(n-i, i)`, exactly.
pub fn count_error_vectors(n: usize, t: usize) -> BigUint {
    let n = n as u64;
    (0..=t as u64)
        .take_while(|&i| i <= n)
        .map(|i| binomial(n - i, i))
        .sum()
}

pub(crate) fn images_raw(x: u64, masks: &[u64]) -> Vec<u64> {
    let mut ys: Vec<u64> = masks.iter().map(|&m| apply_mask(x, m)).collect();
    ys.sort_unstable();
    ys.dedup();
    ys
}

/// Every word reachable from `x` with at most `t` length-2 grains.
pub fn phi_set(x: &Word, t: usize, caps: &Caps) -> Result<BTreeSet<Word>> {
    let masks = error_masks(x.len(), t, caps)?;
    Ok(images_raw(x.value(), &masks)
        .into_iter()
        .map(|y| Word::from_raw(x.len(), y))
        .collect())
}

/// Number of maximal runs of identical symbols.
pub fn run_count(x: &Word) -> usize {
    let n = x.len();
    let v = x.value();
    let changes = (v ^ (v >> 1)) & mask(n - 1);
    changes.count_ones() as usize + 1
}

/// `(x_1 ^ x_2, x_2 ^ x_3, ..., x_{n-1} ^ x_n)`.
pub fn derivative(x: &Word) -> Result<Word> {
    let n = x.len();
    if n < 2 {
        return Err(Error::precondition("derivative needs a word of length at least 2"));
    }
    let v = x.value();
    Ok(Word::from_raw(n - 1, (v ^ (v >> 1)) & mask(n - 1)))
}

/// True iff some pair of `t`-grain images of `x1` and `x2` coincide.
pub fn confusable(x1: &Word, x2: &Word, t: usize, caps: &Caps) -> Result<bool> {
    x1.ensure_same_len(x2)?;
    if x1.bit(1) != x2.bit(1) {
        return Ok(false);
    }
    let masks = error_masks(x1.len(), t, caps)?;
    Ok(confusable_raw(x1.value(), x2.value(), &masks))
}

pub(crate) fn confusable_raw(a: u64, b: u64, masks: &[u64]) -> bool {
    if a == b {
        return true;
    }
    let ia = images_raw(a, masks);
    let ib = images_raw(b, masks);
    let (mut i, mut j) = (0, 0);
    while i < ia.len() && j < ib.len() {
        match ia[i].cmp(&ib[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Worst-case lower bound on `|Phi_{n,t}(x)|` for a word with `r` runs:
/// `1 + sum_{i=1}^{t} (1/i!) prod_{j=0}^{i-1} (r - 1 - 3j)`, where a term with
/// a non-positive factor contributes nothing. The sum is rational; since the
/// set size is an integer, its ceiling is returned.
pub fn phi_lower_bound(r: usize, t: usize) -> BigUint {
    let r = r.max(1) as i64;
    let mut total = BigRational::one();
    let mut factorial = BigUint::one();
    for i in 1..=t as i64 {
        factorial *= i as u64;
        let factors: Vec<i64> = (0..i).map(|j| r - 1 - 3 * j).collect();
        if factors.iter().any(|&f| f <= 0) {
            break;
        }
        let prod: BigUint = factors.iter().map(|&f| BigUint::from(f as u64)).product();
        total += BigRational::new(prod.into(), factorial.clone().into());
    }
    let (q, r) = total.numer().div_rem(total.denom());
    let q = q.to_biguint().expect("bound is positive");
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// Inverse images `Phi^{-1}_{m,s}(y) = {x : y in Phi_{m,s}(x)}` for every `y`,
/// stored compactly. Each member list is sorted.
#[derive(Debug, Clone)]
pub struct InverseImages {
    m: usize,
    s: usize,
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl InverseImages {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub(crate) fn raw(&self, y: u64) -> &[u32] {
        let y = y as usize;
        &self.members[self.offsets[y]..self.offsets[y + 1]]
    }

    /// Members of `Phi^{-1}(y)` in increasing order.
    pub fn of(&self, y: &Word) -> Vec<Word> {
        assert_eq!(y.len(), self.m, "word length does not match");
        self.raw(y.value())
            .iter()
            .map(|&x| Word::from_raw(self.m, u64::from(x)))
            .collect()
    }

    /// Total number of (y, x) incidences.
    pub fn total(&self) -> usize {
        self.members.len()
    }
}

/// Computes `Phi^{-1}_{m,s}(y)` for all `y` in `{0,1}^m`.
pub fn phi_inverse_sets(m: usize, s: usize, caps: &Caps) -> Result<InverseImages> {
    if m == 0 {
        return Err(Error::precondition("length must be positive"));
    }
    Error::check_cap("m (inverse images)", m, caps.phi_inverse_m)?;
    let masks = error_masks(m, s, caps)?;
    let size = 1usize << m;
    let mut counts = vec![0usize; size + 1];
    for x in 0..size as u64 {
        for y in images_raw(x, &masks) {
            counts[y as usize + 1] += 1;
        }
    }
    for i in 0..size {
        counts[i + 1] += counts[i];
    }
    let offsets = counts;
    let mut fill = offsets.clone();
    let mut members = vec![0u32; offsets[size]];
    for x in 0..size as u64 {
        for y in images_raw(x, &masks) {
            members[fill[y as usize]] = x as u32;
            fill[y as usize] += 1;
        }
    }
    Ok(InverseImages {
        m,
        s,
        offsets,
        members,
    })
}

/// Exact value of `count_error_vectors` as `u64`, when it fits.
pub fn count_error_vectors_u64(n: usize, t: usize) -> Option<u64> {
    count_error_vectors(n, t).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn worked_examples() {
        let e: ErrorVector = GrainPattern::new(15, &[3, 6, 8, 13]).unwrap().error_vector();
        assert_eq!(e.support(), vec![4, 7, 9, 14]);
        assert_eq!(
            apply_grains(&w("100001000010000"), &e).unwrap(),
            w("100001100010000")
        );
        assert_eq!(
            apply_grains(&w("000101011100010"), &e).unwrap(),
            w("000001111100000")
        );
        let zeros = Word::zeros(15).unwrap();
        assert_eq!(apply_grains(&zeros, &e).unwrap(), zeros);
    }

    #[test]
    fn apply_rejects_length_mismatch() {
        let e = ErrorVector::new(4, &[2]).unwrap();
        assert!(matches!(
            apply_grains(&w("010"), &e),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn error_vector_validation() {
        assert!(ErrorVector::new(5, &[1]).is_err());
        assert!(ErrorVector::new(5, &[2, 3]).is_err());
        assert!(ErrorVector::new(5, &[6]).is_err());
        assert!(ErrorVector::new(5, &[2, 2]).is_err());
        assert!(GrainPattern::new(5, &[2, 3]).is_err());
        assert!(GrainPattern::new(5, &[5]).is_err());
        let e: ErrorVector = "7:2,5,7".parse().unwrap();
        assert_eq!(e.to_string(), "7:2,5,7");
        assert_eq!(GrainPattern::from(e).starts(), &[1, 4, 6]);
        assert_eq!("4:".parse::<ErrorVector>().unwrap().weight(), 0);
        assert!("4-2".parse::<ErrorVector>().is_err());
    }

    #[test]
    fn enumerate_small() {
        let list = enumerate_error_vectors(5, 2, &caps()).unwrap();
        let supports: Vec<Vec<usize>> = list.iter().map(|e| e.support()).collect();
        assert_eq!(
            supports,
            vec![
                vec![],
                vec![2],
                vec![2, 4],
                vec![2, 5],
                vec![3],
                vec![3, 5],
                vec![4],
                vec![5],
            ]
        );
        assert_eq!(enumerate_error_vectors(5, 0, &caps()).unwrap().len(), 1);
        // t above n/2 is clamped
        assert_eq!(enumerate_error_vectors(5, 9, &caps()).unwrap().len(), 8);
        assert!(matches!(
            enumerate_error_vectors(25, 1, &caps()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn counts() {
        assert_eq!(count_error_vectors(5, 2), BigUint::from(8u32));
        assert_eq!(count_error_vectors(9, 0), BigUint::from(1u32));
        assert_eq!(count_error_vectors(4, 1), BigUint::from(4u32));
        for n in 1..=20 {
            for t in 0..=6 {
                assert_eq!(
                    count_error_vectors(n, t),
                    BigUint::from(enumerate_error_vectors(n, t, &caps()).unwrap().len()),
                    "n={n} t={t}"
                );
            }
        }
        // saturated count is a Fibonacci number: F(n+1) with F(1)=F(2)=1
        assert_eq!(count_error_vectors(14, 7), BigUint::from(610u32));
    }

    #[test]
    fn phi_examples() {
        let set = phi_set(&w("01"), 1, &caps()).unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![w("00"), w("01")]);
        let set = phi_set(&w("0000"), 2, &caps()).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn runs_and_derivative() {
        assert_eq!(run_count(&w("00110")), 3);
        assert_eq!(run_count(&w("0000")), 1);
        assert_eq!(run_count(&w("0101")), 4);
        assert_eq!(run_count(&w("1")), 1);
        assert_eq!(derivative(&w("0011")).unwrap(), w("010"));
        assert_eq!(derivative(&w("0000")).unwrap(), w("000"));
        assert_eq!(derivative(&w("0101")).unwrap().weight() + 1, 4);
        assert!(derivative(&w("1")).is_err());
    }

    #[test]
    fn derivative_has_two_preimages() {
        for n in 2..=8 {
            let mut seen = std::collections::HashMap::new();
            for x in Word::all(n) {
                *seen.entry(derivative(&x).unwrap()).or_insert(0) += 1;
            }
            assert_eq!(seen.len(), 1 << (n - 1));
            assert!(seen.values().all(|&c| c == 2));
        }
    }

    #[test]
    fn confusability_examples() {
        assert!(confusable(&w("01"), &w("00"), 1, &caps()).unwrap());
        for t in 0..4 {
            assert!(!confusable(&w("00"), &w("11"), t, &caps()).unwrap());
        }
        assert!(confusable(&w("0110"), &w("0110"), 0, &caps()).unwrap());
        assert!(confusable(&w("01"), &w("011"), 1, &caps()).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        for r in 1..20 {
            assert_eq!(phi_lower_bound(r, 1), BigUint::from(r));
        }
        for t in 0..5 {
            assert_eq!(phi_lower_bound(1, t), BigUint::one());
        }
        // r - 1 = 7, t = 3: 1 + 7 + 7*4/2 + 7*4*1/6 = 26.67 -> 27
        assert_eq!(phi_lower_bound(8, 3), BigUint::from(27u32));
    }

    #[test]
    fn lemma_bound_holds_exhaustively() {
        for n in 1..=12 {
            for t in 0..=3 {
                let masks = error_masks(n, t, &caps()).unwrap();
                for x in Word::all(n) {
                    let size = images_raw(x.value(), &masks).len();
                    assert!(
                        phi_lower_bound(run_count(&x), t) <= BigUint::from(size),
                        "x={x} t={t}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_grain_image_count_is_run_count() {
        for n in 1..=12 {
            let masks = error_masks(n, 1, &caps()).unwrap();
            for x in Word::all(n) {
                assert_eq!(images_raw(x.value(), &masks).len(), run_count(&x));
            }
        }
    }

    #[test]
    fn inverse_images() {
        let inv = phi_inverse_sets(2, 1, &caps()).unwrap();
        assert_eq!(inv.of(&w("00")), vec![w("00"), w("01")]);
        let inv0 = phi_inverse_sets(2, 0, &caps()).unwrap();
        for y in Word::all(2) {
            assert_eq!(inv0.of(&y), vec![y]);
        }
        for (m, s) in [(5, 1), (6, 2), (7, 3)] {
            let inv = phi_inverse_sets(m, s, &caps()).unwrap();
            let forward: usize = Word::all(m)
                .map(|x| phi_set(&x, s, &caps()).unwrap().len())
                .sum();
            assert_eq!(inv.total(), forward);
            let mut covered = vec![false; 1 << m];
            for y in Word::all(m) {
                for x in inv.of(&y) {
                    covered[x.value() as usize] = true;
                    assert!(phi_set(&x, s, &caps()).unwrap().contains(&y));
                }
            }
            assert!(covered.iter().all(|&c| c));
        }
        assert!(phi_inverse_sets(17, 1, &caps()).is_err());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        (1usize..=20).prop_flat_map(|n| {
            (Just(n), 0u64..(1u64 << n)).prop_map(|(n, v)| Word::new(n, v).unwrap())
        })
    }

    fn word_and_error() -> impl Strategy<Value = (Word, ErrorVector)> {
        word_strategy().prop_flat_map(|x| {
            let n = x.len();
            let masks = error_masks(n, n, &Caps::default()).unwrap();
            (Just(x), 0..masks.len()).prop_map(move |(x, i)| (x, ErrorVector::from_mask(n, masks[i])))
        })
    }

    proptest! {
        #[test]
        fn idempotent((x, e) in word_and_error()) {
            let y = apply_grains(&x, &e).unwrap();
            prop_assert_eq!(apply_grains(&y, &e).unwrap(), y);
        }

        #[test]
        fn first_bit_preserved((x, e) in word_and_error()) {
            prop_assert_eq!(apply_grains(&x, &e).unwrap().bit(1), x.bit(1));
        }

        #[test]
        fn complement_equivariant((x, e) in word_and_error()) {
            prop_assert_eq!(
                apply_grains(&x.complement(), &e).unwrap(),
                apply_grains(&x, &e).unwrap().complement()
            );
        }

        #[test]
        fn phi_monotone_in_t(x in word_strategy(), t in 0usize..4) {
            let small = phi_set(&x, t, &Caps::default()).unwrap();
            let big = phi_set(&x, t + 1, &Caps::default()).unwrap();
            prop_assert!(small.is_subset(&big));
        }

        #[test]
        fn runs_from_derivative(x in word_strategy()) {
            prop_assume!(x.len() >= 2);
            prop_assert_eq!(run_count(&x), derivative(&x).unwrap().weight() as usize + 1);
        }

        #[test]
        fn confusable_symmetric(a in 0u64..256, b in 0u64..256, t in 0usize..4) {
            let (a, b) = (Word::new(8, a).unwrap(), Word::new(8, b).unwrap());
            let caps = Caps::default();
            prop_assert_eq!(confusable(&a, &b, t, &caps).unwrap(), confusable(&b, &a, t, &caps).unwrap());
        }
    }
}
