//! The grains channel and the BINAEras channel.
//!
//! Both are driven by a Markov chain `u` on `{0,1}` with `P(1 | 0) = p` and
//! `P(0 | 1) = 1`, so a 1 (the end of a length-2 grain, or an erasure) is
//! never followed by another 1. The grains channel outputs `y_i = x_i` when
//! `u_i = 0` and `y_i = x_{i-1}` when `u_i = 1`; the BINAEras channel outputs
//! an erasure instead.

mod exact;
mod series;
mod sim;

pub use exact::*;
pub use series::*;
pub use sim::*;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Default series depth; the truncation error is far below `1e-9` at this depth.
pub const DEFAULT_J: usize = 64;

/// State of the channel before the first input symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// `u_0` from the stationary law `(1/(1+p), p/(1+p))`, `x_0` uniform.
    Stationary,
    /// Fixed `(u_0, x_0)`. `u_0 = 1` models a medium in which no grain ends at
    /// the first cell.
    Fixed { u0: u8, x0: u8 },
}

impl InitialState {
    /// Law of `u_0`.
    pub fn u0_law(&self, p: f64) -> [f64; 2] {
        match *self {
            InitialState::Stationary => stationary_u(p),
            InitialState::Fixed { u0: 0, .. } => [1.0, 0.0],
            InitialState::Fixed { .. } => [0.0, 1.0],
        }
    }

    /// Law of `x_0`.
    pub fn x0_law(&self) -> [f64; 2] {
        match *self {
            InitialState::Stationary => [0.5, 0.5],
            InitialState::Fixed { x0: 0, .. } => [1.0, 0.0],
            InitialState::Fixed { .. } => [0.0, 1.0],
        }
    }

    /// Whether a grain can end at the first cell, i.e. `P(u_1 = 1) > 0`.
    pub fn first_grain_possible(&self, p: f64) -> bool {
        p > 0.0 && self.u0_law(p)[0] > 0.0
    }
}

/// Whether a grain may end at the first cell; this alone fixes the
/// zero-error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    /// `P(u_1 = 1) > 0`.
    GrainAtStart,
    /// `P(u_1 = 1) = 0`, e.g. `u_0 = 1`.
    NoGrainAtStart,
}

impl InitialKind {
    pub fn of(initial: &InitialState, p: f64) -> Self {
        if initial.first_grain_possible(p) {
            InitialKind::GrainAtStart
        } else {
            InitialKind::NoGrainAtStart
        }
    }
}

/// Largest rate `log2|C|/n` of a length-`n` code that is decoded without
/// error under every grain pattern (`p > 0`): `⌊n/2⌋/n`, or `⌈n/2⌉/n` when no
/// grain can end at the first cell.
pub fn zero_error_rate(n: usize, kind: InitialKind) -> Result<Ratio<u64>> {
    if n == 0 {
        return Err(Error::precondition("block length must be positive"));
    }
    let bits = match kind {
        InitialKind::GrainAtStart => n / 2,
        InitialKind::NoGrainAtStart => n.div_ceil(2),
    };
    Ok(Ratio::new(bits as u64, n as u64))
}

/// Channel parameters: grain probability, initial state and series depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub p: f64,
    pub initial: InitialState,
    pub j: usize,
}

impl ChannelSpec {
    pub fn new(p: f64, initial: InitialState, j: usize) -> Result<Self> {
        check_p(p)?;
        if j < 2 {
            return Err(Error::precondition(format!("series depth J = {j} must be at least 2")));
        }
        if let InitialState::Fixed { u0, x0 } = initial {
            if u0 > 1 || x0 > 1 {
                return Err(Error::precondition("initial state entries must be bits"));
            }
        }
        Ok(ChannelSpec { p, initial, j })
    }

    /// Stationary start and the default depth.
    pub fn stationary(p: f64) -> Result<Self> {
        ChannelSpec::new(p, InitialState::Stationary, DEFAULT_J)
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `P(u_i = b | u_{i-1} = a)` as `[[P(0|0), P(1|0)], [P(0|1), P(1|1)]]`.
pub fn u_transition(p: f64) -> [[f64; 2]; 2] {
    [[1.0 - p, p], [1.0, 0.0]]
}

/// Stationary law of `u`: `(1/(1+p), p/(1+p))`.
pub fn stationary_u(p: f64) -> [f64; 2] {
    [1.0 / (1.0 + p), p / (1.0 + p)]
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Sum {
    sum: f64,
    compensation: f64,
}

impl Sum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for Sum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// `-q log2 q`, zero at `q = 0`.
#[inline]
pub(crate) fn plogp(q: f64) -> f64 {
    if q > 0.0 {
        -q * q.log2()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(ChannelSpec::stationary(0.3).is_ok());
        assert!(ChannelSpec::stationary(1.5).is_err());
        assert!(ChannelSpec::new(0.3, InitialState::Stationary, 1).is_err());
        assert!(ChannelSpec::new(0.3, InitialState::Fixed { u0: 2, x0: 0 }, 8).is_err());
        let w = stationary_u(0.4);
        assert!((w[0] + w[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stationary_law_is_invariant() {
        for p in [0.0, 0.2, 0.7, 1.0] {
            let pi = stationary_u(p);
            let t = u_transition(p);
            for b in 0..2 {
                let next = pi[0] * t[0][b] + pi[1] * t[1][b];
                assert!((next - pi[b]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn first_grain() {
        assert!(InitialState::Stationary.first_grain_possible(0.5));
        assert!(!InitialState::Stationary.first_grain_possible(0.0));
        assert!(!InitialState::Fixed { u0: 1, x0: 0 }.first_grain_possible(0.5));
        assert!(InitialState::Fixed { u0: 0, x0: 1 }.first_grain_possible(0.5));
    }

    #[test]
    fn zero_error_rates() {
        use InitialKind::*;
        assert_eq!(zero_error_rate(7, GrainAtStart).unwrap(), Ratio::new(3, 7));
        assert_eq!(zero_error_rate(7, NoGrainAtStart).unwrap(), Ratio::new(4, 7));
        assert_eq!(zero_error_rate(8, GrainAtStart).unwrap(), Ratio::new(1, 2));
        assert_eq!(zero_error_rate(8, NoGrainAtStart).unwrap(), Ratio::new(1, 2));
        assert!(zero_error_rate(0, GrainAtStart).is_err());
        assert_eq!(InitialKind::of(&InitialState::Fixed { u0: 1, x0: 0 }, 0.3), NoGrainAtStart);
    }

    #[test]
    fn compensated_sum() {
        let mut s = Sum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }
}
