//! Seeded simulators for the grains and BINAEras channels.
//!
//! Randomness comes from ChaCha8 keyed by a 64-bit seed with a separate
//! stream per independent run, so batches split over threads reproduce the
//! same numbers on every platform.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ChannelSpec, InitialState};
use crate::word::Word;

/// Generator for `(seed, stream)`.
pub fn channel_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// BINAEras output symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ternary {
    Bit(u8),
    Erasure,
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ternary::Bit(b) => write!(f, "{b}"),
            Ternary::Erasure => f.write_str("e"),
        }
    }
}

pub fn render_ternary(y: &[Ternary]) -> String {
    y.iter().map(Ternary::to_string).collect()
}

fn draw_initial(initial: InitialState, p: f64, rng: &mut impl Rng) -> (u8, u8) {
    match initial {
        InitialState::Fixed { u0, x0 } => (u0, x0),
        InitialState::Stationary => {
            let x0 = rng.random_range(0..2u8);
            let u0 = rng.random_bool(p / (1.0 + p)) as u8;
            (u0, x0)
        }
    }
}

/// `u_1..u_n` and `x_0`, drawn from the channel's initial state.
pub fn draw_grain_indicators(n: usize, spec: &ChannelSpec, rng: &mut impl Rng) -> (Vec<u8>, u8) {
    let (mut prev, x0) = draw_initial(spec.initial, spec.p, rng);
    let u = (0..n)
        .map(|_| {
            prev = if prev == 1 { 0 } else { rng.random_bool(spec.p) as u8 };
            prev
        })
        .collect();
    (u, x0)
}

/// Grains-channel output for indicator sequence `u`: `y_i = x_{i-1}` where
/// `u_i = 1`, with `x_0` at the first cell.
pub fn grains_output(x: &[u8], u: &[u8], x0: u8) -> Vec<u8> {
    (0..x.len())
        .map(|i| match (u[i], i) {
            (0, _) => x[i],
            (_, 0) => x0,
            _ => x[i - 1],
        })
        .collect()
}

pub fn binaeras_output(x: &[u8], u: &[u8]) -> Vec<Ternary> {
    x.iter()
        .zip(u)
        .map(|(&b, &ui)| if ui == 1 { Ternary::Erasure } else { Ternary::Bit(b) })
        .collect()
}

/// Grains channel on a bit slice.
pub fn simulate_grains_bits(x: &[u8], spec: &ChannelSpec, rng: &mut impl Rng) -> Vec<u8> {
    let (u, x0) = draw_grain_indicators(x.len(), spec, rng);
    grains_output(x, &u, x0)
}

/// Grains channel on a word, stream 0 of `seed`.
pub fn simulate_grains(x: &Word, spec: &ChannelSpec, seed: u64) -> Word {
    let mut rng = channel_rng(seed, 0);
    let y = simulate_grains_bits(&x.bits(), spec, &mut rng);
    Word::from_bits(&y).expect("same length as the input")
}

pub fn simulate_binaeras_bits(x: &[u8], spec: &ChannelSpec, rng: &mut impl Rng) -> Vec<Ternary> {
    let (u, _) = draw_grain_indicators(x.len(), spec, rng);
    binaeras_output(x, &u)
}

/// BINAEras channel on a word, stream 0 of `seed`.
pub fn simulate_binaeras(x: &Word, spec: &ChannelSpec, seed: u64) -> Vec<Ternary> {
    let mut rng = channel_rng(seed, 0);
    simulate_binaeras_bits(&x.bits(), spec, &mut rng)
}

/// Replaces each erasure by the previous filled symbol (`y0` before the first).
pub fn cascade_fill(y: &[Ternary], y0: u8) -> Vec<u8> {
    let mut prev = y0;
    y.iter()
        .map(|s| {
            if let Ternary::Bit(b) = *s {
                prev = b;
            }
            prev
        })
        .collect()
}

/// Counts gathered from simulated runs with i.i.d. uniform input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimulationStats {
    pub symbols: u64,
    /// `transitions[a][b]`: steps with `u_{i-1} = a`, `u_i = b` (including `u_0 → u_1`).
    pub transitions: [[u64; 2]; 2],
    /// Positions with `z_i = y_i ⊕ x_i = 1`.
    pub errors: u64,
    /// Positions with `u_i = 1`, i.e. BINAEras erasures.
    pub erasures: u64,
    /// Adjacent erasure pairs; structurally zero.
    pub adjacent_erasures: u64,
}

impl SimulationStats {
    fn merge(mut self, o: SimulationStats) -> SimulationStats {
        self.symbols += o.symbols;
        for a in 0..2 {
            for b in 0..2 {
                self.transitions[a][b] += o.transitions[a][b];
            }
        }
        self.errors += o.errors;
        self.erasures += o.erasures;
        self.adjacent_erasures += o.adjacent_erasures;
        self
    }

    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.symbols as f64
    }

    pub fn erasure_rate(&self) -> f64 {
        self.erasures as f64 / self.symbols as f64
    }

    /// Empirical `P(u_i = 1 | u_{i-1} = 0)`.
    pub fn grain_frequency(&self) -> f64 {
        let t = self.transitions[0];
        t[1] as f64 / (t[0] + t[1]) as f64
    }
}

/// Input, indicators and outputs of one simulated block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRun {
    pub x: Vec<u8>,
    pub x0: u8,
    pub u0: u8,
    pub u: Vec<u8>,
    pub y: Vec<u8>,
}

impl SimulationRun {
    pub fn stats(&self) -> SimulationStats {
        let mut s = SimulationStats {
            symbols: self.x.len() as u64,
            ..Default::default()
        };
        let mut prev = self.u0;
        for (i, &ui) in self.u.iter().enumerate() {
            s.transitions[prev as usize][ui as usize] += 1;
            s.erasures += ui as u64;
            s.adjacent_erasures += (prev & ui & (i > 0) as u8) as u64;
            s.errors += (self.y[i] ^ self.x[i]) as u64;
            prev = ui;
        }
        s
    }
}

/// One block of `n` uniform input bits through the grains channel, drawn
/// from stream `stream` of `seed`.
pub fn simulate_run(n: usize, spec: &ChannelSpec, seed: u64, stream: u64) -> SimulationRun {
    let mut rng = channel_rng(seed, stream);
    let (u0, x0) = draw_initial(spec.initial, spec.p, &mut rng);
    let x: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
    let mut prev = u0;
    let u: Vec<u8> = (0..n)
        .map(|_| {
            prev = if prev == 1 { 0 } else { rng.random_bool(spec.p) as u8 };
            prev
        })
        .collect();
    let y = grains_output(&x, &u, x0);
    SimulationRun { x, x0, u0, u, y }
}

/// Statistics over `streams` independent blocks of length `n`, one stream
/// per block, run in parallel and merged in stream order.
pub fn simulate_batch(n: usize, spec: &ChannelSpec, seed: u64, streams: u64) -> SimulationStats {
    let parts: Vec<SimulationStats> = (0..streams)
        .into_par_iter()
        .map(|s| simulate_run(n, spec, seed, s).stats())
        .collect();
    parts.into_iter().fold(SimulationStats::default(), SimulationStats::merge)
}
