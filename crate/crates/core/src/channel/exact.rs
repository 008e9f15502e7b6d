//! Exact finite-`n` information quantities by exhaustive forward recursion.
//!
//! Every oracle walks a tree of output prefixes carrying the joint
//! probability of the prefix with the current hidden state. The entropy of
//! the length-`d` prefix is accumulated at every depth `d` in one pass.
//! Work is split over a fixed set of prefixes and merged in prefix order, so
//! sums are reproducible regardless of thread count.

use rayon::prelude::*;

use super::sim::{binaeras_output, cascade_fill};
use super::{check_p, plogp, stationary_u, InitialState, Sum};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::word::Word;

/// Depth at which the output tree is split into parallel tasks.
const SPLIT_DEPTH: usize = 6;

/// Conditional entropies `H(Y_d | Y^{d-1})` for `d = 1..=n` of a process
/// whose prefix probabilities are `sum(state)`, where `step(state, depth,
/// symbol)` advances the forward vector by one output symbol (`depth` is the
/// 1-based index of that symbol). Each term is accumulated from the parent's
/// probability and its children's directly, so no large entropies are
/// subtracted.
fn conditional_profile<const K: usize, F>(
    n: usize,
    init: [f64; K],
    alphabet: usize,
    step: &F,
) -> Vec<f64>
where
    F: Fn(&[f64; K], usize, usize) -> [f64; K] + Sync,
{
    let split = n.min(SPLIT_DEPTH);
    let mut sums = vec![Sum::default(); n];
    let mut frontier = vec![init];
    for d in 1..=split {
        let mut next = Vec::with_capacity(frontier.len() * alphabet);
        for state in &frontier {
            expand(state, d, alphabet, step, &mut sums[d - 1], |s| next.push(s));
        }
        frontier = next;
    }
    if split < n {
        let parts: Vec<Vec<Sum>> = frontier
            .par_iter()
            .map(|state| {
                let mut local = vec![Sum::default(); n];
                descend(state, split, alphabet, step, &mut local[split..]);
                local
            })
            .collect();
        for part in parts {
            for (total, s) in sums.iter_mut().zip(part).skip(split) {
                total.add(s.value());
            }
        }
    }
    sums.iter().map(Sum::value).collect()
}

/// Children of `state` at `depth`, adding `Σ -P(c) log2(P(c)/P(parent))` to `acc`.
fn expand<const K: usize, F>(
    state: &[f64; K],
    depth: usize,
    alphabet: usize,
    step: &F,
    acc: &mut Sum,
    mut visit: impl FnMut([f64; K]),
) where
    F: Fn(&[f64; K], usize, usize) -> [f64; K],
{
    let parent: f64 = state.iter().sum();
    for a in 0..alphabet {
        let s = step(state, depth, a);
        let prob: f64 = s.iter().sum();
        if prob > 0.0 {
            acc.add(parent * plogp(prob / parent));
            visit(s);
        }
    }
}

/// Depth-first expansion below `state` (a node at `depth`); `sums[k]`
/// collects the terms for symbol `depth + 1 + k`.
fn descend<const K: usize, F>(state: &[f64; K], depth: usize, alphabet: usize, step: &F, sums: &mut [Sum])
where
    F: Fn(&[f64; K], usize, usize) -> [f64; K],
{
    let (head, tail) = sums.split_first_mut().expect("nonempty level slice");
    expand(state, depth + 1, alphabet, step, head, |s| {
        if !tail.is_empty() {
            descend(&s, depth + 1, alphabet, step, tail);
        }
    });
}

fn check_n(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::precondition("block length must be positive"));
    }
    Error::check_cap(what, n, cap)
}

/// Forward step of the indicator chain, revealing `u_i`.
fn u_step(p: f64) -> impl Fn(&[f64; 2], usize, usize) -> [f64; 2] + Sync {
    move |a, _, u| match u {
        0 => [a[0] * (1.0 - p) + a[1], 0.0],
        _ => [0.0, a[0] * p],
    }
}

/// Forward step of the BINAEras output with uniform input; symbol 2 is the erasure.
fn binaeras_step(p: f64) -> impl Fn(&[f64; 2], usize, usize) -> [f64; 2] + Sync {
    move |a, _, y| match y {
        2 => [0.0, a[0] * p],
        _ => [0.5 * (a[0] * (1.0 - p) + a[1]), 0.0],
    }
}

/// `I(x^n; y^n | u_0)/n` for the BINAEras channel with i.i.d. uniform input
/// and stationary `u_0`, computed as `H(y^n|u_0) − H(u^n|u_0)`: the output
/// determines `u`, and given `u` the unerased input bits are the only
/// remaining uncertainty.
pub fn exact_mi_binaeras(n: usize, p: f64, caps: &Caps) -> Result<f64> {
    check_p(p)?;
    check_n(n, caps.channel_n, "channel block length")?;
    let mut total = Sum::default();
    for (u0, w) in stationary_u(p).into_iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut init = [0.0; 2];
        init[u0] = 1.0;
        let hy = conditional_profile(n, init, 3, &binaeras_step(p));
        let hu = conditional_profile(n, init, 2, &u_step(p));
        for (a, b) in hy.iter().zip(&hu) {
            total.add(w * (a - b));
        }
    }
    Ok(total.value() / n as f64)
}

/// Forward step of the grains-channel output with uniform input over the
/// state `(u_i, x_i)`, indexed `2u + x`.
fn grains_step(p: f64) -> impl Fn(&[f64; 4], usize, usize) -> [f64; 4] + Sync {
    move |a, _, y| {
        let b = y;
        let mut out = [0.0; 4];
        // u_i = 0: y_i = x_i = b.
        out[b] = 0.5 * ((a[0] + a[1]) * (1.0 - p) + a[2] + a[3]);
        // u_i = 1: y_i = x_{i-1} = b, previous u was 0; x_i is fresh.
        let g = 0.5 * a[b] * p;
        out[2] = g;
        out[3] = g;
        out
    }
}

fn stationary_state(p: f64) -> [f64; 4] {
    let pi = stationary_u(p);
    [pi[0] / 2.0, pi[0] / 2.0, pi[1] / 2.0, pi[1] / 2.0]
}

/// Conditional-entropy bracket on the output entropy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBracket {
    /// `H(y_n | y^{n-1}, s_0)`.
    pub lower: f64,
    /// `H(y_n | y^{n-1})`.
    pub upper: f64,
}

impl EntropyBracket {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Exact `H(y_n|y^{n-1})` and `H(y_n|y^{n-1},s_0)` for the grains channel
/// with i.i.d. uniform input and stationary `s_0`. The output entropy rate
/// lies between them for every `n`.
pub fn exact_hy_conditional(n: usize, p: f64, caps: &Caps) -> Result<EntropyBracket> {
    check_p(p)?;
    check_n(n, caps.channel_n, "channel block length")?;
    if n < 2 {
        return Err(Error::precondition("the bracket needs n >= 2"));
    }
    let step = grains_step(p);
    let last = |v: Vec<f64>| v[n - 1];
    let upper = last(conditional_profile(n, stationary_state(p), 2, &step));
    let mut lower = Sum::default();
    for (s0, w) in stationary_state(p).into_iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut init = [0.0; 4];
        init[s0] = 1.0;
        lower.add(w * last(conditional_profile(n, init, 2, &step)));
    }
    Ok(EntropyBracket {
        lower: lower.value(),
        upper,
    })
}

/// `Pr[y^i = 0^i]` for `i = 1..=n` under stationary start and uniform input.
pub fn prob_all_zero_output(n: usize, p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    let step = grains_step(p);
    let mut state = stationary_state(p);
    Ok((1..=n)
        .map(|i| {
            state = step(&state, i, 0);
            state.iter().sum()
        })
        .collect())
}

/// Increments `H(z^d|x^d) − H(z^{d-1}|x^{d-1}) = H(z_d | z^{d-1}, x^d)` for
/// `d = 1..=n`, where `z_i = u_i (x_i ⊕ x_{i-1})`, with
/// i.i.d. uniform `x`, uniform `x_0` and stationary `u_0`.
pub fn exact_hzx_increments(n: usize, p: f64, caps: &Caps) -> Result<Vec<f64>> {
    check_p(p)?;
    check_n(n, caps.hzx_n, "H(z|x) block length")?;
    let pi = stationary_u(p);
    let q1 = pi[0] * p;
    let init = [1.0 - q1, q1];
    // The law of z given x is invariant under complementing x (x_0 is
    // uniform), so only inputs starting with 0 are enumerated.
    let half = 1u64 << (n - 1);
    let profiles: Vec<Vec<f64>> = (0..half)
        .into_par_iter()
        .map(|v| {
            let x = Word::new(n, v).expect("fits").bits();
            let step = |a: &[f64; 2], i: usize, z: usize| -> [f64; 2] {
                if i == 1 {
                    // z_1 = u_1 (x_1 ⊕ x_0) with x_0 uniform.
                    return match z {
                        0 => [a[0], a[1] / 2.0],
                        _ => [0.0, a[1] / 2.0],
                    };
                }
                let stay = a[0] * (1.0 - p) + a[1];
                let grain = a[0] * p;
                match (x[i - 1] == x[i - 2], z) {
                    (true, 0) => [stay, grain],
                    (true, _) => [0.0, 0.0],
                    (false, 0) => [stay, 0.0],
                    (false, _) => [0.0, grain],
                }
            };
            let mut sums = vec![Sum::default(); n];
            descend(&init, 0, 2, &step, &mut sums);
            sums.iter().map(Sum::value).collect()
        })
        .collect();
    Ok((0..n)
        .map(|d| profiles.iter().map(|h| h[d]).collect::<Sum>().value() / half as f64)
        .collect())
}

/// `H(z^n | x^n)`.
pub fn exact_hzx(n: usize, p: f64, caps: &Caps) -> Result<f64> {
    Ok(exact_hzx_increments(n, p, caps)?.into_iter().collect::<Sum>().value())
}

fn initial_mixture(initial: &InitialState, p: f64) -> Vec<(f64, usize, u8)> {
    let ul = initial.u0_law(p);
    let xl = initial.x0_law();
    let mut out = Vec::new();
    for (u0, wu) in ul.into_iter().enumerate() {
        for (x0, wx) in xl.into_iter().enumerate() {
            if wu * wx > 0.0 {
                out.push((wu * wx, u0, x0 as u8));
            }
        }
    }
    out
}

/// Output law of the grains channel for input `x`, indexed by the packed
/// value of `y`, by forward recursion over `u`.
pub fn grains_output_law(x: &Word, p: f64, initial: &InitialState, caps: &Caps) -> Result<Vec<f64>> {
    check_p(p)?;
    let n = x.len();
    check_n(n, caps.channel_n, "channel block length")?;
    let bits = x.bits();
    let mut law = vec![0.0; 1 << n];
    for (w, u0, x0) in initial_mixture(initial, p) {
        let mut init = [0.0; 2];
        init[u0] = w;
        let prev = |i: usize| if i == 1 { x0 } else { bits[i - 2] };
        // Stack of (depth, packed prefix, forward vector over u).
        let mut stack = vec![(0usize, 0usize, init)];
        while let Some((d, y, a)) = stack.pop() {
            if d == n {
                law[y] += a[0] + a[1];
                continue;
            }
            let i = d + 1;
            for b in 0..2u8 {
                let stay = if bits[i - 1] == b { a[0] * (1.0 - p) + a[1] } else { 0.0 };
                let grain = if prev(i) == b { a[0] * p } else { 0.0 };
                if stay + grain > 0.0 {
                    stack.push((i, y << 1 | b as usize, [stay, grain]));
                }
            }
        }
    }
    Ok(law)
}

/// Law of `cascade_fill(BINAEras(x), x_0)` by enumerating every indicator
/// sequence `u` and filling its erasure pattern.
pub fn binaeras_cascade_law(x: &Word, p: f64, initial: &InitialState, caps: &Caps) -> Result<Vec<f64>> {
    check_p(p)?;
    let n = x.len();
    check_n(n, caps.channel_n, "channel block length")?;
    let bits = x.bits();
    let mut law = vec![0.0; 1 << n];
    for (w, u0, x0) in initial_mixture(initial, p) {
        let mut stack = vec![(Vec::with_capacity(n), u0 as u8, w)];
        while let Some((u, last, prob)) = stack.pop() {
            if u.len() == n {
                let y = cascade_fill(&binaeras_output(&bits, &u), x0);
                let idx = y.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                law[idx] += prob;
                continue;
            }
            let options: &[(u8, f64)] = if last == 1 { &[(0, 1.0)] } else { &[(0, 1.0 - p), (1, p)] };
            for &(ui, q) in options {
                if q > 0.0 {
                    let mut next = u.clone();
                    next.push(ui);
                    stack.push((next, ui, prob * q));
                }
            }
        }
    }
    Ok(law)
}

/// `½ Σ |a_i − b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "laws over different alphabets");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect::<Sum>().value() / 2.0
}
