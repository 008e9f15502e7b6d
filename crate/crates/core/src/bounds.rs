//! Cardinality and rate bounds for grain-correcting codes.
//!
//! Integer-valued bounds are computed exactly with big integers or rationals;
//! asymptotic rate curves use `f64`. Rates are in bits per cell and the grain
//! budget is normalized as `tau = t / n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ChiEntry, REFERENCE_CHI_BOUNDS};
use crate::model::count_error_vectors;
use crate::table::{Cell, Table};

/// Largest `tau` for which the rate bound of [`prop2_upper_rate`] holds.
pub const PROP2_TAU_MAX: f64 = 0.0706;

/// `1/2 - sqrt(5)/10`: the largest `tau` for which `C(n-t, t)` dominates
/// `|E_{n,t}|`, which the scenario and list-decoding rates rely on.
pub fn dominant_term_tau_max() -> f64 {
    0.5 - 5f64.sqrt() / 10.0
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// Identifies a rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    GilbertVarshamov,
    Prop2Upper,
    Cor2Upper,
    RnLower,
    ListDecoding,
    ScenarioLower,
    ScenarioUpper,
}

/// One evaluated point of a rate bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub tau: f64,
    pub value: f64,
    pub kind: BoundKind,
    /// Range of `tau` on which the bound is valid.
    pub validity: &'static str,
}

/// Rate of codes meeting the Gilbert-Varshamov bound for minimum distance
/// `2t + 1`: `1 - h(2 tau)`, clamped at 0 beyond `tau = 1/4`.
pub fn gv_lower_rate(tau: f64) -> f64 {
    if tau >= 0.25 {
        0.0
    } else {
        (1.0 - h(2.0 * tau)).max(0.0)
    }
}

/// `h((1-x)/2) + ((1-x)/4) h(4 tau / (1-x)) - 1`; its smallest positive
/// zero is `x*(tau)`.
pub fn prop2_equation(tau: f64, x: f64) -> f64 {
    let r = 1.0 - x;
    h(r / 2.0) + r / 4.0 * h(4.0 * tau / r) - 1.0
}

/// Smallest positive root of [`prop2_equation`], located by scanning
/// `(0, 1 - 8 tau]` in steps of `1e-4` for the first sign change and then
/// bisecting.
pub fn prop2_xstar(tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau <= PROP2_TAU_MAX) {
        return Err(Error::precondition(format!(
            "tau = {tau} outside (0, {PROP2_TAU_MAX}]"
        )));
    }
    let f = |x: f64| prop2_equation(tau, x);
    let end = 1.0 - 8.0 * tau;
    let step = 1e-4;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    loop {
        let hi = (lo + step).min(end);
        let f_hi = f(hi);
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo > 0.0 && f_hi < 0.0 {
            return Ok(bisect(f, lo, hi));
        }
        if hi >= end {
            return Err(Error::precondition(format!(
                "no sign change in (0, {end}] for tau = {tau}"
            )));
        }
        lo = hi;
        f_lo = f_hi;
    }
}

/// Bisection on a bracket with `f(lo) > 0 > f(hi)`, run to machine precision.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Upper bound `h((1 - x*)/2)` on the asymptotic rate, valid for
/// `tau <= 0.0706`.
pub fn prop2_upper_rate(tau: f64) -> Result<f64> {
    let x = prop2_xstar(tau)?;
    Ok(h((1.0 - x) / 2.0))
}

/// The other branch of the minimax, `1 - ((1-x)/4) h(4 tau / (1-x))`; it
/// meets `h((1-x)/2)` at `x*`.
pub fn prop2_other_branch(tau: f64, x: f64) -> f64 {
    let r = 1.0 - x;
    1.0 - r / 4.0 * h(4.0 * tau / r)
}

fn ceil_ratio(r: &BigRational) -> BigUint {
    let (q, rem) = r.numer().div_rem(r.denom());
    let q = if rem.is_zero() { q } else { q + 1 };
    q.to_biguint().unwrap_or_default()
}

/// `(2^n / n^t)(t! 2^t + 2)`, rounded up.
///
/// This is the leading term of an asymptotic bound for fixed `t`; the
/// vanishing correction is dropped, so the value is a reference curve
/// rather than a certified bound at finite `n`. For `t = 0` it exceeds the
/// trivial `2^n` and carries no information.
pub fn thm1_upper(n: usize, t: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::precondition("length must be positive"));
    }
    let factorial: BigUint = (1..=t as u64).product();
    let factor = factorial * (BigUint::one() << t) + 2u32;
    let numer = (BigUint::one() << n) * factor;
    let denom = BigUint::from(n).pow(t as u32);
    Ok(ceil_ratio(&BigRational::new(numer.into(), denom.into())))
}

/// `chi^floor(t/s) * 2^(n - m floor(t/s))`, valid when `t/n <= s/m` and
/// `chi` bounds the clique-partition number of `G(m, s)`.
pub fn cor1_upper(n: usize, t: usize, m: usize, s: usize, chi: &BigUint) -> Result<BigUint> {
    if s == 0 || m == 0 {
        return Err(Error::precondition("m and s must be positive"));
    }
    if t * m > s * n {
        return Err(Error::precondition(format!(
            "t/n = {t}/{n} exceeds s/m = {s}/{m}"
        )));
    }
    let k = t / s;
    Ok(chi.pow(k as u32) << (n - m * k))
}

/// `1 - tau (m/s - log2(chi)/s)`, valid for `tau <= s/m`.
pub fn cor2_rate_upper(tau: f64, m: usize, s: usize, chi: f64) -> Result<f64> {
    if s == 0 || m == 0 {
        return Err(Error::precondition("m and s must be positive"));
    }
    if tau > s as f64 / m as f64 + 1e-12 {
        return Err(Error::precondition(format!(
            "tau = {tau} exceeds s/m = {s}/{m}"
        )));
    }
    Ok(1.0 - tau * (m as f64 / s as f64 - chi.log2() / s as f64))
}

/// Minimum of [`cor2_rate_upper`] over the admissible entries, or `None` if
/// no entry has `tau <= s/m`.
pub fn cor2_min(tau: f64, entries: &[ChiEntry]) -> Option<f64> {
    entries
        .iter()
        .filter_map(|e| cor2_rate_upper(tau, e.m, e.s, e.parts as f64).ok())
        .reduce(f64::min)
}

/// The published clique-partition bounds as table entries.
pub fn reference_chi_entries() -> Vec<ChiEntry> {
    REFERENCE_CHI_BOUNDS
        .iter()
        .map(|&(m, s, parts, _)| ChiEntry {
            m,
            s,
            parts: parts as usize,
        })
        .collect()
}

/// Smallest integer `k` with `k >= 2^(nL/(L+1)) / |E_{n,t}|`, a lower bound
/// on the size of list-`L` `t`-grain-correcting codes. Exact: `k |E|` is
/// compared with `2^(nL/(L+1))` after raising both to the power `L + 1`.
pub fn listdec_lower(n: usize, t: usize, list: usize) -> Result<BigUint> {
    if list == 0 {
        return Err(Error::precondition("list size must be positive"));
    }
    let e = count_error_vectors(n, t);
    let power = BigUint::one() << (n * list);
    let root = power.nth_root(list as u32 + 1);
    let target = if Pow::pow(&root, list as u32 + 1) == power {
        root
    } else {
        root + 1u32
    };
    Ok(target.div_ceil(&e))
}

/// `log2(2^(nL/(L+1)) / |E_{n,t}|)`.
pub fn listdec_lower_log2(n: usize, t: usize, list: usize) -> f64 {
    n as f64 * list as f64 / (list as f64 + 1.0) - biguint_log2(&count_error_vectors(n, t))
}

fn biguint_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().expect("finite").log2()
    } else {
        let shift = bits - 64;
        (v >> shift).to_f64().expect("finite").log2() + shift as f64
    }
}

/// `(1 - tau) h(tau / (1 - tau))`, the exponent of `|E_{n, tau n}|`.
fn error_set_exponent(tau: f64) -> f64 {
    (1.0 - tau) * h(tau / (1.0 - tau))
}

fn check_dominant(tau: f64) -> Result<()> {
    if !(0.0..=dominant_term_tau_max()).contains(&tau) {
        return Err(Error::precondition(format!(
            "tau = {tau} outside [0, {}]",
            dominant_term_tau_max()
        )));
    }
    Ok(())
}

/// `L/(L+1) - (1 - tau) h(tau/(1 - tau))`, clamped at 0.
pub fn listdec_rate(tau: f64, list: usize) -> Result<f64> {
    check_dominant(tau)?;
    if list == 0 {
        return Err(Error::precondition("list size must be positive"));
    }
    let l = list as f64;
    Ok((l / (l + 1.0) - error_set_exponent(tau)).max(0.0))
}

/// `2^n / |E_{n,t}|`: codes correcting `t` grains known to the receiver.
pub fn scenario1_lower(n: usize, t: usize) -> BigRational {
    BigRational::new(
        BigInt::from(BigUint::one() << n),
        BigInt::from(count_error_vectors(n, t)),
    )
}

/// `2^n / (2n |E_{n,t}|)`: grains known to the encoder only.
pub fn scenario2_lower(n: usize, t: usize) -> BigRational {
    scenario1_lower(n, t) / BigInt::from(2 * n)
}

/// Rounds a rational lower bound up to the integer it implies.
pub fn ceil_bound(r: &BigRational) -> BigUint {
    ceil_ratio(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioRates {
    pub lower: f64,
    pub upper: f64,
}

/// Rates for both known-grain scenarios: lower `max(1/2, 1 - (1-tau) h(tau/(1-tau)))`,
/// upper `1 - tau` (one bit lost per grain).
pub fn scenario_rates(tau: f64) -> Result<ScenarioRates> {
    check_dominant(tau)?;
    Ok(ScenarioRates {
        lower: (1.0 - error_set_exponent(tau)).max(0.5),
        upper: 1.0 - tau,
    })
}

/// Rate curves of the asymptotic-rate figure: Gilbert-Varshamov lower bound,
/// the bound of [`prop2_upper_rate`] where valid, the minimum over all
/// [`cor2_rate_upper`] lines from `entries`, and the rate 1/2 of `R_n`.
pub fn fig1_curves(tau_grid: &[f64], entries: &[ChiEntry]) -> Result<Table> {
    if let Some(&bad) = tau_grid.iter().find(|&&t| !(t > 0.0 && t <= 0.5)) {
        return Err(Error::precondition(format!("tau = {bad} outside (0, 1/2]")));
    }
    let rows: Vec<Vec<Cell>> = tau_grid
        .par_iter()
        .map(|&tau| {
            let prop2 = if tau <= PROP2_TAU_MAX {
                prop2_upper_rate(tau).ok()
            } else {
                None
            };
            vec![
                Cell::from(tau),
                Cell::from(gv_lower_rate(tau)),
                Cell::from(prop2),
                Cell::from(cor2_min(tau, entries)),
                Cell::from(0.5),
            ]
        })
        .collect();
    let mut table = Table::new(&["tau", "gv_lower", "prop2_upper", "cor2_min", "rn_lower"]);
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

/// The same curves as [`fig1_curves`] as tagged points.
pub fn rate_points(tau: f64, entries: &[ChiEntry]) -> Vec<RatePoint> {
    let mut out = vec![
        RatePoint {
            tau,
            value: gv_lower_rate(tau),
            kind: BoundKind::GilbertVarshamov,
            validity: "0 <= tau <= 1/4",
        },
        RatePoint {
            tau,
            value: 0.5,
            kind: BoundKind::RnLower,
            validity: "0 <= tau <= 1/2",
        },
    ];
    if let Ok(v) = prop2_upper_rate(tau) {
        out.push(RatePoint {
            tau,
            value: v,
            kind: BoundKind::Prop2Upper,
            validity: "0 < tau <= 0.0706",
        });
    }
    if let Some(v) = cor2_min(tau, entries) {
        out.push(RatePoint {
            tau,
            value: v,
            kind: BoundKind::Cor2Upper,
            validity: "tau <= s/m",
        });
    }
    if let Ok(r) = scenario_rates(tau) {
        out.push(RatePoint {
            tau,
            value: r.lower,
            kind: BoundKind::ScenarioLower,
            validity: "0 <= tau <= 0.2764",
        });
        out.push(RatePoint {
            tau,
            value: r.upper,
            kind: BoundKind::ScenarioUpper,
            validity: "0 <= tau <= 0.2764",
        });
    }
    if let Ok(v) = listdec_rate(tau, 1) {
        out.push(RatePoint {
            tau,
            value: v,
            kind: BoundKind::ListDecoding,
            validity: "0 <= tau <= 0.2764",
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::grid;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// First sign change of the defining equation on a uniform grid.
    fn grid_root(tau: f64, step: f64) -> f64 {
        let end = 1.0 - 8.0 * tau;
        let mut x = 0.0;
        while x < end {
            let next = (x + step).min(end);
            if prop2_equation(tau, next) <= 0.0 {
                return 0.5 * (x + next);
            }
            x = next;
        }
        panic!("no root");
    }

    #[test]
    fn entropy() {
        assert_eq!(h(0.0), 0.0);
        assert_eq!(h(1.0), 0.0);
        assert_eq!(h(0.5), 1.0);
        assert!(close(h(0.11), 0.4999159, 1e-6));
    }

    #[test]
    fn gv_values() {
        assert_eq!(gv_lower_rate(0.0), 1.0);
        assert_eq!(gv_lower_rate(0.25), 0.0);
        assert!(close(gv_lower_rate(0.05), 1.0 - h(0.1), 1e-15));
        assert_eq!(gv_lower_rate(0.4), 0.0);
    }

    #[test]
    fn prop2_root() {
        for tau in [0.001, 0.01, 0.03, 0.05, 0.0706] {
            let x = prop2_xstar(tau).unwrap();
            assert!(prop2_equation(tau, x).abs() <= 1e-9, "tau={tau}");
            assert!(close(x, grid_root(tau, 1e-6), 1e-5), "tau={tau}");
            let g = prop2_upper_rate(tau).unwrap();
            assert!(close(g, prop2_other_branch(tau, x), 1e-8));
            assert!(g < 1.0);
        }
        assert!(prop2_xstar(1e-6).unwrap() < 0.01);
        assert!(prop2_xstar(0.0).is_err());
        assert!(prop2_xstar(0.08).is_err());
    }

    #[test]
    fn prop2_matches_minimax_over_delta() {
        let tau = 0.05;
        let end = 1.0 - 8.0 * tau;
        let minimax = grid(1e-5, end, 1e-5)
            .into_iter()
            .map(|d| prop2_other_branch(tau, d).max(h((1.0 - d) / 2.0)))
            .fold(f64::INFINITY, f64::min);
        assert!(close(prop2_upper_rate(tau).unwrap(), minimax, 1e-4));
    }

    #[test]
    fn thm1_values() {
        for n in [4usize, 10, 33, 128] {
            let v = thm1_upper(n, 1).unwrap();
            let expected = BigRational::new(
                BigInt::from(BigUint::one() << (n + 2)),
                BigInt::from(n),
            );
            assert_eq!(v, ceil_ratio(&expected));
        }
        assert_eq!(thm1_upper(8, 2).unwrap(), BigUint::from(256u32 * 10 / 64));
        assert_eq!(thm1_upper(3, 0).unwrap(), BigUint::from(24u32));
    }

    #[test]
    fn cor1_values() {
        let chi = BigUint::from(2u32);
        assert_eq!(cor1_upper(4, 2, 2, 1, &chi).unwrap(), BigUint::from(4u32));
        assert_eq!(
            cor1_upper(10, 0, 2, 1, &chi).unwrap(),
            BigUint::from(1024u32)
        );
        assert!(cor1_upper(4, 3, 2, 1, &chi).is_err());
        let chi = BigUint::from(236u32);
        assert_eq!(
            cor1_upper(40, 4, 10, 1, &chi).unwrap(),
            BigUint::from(236u32).pow(4u32)
        );
        let big = cor1_upper(128, 12, 10, 1, &chi).unwrap();
        assert_eq!(big, BigUint::from(236u32).pow(12u32) << 8);
    }

    #[test]
    fn cor2_values() {
        let v = cor2_rate_upper(0.1, 16, 4, 662.0).unwrap();
        let coefficient = (1.0 - v) / 0.1;
        assert!(close(coefficient, 1.657, 5e-4));
        assert_eq!(cor2_rate_upper(0.0, 16, 4, 662.0).unwrap(), 1.0);
        assert!(close(cor2_rate_upper(0.2, 8, 2, 256.0).unwrap(), 1.0, 1e-15));
        assert!(cor2_rate_upper(0.3, 16, 4, 662.0).is_err());
        let entries = reference_chi_entries();
        for tau in grid(0.01, 0.5, 0.01) {
            let min = cor2_min(tau, &entries).unwrap();
            for e in &entries {
                if let Ok(v) = cor2_rate_upper(tau, e.m, e.s, e.parts as f64) {
                    assert!(min <= v);
                }
            }
        }
    }

    #[test]
    fn list_decoding() {
        assert_eq!(listdec_lower(10, 1, 1).unwrap(), BigUint::from(4u32));
        // 2^(20/3) / 10 = 10.159...
        assert_eq!(listdec_lower(10, 1, 2).unwrap(), BigUint::from(11u32));
        assert!(close(listdec_lower_log2(10, 1, 1), 5.0 - 10f64.log2(), 1e-12));
        assert!(close(listdec_rate(0.0, 1_000_000).unwrap(), 1.0, 1e-5));
        for tau in grid(0.0, 0.27, 0.01) {
            let rates: Vec<f64> = (1..6).map(|l| listdec_rate(tau, l).unwrap()).collect();
            assert!(rates.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(listdec_rate(0.3, 1).is_err());
    }

    #[test]
    fn binomial_peak_matches_threshold() {
        let n = 1000u64;
        let terms: Vec<f64> = (0..=n / 2)
            .map(|i| {
                (0..i)
                    .map(|j| ((n - i - j) as f64 / (j + 1) as f64).log2())
                    .sum::<f64>()
            })
            .collect();
        let argmax = terms
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0 as f64;
        let nf = n as f64;
        let predicted = (5.0 * nf + 3.0 - (5.0 * nf * nf + 10.0 * nf + 9.0).sqrt()) / 10.0;
        assert!((argmax - predicted).abs() <= 1.0);
        assert!(close(predicted / nf, dominant_term_tau_max(), 1e-3));
    }

    #[test]
    fn scenarios() {
        let s1 = scenario1_lower(5, 1);
        assert_eq!(s1, BigRational::new(32.into(), 5.into()));
        assert_eq!(ceil_bound(&s1), BigUint::from(7u32));
        for (n, t) in [(5, 1), (10, 2), (64, 7)] {
            assert_eq!(
                scenario2_lower(n, t),
                scenario1_lower(n, t) / BigInt::from(2 * n)
            );
        }
        let r = scenario_rates(0.0).unwrap();
        assert_eq!((r.lower, r.upper), (1.0, 1.0));
        let r = scenario_rates(0.25).unwrap();
        assert_eq!(r.lower, 0.5);
        assert!(scenario_rates(0.3).is_err());
    }

    #[test]
    fn fig1_table() {
        let entries = reference_chi_entries();
        let taus = grid(0.005, 0.5, 0.005);
        let t = fig1_curves(&taus, &entries).unwrap();
        assert_eq!(t.header, ["tau", "gv_lower", "prop2_upper", "cor2_min", "rn_lower"]);
        let gv = t.floats("gv_lower").unwrap();
        let cor2 = t.floats("cor2_min").unwrap();
        let prop2 = t.floats("prop2_upper").unwrap();
        for (i, &tau) in taus.iter().enumerate() {
            if tau <= 0.25 {
                assert!(gv[i].unwrap() <= cor2[i].unwrap(), "tau={tau}");
            }
            assert_eq!(prop2[i].is_some(), tau <= PROP2_TAU_MAX, "tau={tau}");
        }
        assert!(fig1_curves(&[0.0], &entries).is_err());
        assert!(rate_points(0.05, &entries).len() >= 6);
    }
}
