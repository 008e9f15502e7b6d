//! The symmetric information rate of the grains channel as a pair of
//! convergent series: `T_J` for the output entropy rate and `S_J` for the
//! limit of `H(z^n|x^n)/n`.

use super::{check_p, Sum};
use crate::bounds::h;
use crate::error::{Error, Result};
use crate::table::{Cell, Table};

fn check_depth(j: usize) -> Result<()> {
    if j < 2 {
        return Err(Error::precondition(format!("series depth J = {j} must be at least 2")));
    }
    Ok(())
}

/// `β_2..β_J` and `γ_j = 1 - 2β_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSequence {
    pub p: f64,
    /// `values[k]` is `β_{k+2}`.
    pub values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    /// Largest deviation between the closed form and the recursion over the
    /// indices where the closed form is usable; `None` if it never was.
    pub closed_form_max_deviation: Option<f64>,
}

impl BetaSequence {
    pub fn beta(&self, j: usize) -> f64 {
        self.values[j - 2]
    }

    pub fn gamma(&self, j: usize) -> f64 {
        self.gamma_values[j - 2]
    }

    pub fn depth(&self) -> usize {
        self.values.len() + 1
    }
}

/// `β_{j+1} = ½(1 - (1+p)β_j) / (1 - β_j)` from `β_2 = (1-p)/2`.
pub fn beta_sequence(p: f64, j: usize) -> Result<BetaSequence> {
    check_p(p)?;
    check_depth(j)?;
    let mut values = Vec::with_capacity(j - 1);
    let mut beta = (1.0 - p) / 2.0;
    values.push(beta);
    for _ in 3..=j {
        beta = 0.5 * (1.0 - (1.0 + p) * beta) / (1.0 - beta);
        values.push(beta);
    }
    let gamma_values = values.iter().map(|b| 1.0 - 2.0 * b).collect();
    let closed_form_max_deviation = (2..=j)
        .filter_map(|k| beta_closed_form(p, k).map(|c| (c - values[k - 2]).abs()))
        .reduce(f64::max);
    Ok(BetaSequence {
        p,
        values,
        gamma_values,
        closed_form_max_deviation,
    })
}

/// Magnitude below which the closed form's denominator is considered degenerate.
pub const CLOSED_FORM_MIN_DENOMINATOR: f64 = 1e-8;

/// Closed form `β_j = 2(θ₋^j − θ₊^j) / ((3+B+p)θ₋^j − (3−B+p)θ₊^j)` with
/// `B = √(p²+6p+1)` and `θ± = 1 − (1∓B)/p`.
///
/// Evaluated after dividing through by `θ₋^j` (`|θ₊/θ₋| < 1`), which keeps
/// the powers bounded. Returns `None` at `p = 0`, where `θ±` are undefined,
/// and when the scaled denominator falls below [`CLOSED_FORM_MIN_DENOMINATOR`].
pub fn beta_closed_form(p: f64, j: usize) -> Option<f64> {
    if p <= 0.0 || j < 2 {
        return None;
    }
    let b = (p * p + 6.0 * p + 1.0).sqrt();
    let theta_plus = 1.0 - (1.0 - b) / p;
    let theta_minus = 1.0 - (1.0 + b) / p;
    let r = (theta_plus / theta_minus).powi(j as i32);
    let den = (3.0 + b + p) - (3.0 - b + p) * r;
    if den.abs() < CLOSED_FORM_MIN_DENOMINATOR {
        return None;
    }
    Some(2.0 * (1.0 - r) / den)
}

/// `(-p)^j` with the sign taken from the parity of `j`.
pub(crate) fn neg_pow(p: f64, j: usize) -> f64 {
    let mag = p.powi(j as i32);
    if j % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// `Pr(u_j = 0 | u_1 = 0) = (1 − (−p)^j) / (1 + p)`.
pub fn u_zero_given_zero(p: f64, j: usize) -> f64 {
    (1.0 - neg_pow(p, j)) / (1.0 + p)
}

fn t_from_betas(p: f64, seq: &BetaSequence) -> f64 {
    let mut sum = Sum::default();
    let mut prod = 1.0;
    for &beta in &seq.values {
        sum.add(h(beta) * prod);
        prod *= 1.0 - beta;
    }
    sum.value() / (2.0 * (1.0 + p))
}

/// `T_J = (1/(2(1+p))) Σ_{j=2}^{J} h(β_j) Π_{k=2}^{j-1} (1 − β_k)`.
pub fn hy_series(p: f64, j: usize) -> Result<f64> {
    let seq = beta_sequence(p, j)?;
    Ok(t_from_betas(p, &seq))
}

/// `S_J = ((1+p/2)/(1+p)) Σ_{j=2}^{J} 2^{-j} h((1 − (−p)^j)/(1+p))`.
pub fn hzx_series(p: f64, j: usize) -> Result<f64> {
    check_p(p)?;
    check_depth(j)?;
    let sum: Sum = (2..=j)
        .map(|k| 0.5f64.powi(k as i32) * h(u_zero_given_zero(p, k)))
        .collect();
    Ok((1.0 + p / 2.0) / (1.0 + p) * sum.value())
}

/// Truncation error bound `(1/(1+p))[(1+p/2)2^{-J} + 2^{-⌊(J+1)/2⌋}]` as
/// stated for the SIR series.
pub fn truncation_error(p: f64, j: usize) -> Result<f64> {
    check_p(p)?;
    check_depth(j)?;
    Ok(((1.0 + p / 2.0) * 0.5f64.powi(j as i32) + 0.5f64.powi(j.div_ceil(2) as i32)) / (1.0 + p))
}

/// The `p`-free majorant `2^{-J} + 2^{-⌊(J+1)/2⌋}` of [`truncation_error`].
pub fn truncation_error_uniform(j: usize) -> f64 {
    0.5f64.powi(j as i32) + 0.5f64.powi(j.div_ceil(2) as i32)
}

/// A truncation bound that holds: the `T` tail is
/// `(1/(2(1+p))) Σ_{j>J} h(β_j) Π(1−β_k)` with `Π_{k=2}^{j-1}(1−β_k) ≤ (½)^{⌊j/2⌋-1}`,
/// and summing that over `j > J` gives `4·2^{-⌊(J+1)/2⌋}/(1+p)`, four times the
/// second term of [`truncation_error`].
pub fn rigorous_truncation_error(p: f64, j: usize) -> Result<f64> {
    check_p(p)?;
    check_depth(j)?;
    Ok(((1.0 + p / 2.0) * 0.5f64.powi(j as i32) + 4.0 * 0.5f64.powi(j.div_ceil(2) as i32)) / (1.0 + p))
}

/// BINAEras capacity `1/(1+p)`, an upper bound on the grains-channel capacity.
pub fn binaeras_capacity(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(1.0 / (1.0 + p))
}

/// Shown next to [`nonadjacent_error_capacity`] wherever it is printed.
pub const NONADJACENT_NOTE: &str = "not a valid grains-channel bound";

/// `1 − h(p)/(1+p)`: the capacity of a channel with non-adjacent additive
/// errors. It is not a lower bound on the grains-channel capacity.
pub fn nonadjacent_error_capacity(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(1.0 - h(p) / (1.0 + p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirResult {
    pub p: f64,
    pub j: usize,
    pub t_j: f64,
    pub s_j: f64,
    pub sir: f64,
    pub error_bound: f64,
    pub rigorous_error_bound: f64,
    pub capacity_lower: f64,
    pub capacity_upper: f64,
}

/// `sir = T_J − S_J`, with `max(1/2, sir)` as the capacity lower bound.
pub fn sir(p: f64, j: usize) -> Result<SirResult> {
    let t_j = hy_series(p, j)?;
    let s_j = hzx_series(p, j)?;
    let sir = t_j - s_j;
    Ok(SirResult {
        p,
        j,
        t_j,
        s_j,
        sir,
        error_bound: truncation_error(p, j)?,
        rigorous_error_bound: rigorous_truncation_error(p, j)?,
        capacity_lower: sir.max(0.5),
        capacity_upper: binaeras_capacity(p)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndecomposabilityWitness {
    pub indecomposable: bool,
    /// `min_{s_0} q(s_1 = (0, x_1) | x_1, s_0)`.
    pub min_probability: f64,
}

/// The channel is indecomposable when some next state is reachable with
/// positive probability from every state; `s_1 = (0, x_1)` is the candidate.
pub fn indecomposability_check(p: f64) -> Result<IndecomposabilityWitness> {
    check_p(p)?;
    let t = super::u_transition(p);
    let min_probability = t[0][0].min(t[1][0]);
    Ok(IndecomposabilityWitness {
        indecomposable: min_probability > 0.0,
        min_probability,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3 {
    pub table: Table,
    /// Smallest grid point with `sir < 1/2`.
    pub crossing: Option<f64>,
}

/// Columns `p, sir, capacity_lower, capacity_upper, error_bound`.
pub fn fig3_curves(p_grid: &[f64], j: usize) -> Result<Fig3> {
    let mut table = Table::new(&["p", "sir", "capacity_lower", "capacity_upper", "error_bound"]);
    let mut crossing = None;
    for &p in p_grid {
        let r = sir(p, j)?;
        if crossing.is_none() && r.sir < 0.5 {
            crossing = Some(p);
        }
        table.push(vec![
            Cell::from(p),
            Cell::from(r.sir),
            Cell::from(r.capacity_lower),
            Cell::from(r.capacity_upper),
            Cell::from(r.error_bound),
        ]);
    }
    Ok(Fig3 { table, crossing })
}
