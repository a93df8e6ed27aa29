//! Closed-form distance bounds and the dimension bookkeeping for boosting
//! the PPT/private gap with tensor powers. All logarithms are base 2.
//!
//! Bounds are returned unclamped: a negative value means the bound is
//! vacuous and is flagged as such rather than replaced by zero.

use alloc::vec::Vec;

use num_bigint::BigUint;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive};

use crate::error::{argument, Result};
use crate::private::mixing_weight;

/// Tolerance on the normalization of a Schmidt vector.
pub const SCHMIDT_NORM_TOL: f64 = 1e-9;

/// Trace distance from any private state with a d_k-dimensional key to the
/// separable states is at least `2 - 2/d_k`.
pub fn private_sep_lb(d_k: u64) -> Result<f64> {
    if d_k < 2 {
        return Err(argument(alloc::format!("key dimension must be at least 2, got {d_k}")));
    }
    Ok(2.0 - 2.0 / d_k as f64)
}

/// `1 - 2/(sqrt(d_s)+1)`, the separable-distance lower bound for the flower
/// state. At d_s = 2 this is 0.17157..; the value 0.58579 sometimes quoted
/// for the same case is `1 - p`, not this bound.
pub fn flower_sep_lb(d_s: u64) -> Result<f64> {
    if d_s < 2 {
        return Err(argument(alloc::format!("shield dimension must be at least 2, got {d_s}")));
    }
    Ok(1.0 - 2.0 * mixing_weight(d_s as usize))
}

/// Which of the two analytic bounds is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominant {
    First,
    Second,
    Tie,
}

impl Dominant {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominant::First => "first",
            Dominant::Second => "second",
            Dominant::Tie => "tie",
        }
    }
}

/// Lower bounds on the separable distance of the l-fold flower state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostBounds {
    pub l: u32,
    pub d_s: u64,
    pub p: f64,
    /// Telescoping bound `2 - 2/2^l - 2lp`.
    pub first: f64,
    /// Fidelity bound `2 - 2/2^l - 2 sqrt(1 - (1-p)^l)`.
    pub second: f64,
    /// `2 - 2/2^l - 2(1 - (1-p)^l)`, using the exact tensor-power gap.
    pub exact: f64,
    pub dominant: Dominant,
}

impl BoostBounds {
    pub fn first_vacuous(&self) -> bool {
        self.first < 0.0
    }

    pub fn second_vacuous(&self) -> bool {
        self.second < 0.0
    }

    pub fn exact_vacuous(&self) -> bool {
        self.exact < 0.0
    }
}

/// `1 - (1-p)^l` without cancellation for small p.
fn one_minus_power(p: f64, l: u32) -> f64 {
    -(l as f64 * (-p).ln_1p()).exp_m1()
}

pub fn boost_bounds(l: u32, d_s: u64) -> Result<BoostBounds> {
    if l == 0 || d_s < 2 {
        return Err(argument(alloc::format!("need l >= 1 and d_s >= 2, got l={l}, d_s={d_s}")));
    }
    let p = mixing_weight(d_s as usize);
    let key = 2.0 - 2.0 * (-(l as f64)).exp2();
    let first = key - 2.0 * l as f64 * p;
    let tail = one_minus_power(p, l);
    let second = key - 2.0 * tail.sqrt();
    let exact = key - 2.0 * tail;
    let dominant = if first > second {
        Dominant::First
    } else if second > first {
        Dominant::Second
    } else {
        Dominant::Tie
    };
    Ok(BoostBounds { l, d_s, p, first, second, exact, dominant })
}

/// Evaluates [`boost_bounds`] on the inclusive grid `l_range x ds_range`,
/// l-major.
pub fn bound_grid(l_range: (u32, u32), ds_range: (u64, u64)) -> Result<Vec<BoostBounds>> {
    if l_range.0 > l_range.1 || ds_range.0 > ds_range.1 {
        return Err(argument("grid ranges must be non-empty"));
    }
    let mut rows = Vec::new();
    for l in l_range.0..=l_range.1 {
        for d_s in ds_range.0..=ds_range.1 {
            rows.push(boost_bounds(l, d_s)?);
        }
    }
    Ok(rows)
}

/// Copy count and shield dimension that push the separable distance of
/// `rho^{(x) l}` above `2 - epsilon`, with the resulting local dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostPlan {
    pub epsilon: f64,
    pub l: u32,
    pub d_s: BigUint,
    /// Local dimension `2^l d_s^l`.
    pub d: BigUint,
    pub log2_d: f64,
    /// `log2(d) / log2(4/epsilon)^2`.
    pub c_effective: f64,
}

/// Writes a finite positive f64 exactly as `m / 2^k`.
fn dyadic(x: f64) -> (BigUint, u32) {
    let (mantissa, exp, _) = x.integer_decode();
    let m = BigUint::from(mantissa);
    if exp >= 0 {
        (m << exp as u32, 0)
    } else {
        (m, (-exp) as u32)
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - BigUint::one()) / b
}

/// log2 of a positive big integer from its bit length and top 64 bits.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(f64::NAN).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    shift as f64 + (top as f64).log2()
}

/// Exact integer evaluation of `l = ceil(log2(4/eps))` and
/// `d_s = ceil((4l/eps - 1)^2)`.
///
/// `epsilon = 2` is accepted; it gives l = 1 and d_s = 1 (a bare key).
pub fn plan_for_epsilon(epsilon: f64) -> Result<BoostPlan> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(argument(alloc::format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    let (m, k) = dyadic(epsilon);
    let four = BigUint::from(4u32) << k;
    let mut l: u32 = 0;
    while (&m << l) < four {
        l += 1;
    }
    // 4l/eps - 1 = q/m with q = 4l 2^k - m, positive since eps <= 2 <= 4l.
    let q = (BigUint::from(4 * l) << k) - &m;
    let d_s = ceil_div(&(&q * &q), &(&m * &m));
    // Both residual terms are at most eps/2: 2^l m >= 4 2^k and d_s m^2 >= q^2.
    assert!((&m << l) >= four && &d_s * &m * &m >= &q * &q, "boost plan does not meet its own guarantee");
    let d = (BigUint::one() << l) * num_traits::pow::pow(d_s.clone(), l as usize);
    let log2_d = log2_big(&d);
    let log_inv = 2.0 - epsilon.log2();
    Ok(BoostPlan { epsilon, l, d_s, d, log2_d, c_effective: log2_d / (log_inv * log_inv) })
}

impl BoostPlan {
    /// Shield dimension as a machine integer when it fits.
    pub fn d_s_u64(&self) -> Option<u64> {
        self.d_s.to_u64()
    }

    /// The telescoping bound at this plan's (l, d_s), in floating point.
    pub fn first_bound(&self) -> Option<f64> {
        let d_s = self.d_s.to_f64()?;
        let p = 1.0 / (d_s.sqrt() + 1.0);
        Some(2.0 - 2.0 * (-(self.l as f64)).exp2() - 2.0 * self.l as f64 * p)
    }
}

/// Lower bound `1/(2(d_s+1))` on `||rho - gamma||_1` for PPT rho and private gamma.
pub fn ks_gap_lb(d_s: u64) -> Result<f64> {
    if d_s == 0 {
        return Err(argument("shield dimension must be positive"));
    }
    Ok(1.0 / (2.0 * (d_s as f64 + 1.0)))
}

/// Trace-distance interval `(2(1-F), 2 sqrt(1-F^2))` implied by fidelity F.
pub fn fvg_interval(fidelity: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(argument(alloc::format!("fidelity must lie in [0, 1], got {fidelity}")));
    }
    Ok((2.0 * (1.0 - fidelity), 2.0 * (1.0 - fidelity * fidelity).sqrt()))
}

/// Maximal fidelity between a pure state with Schmidt coefficients `schmidt`
/// and the PPT states: the largest coefficient.
pub fn pure_ppt_fidelity(schmidt: &[f64]) -> Result<f64> {
    if schmidt.is_empty() || schmidt.iter().any(|a| !a.is_finite() || *a < 0.0) {
        return Err(argument("Schmidt coefficients must be non-empty, finite and non-negative"));
    }
    let norm: f64 = schmidt.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > SCHMIDT_NORM_TOL {
        return Err(argument(alloc::format!("Schmidt vector has squared norm {norm}")));
    }
    Ok(schmidt.iter().copied().fold(0.0, f64::max))
}
