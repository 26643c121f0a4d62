//! The natural discrete one-parameter polynomial-exponential (NDOPPE) family.
//!
//! For known non-negative constants `a_0..a_r` and `0 < θ < 1` the pmf is
//!
//! ```text
//! p(x; θ) = h(θ) · Σ_k a_k k! C(x+k, x) · (1-θ)^x,     h(θ) = 1 / D(θ),
//! D(θ)    = Σ_k a_k k! / θ^(k+1)
//! ```
//!
//! which is a finite mixture of negative binomials `NB(k+1, θ)` (failures
//! before the `(k+1)`-th success) with weights `w_k = a_k k! θ^-(k+1) / D(θ)`.
//! `r = 0, a = [1]` is the geometric distribution and `a = [1, 1]` the natural
//! discrete Lindley distribution.
//!
//! Weights, binomials and factorials are all handled in log space, so `r` and
//! `x` in the hundreds do not overflow.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distribution::CountDistribution;
use crate::error::{Error, Result};
use crate::specfun::{ln_binomial_plus, ln_rising, log_gamma_unchecked, log_sum_exp, reg_inc_beta};

/// Residual mass below which the stress–strength series is truncated.
pub const STRESS_STRENGTH_TAIL: f64 = 1e-12;

/// The known constants `a_0..a_r`; index is `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coeffs", "at least one coefficient is required"));
        }
        if let Some((k, a)) = coeffs.iter().enumerate().find(|(_, a)| !a.is_finite()) {
            return Err(Error::invalid("coeffs", format!("a_{k} = {a} is not finite")));
        }
        if let Some((k, a)) = coeffs.iter().enumerate().find(|(_, a)| **a < 0.0) {
            return Err(Error::invalid("coeffs", format!("a_{k} = {a} is negative")));
        }
        if coeffs.iter().all(|a| *a == 0.0) {
            return Err(Error::invalid("coeffs", "at least one coefficient must be positive"));
        }
        Ok(Self(coeffs))
    }

    /// `a_k = 1` and all other coefficients zero: a single `NB(k+1, θ)` component.
    pub fn one_hot(k: usize) -> Self {
        let mut a = vec![0.0; k + 1];
        a[k] = 1.0;
        Self(a)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Polynomial degree `r`.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

impl TryFrom<Vec<f64>> for CoefficientVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CoefficientVector> for Vec<f64> {
    fn from(c: CoefficientVector) -> Self {
        c.0
    }
}

impl FromStr for CoefficientVector {
    type Err = Error;

    /// Parses `a0,a1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid("coeffs", format!("`{}`: {e}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A validated NDOPPE distribution with cached mixture weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NdoppeDist {
    coeffs: CoefficientVector,
    theta: f64,
    ln_theta: f64,
    ln_theta_bar: f64,
    weights: Vec<f64>,
    ln_weights: Vec<f64>,
    ln_d: f64,
}

impl NdoppeDist {
    pub fn new(coeffs: CoefficientVector, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::invalid("theta", format!("must lie in (0, 1), got {theta}")));
        }
        let ln_theta = theta.ln();
        // ln(a_k k! / θ^(k+1))
        let ln_terms: Vec<f64> = coeffs
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                if a == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    a.ln() + log_gamma_unchecked(k as f64 + 1.0) - (k as f64 + 1.0) * ln_theta
                }
            })
            .collect();
        let ln_d = log_sum_exp(ln_terms.iter().copied());
        let ln_weights: Vec<f64> = ln_terms.iter().map(|t| t - ln_d).collect();
        let weights = ln_weights.iter().map(|l| l.exp()).collect();
        Ok(Self {
            coeffs,
            theta,
            ln_theta,
            ln_theta_bar: (-theta).ln_1p(),
            weights,
            ln_weights,
            ln_d,
        })
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Mixture weights `w_k`, summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln D(θ)`, the log of the normalizing sum.
    pub fn ln_normalizer(&self) -> f64 {
        self.ln_d
    }

    /// `h(θ) = 1 / D(θ)`.
    pub fn h(&self) -> f64 {
        (-self.ln_d).exp()
    }

    fn components(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(k, &w)| (k as u64, w))
    }

    /// `ln p(x; θ)`.
    pub fn ln_pmf(&self, x: u64) -> f64 {
        let xf = x as f64;
        let terms = self
            .ln_weights
            .iter()
            .enumerate()
            .filter(|(_, lw)| lw.is_finite())
            .map(move |(k, lw)| {
                lw + ln_binomial_plus(x, k as u64) + xf * self.ln_theta_bar + (k as f64 + 1.0) * self.ln_theta
            });
        log_sum_exp(terms.collect::<Vec<_>>())
    }

    pub fn pmf(&self, x: u64) -> f64 {
        self.ln_pmf(x).exp()
    }

    /// `[p(0), …, p(x_max)]` from the first-order recursion
    /// `p(x+1) = (1-θ)/(1+x) · Σ a_k (x+k+1)! / Σ a_k (x+k)! · p(x)`.
    pub fn pmf_recursive(&self, x_max: u64) -> Vec<f64> {
        let a = self.coeffs.as_slice();
        // ln (x+k)! per component, advanced incrementally
        let mut ln_fact: Vec<f64> = (0..a.len()).map(|k| log_gamma_unchecked(k as f64 + 1.0)).collect();
        let ln_a: Vec<f64> = a
            .iter()
            .map(|&v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
            .collect();
        let ln_poly =
            |ln_fact: &[f64]| log_sum_exp(ln_a.iter().zip(ln_fact).map(|(la, lf)| la + lf).collect::<Vec<_>>());

        let mut current_ln_poly = ln_poly(&ln_fact);
        let mut p = (current_ln_poly - self.ln_d).exp();
        let mut out = Vec::with_capacity(x_max as usize + 1);
        out.push(p);
        for x in 0..x_max {
            for (k, lf) in ln_fact.iter_mut().enumerate() {
                *lf += ((x + k as u64 + 1) as f64).ln();
            }
            let next_ln_poly = ln_poly(&ln_fact);
            let ratio = (1.0 - self.theta) / (1.0 + x as f64) * (next_ln_poly - current_ln_poly).exp();
            p *= ratio;
            current_ln_poly = next_ln_poly;
            out.push(p);
        }
        out
    }

    /// `P(X <= x) = Σ_k w_k I_θ(k+1, x+1)`, switching to `1 - survival(x+1)` in the upper half.
    pub fn cdf(&self, x: u64) -> f64 {
        let lower = self
            .components()
            .map(|(k, w)| w * inc_beta(self.theta, k as f64 + 1.0, x as f64 + 1.0))
            .sum::<f64>();
        // past the median the weights' rounding would cap the sum below 1
        if lower > 0.5 {
            1.0 - self.survival(x + 1)
        } else {
            lower
        }
    }

    /// Reliability `R(t) = P(X >= t)`, evaluated as `Σ_k w_k I_{1-θ}(t, k+1)`
    /// (the exact complement of `cdf(t - 1)`, without cancellation).
    pub fn survival(&self, t: u64) -> f64 {
        if t == 0 {
            return 1.0;
        }
        let theta_bar = 1.0 - self.theta;
        self.components()
            .map(|(k, w)| w * inc_beta(theta_bar, t as f64, k as f64 + 1.0))
            .sum::<f64>()
            .min(1.0)
    }

    /// Failure rate `r(t) = p(t) / R(t)`.
    pub fn hazard(&self, t: u64) -> Result<f64> {
        let s = self.survival(t);
        if s <= 0.0 {
            return Err(Error::Degenerate { t });
        }
        Ok(self.pmf(t) / s)
    }

    /// Raw moment `E[X^j]` for `j` in `1..=4`, as a mixture of NB raw moments.
    pub fn raw_moment(&self, j: u32) -> Result<f64> {
        let (p, q) = (self.theta, 1.0 - self.theta);
        let component: fn(f64, f64, f64) -> f64 = match j {
            1 => |n, p, q| n * q / p,
            2 => |n, p, q| n * q * (1.0 + n * q) / (p * p),
            3 => |n, p, q| n * q * (p * p + 3.0 * (n + 1.0) * q * p + (n + 1.0) * (n + 2.0) * q * q) / p.powi(3),
            4 => |n, p, q| {
                n * q
                    * (p.powi(3)
                        + 7.0 * (n + 1.0) * q * p * p
                        + 6.0 * (n + 1.0) * (n + 2.0) * q * q * p
                        + (n + 1.0) * (n + 2.0) * (n + 3.0) * q.powi(3))
                    / p.powi(4)
            },
            _ => {
                return Err(Error::invalid(
                    "j",
                    format!("raw moments are available for j = 1..=4, got {j}"),
                ))
            }
        };
        Ok(self
            .components()
            .map(|(k, w)| w * component(k as f64 + 1.0, p, q))
            .sum())
    }

    pub fn mean(&self) -> f64 {
        let odds = (1.0 - self.theta) / self.theta;
        self.components().map(|(k, w)| w * (k as f64 + 1.0)).sum::<f64>() * odds
    }

    /// Within-component variance plus the spread of component means.
    pub fn variance(&self) -> f64 {
        let q = 1.0 - self.theta;
        let mean = self.mean();
        self.components()
            .map(|(k, w)| {
                let n = k as f64 + 1.0;
                let m_k = n * q / self.theta;
                w * (n * q / (self.theta * self.theta) + (m_k - mean).powi(2))
            })
            .sum()
    }

    /// `E[X(X-1)…(X-m+1)] = h(θ) (θ̄/θ)^m Σ_k a_k Γ(m+k+1) / θ^(k+1)`.
    pub fn factorial_moment(&self, m: u32) -> Result<f64> {
        if m == 0 {
            return Err(Error::invalid("m", "factorial moment order must be at least 1"));
        }
        let ln_odds = self.ln_theta_bar - self.ln_theta;
        let terms: Vec<f64> = self
            .ln_weights
            .iter()
            .enumerate()
            .filter(|(_, lw)| lw.is_finite())
            .map(|(k, lw)| lw + ln_rising(k as f64 + 1.0, u64::from(m)))
            .collect();
        Ok((log_sum_exp(terms) + f64::from(m) * ln_odds).exp())
    }

    /// Variance-to-mean ratio.
    pub fn index_of_dispersion(&self) -> f64 {
        self.variance() / self.mean()
    }

    /// `E[e^{tX}]` for `t < -ln(1-θ)`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        Ok(self.cgf(t)?.exp())
    }

    /// `ln E[e^{tX}]`.
    pub fn cgf(&self, t: f64) -> Result<f64> {
        if !(t < -self.ln_theta_bar) {
            return Err(Error::domain(
                "mgf",
                format!("t must be < -ln(1-θ) = {}, got {t}", -self.ln_theta_bar),
            ));
        }
        // ln(1 - θ̄ e^t)
        let ln_denom = (-(self.ln_theta_bar + t).exp()).ln_1p();
        Ok(self.ln_generating(self.ln_theta - ln_denom))
    }

    /// `E[s^X]` for `|s| < 1/(1-θ)`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        let theta_bar = 1.0 - self.theta;
        if !(s.abs() < 1.0 / theta_bar) {
            return Err(Error::domain(
                "pgf",
                format!("|s| must be < 1/(1-θ) = {}, got {s}", 1.0 / theta_bar),
            ));
        }
        let ratio = self.theta / (1.0 - theta_bar * s);
        Ok(self.ln_generating(ratio.ln()).exp())
    }

    /// `ln Σ_k w_k exp((k+1) · ln_ratio)`.
    fn ln_generating(&self, ln_ratio: f64) -> f64 {
        log_sum_exp(
            self.ln_weights
                .iter()
                .enumerate()
                .filter(|(_, lw)| lw.is_finite())
                .map(|(k, lw)| lw + (k as f64 + 1.0) * ln_ratio)
                .collect::<Vec<_>>(),
        )
    }

    /// Characteristic function `E[e^{itX}]`.
    pub fn cf(&self, t: f64) -> Complex64 {
        let theta_bar = 1.0 - self.theta;
        let ratio =
            Complex64::new(self.theta, 0.0) / (Complex64::new(1.0, 0.0) - theta_bar * Complex64::new(0.0, t).exp());
        self.components().map(|(k, w)| w * ratio.powu(k as u32 + 1)).sum()
    }

    /// Smallest `x` with `cdf(x) >= q`, for `q` in `[0, 1)`. A few ulps of
    /// slack absorb rounding in the incomplete beta at exact boundaries.
    pub fn quantile(&self, q: f64) -> Result<u64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::domain("quantile", format!("q must lie in [0, 1), got {q}")));
        }
        let target = q * (1.0 - 4.0 * f64::EPSILON);
        let mut x = 0;
        while self.cdf(x) < target {
            x += 1;
        }
        Ok(x)
    }

    /// Smallest `x` with `P(X > x) <= eps`; precise for tiny `eps`.
    pub fn tail_bound(&self, eps: f64) -> u64 {
        let mut x = 0;
        while self.survival(x + 1) > eps {
            x += 1;
        }
        x
    }

    /// `P(min(X_1..X_n) <= x) = 1 - (1 - F(x))^n`.
    pub fn min_cdf(&self, x: u64, n: u32) -> Result<f64> {
        check_sample_size(n)?;
        Ok(1.0 - self.survival(x + 1).powi(n as i32))
    }

    /// `P(max(X_1..X_n) <= x) = F(x)^n`.
    pub fn max_cdf(&self, x: u64, n: u32) -> Result<f64> {
        check_sample_size(n)?;
        Ok(self.cdf(x).powi(n as i32))
    }
}

fn check_sample_size(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n", "sample size must be at least 1"));
    }
    Ok(())
}

fn inc_beta(p: f64, m: f64, n: f64) -> f64 {
    reg_inc_beta(p, m, n).expect("incomplete beta with validated arguments")
}

impl CountDistribution for NdoppeDist {
    fn ln_pmf(&self, x: u64) -> f64 {
        NdoppeDist::ln_pmf(self, x)
    }

    fn mean(&self) -> f64 {
        NdoppeDist::mean(self)
    }

    fn variance(&self) -> f64 {
        NdoppeDist::variance(self)
    }
}

/// Stress–strength reliability `R = P(stress <= strength) = Σ_y F_stress(y) p_strength(y)`.
///
/// The series stops once the remaining strength mass drops below
/// [`STRESS_STRENGTH_TAIL`], so the result carries at most that much
/// truncation error.
pub fn stress_strength(strength: &NdoppeDist, stress: &NdoppeDist) -> f64 {
    let mut total = 0.0;
    let mut y = 0;
    loop {
        total += stress.cdf(y) * strength.pmf(y);
        if strength.survival(y + 1) < STRESS_STRENGTH_TAIL {
            break;
        }
        y += 1;
    }
    total.clamp(0.0, 1.0)
}
