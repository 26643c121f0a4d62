//! Aggregate claims `S = X_1 + … + X_N` with exponential(γ) claim sizes.
//!
//! Each model is a mixed distribution: an atom `P(S = 0) = P(N = 0)` plus a
//! continuous density on `(0, ∞)`. Densities involving `e^{-γx} ₁F₁(…)` are
//! evaluated in log space so that `γx` in the hundreds stays finite.
//!
//! Quadrature-based quantities (cdf, survival, total mass, stop-loss premium)
//! integrate the continuous part up to a bound `x*` chosen from the count
//! tail: with `P(N > n*) < 1e-17`, `x* = (n* + 8√n* + 40) / γ` lies far in the
//! Gamma(n*, γ) tail as well.

pub mod counts;

use std::cell::Cell;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baselines::{NegBinDist, PoissonDist};
use crate::distribution::CountDistribution;
use crate::error::{Error, Result};
use crate::ndoppe::{CoefficientVector, NdoppeDist};
use crate::quadrature::{integrate_panels, QuadConfig};
use crate::specfun::{log_bessel_i1, log_gamma_unchecked, log_hyp1f1, log_sum_exp};

pub use counts::{DiscreteLindley, DxGammaI, DxGammaII};

/// Count mass left outside the quadrature range.
const COUNT_TAIL_EPS: f64 = 1e-17;

/// Absolute tolerance of the stop-loss premium.
pub const PREMIUM_TOLERANCE: f64 = 1e-7;

/// The claim-count (primary) distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Primary {
    Ndoppe(NdoppeDist),
    Poisson(PoissonDist),
    NegBin(NegBinDist),
    DiscreteLindley(DiscreteLindley),
    DxGammaI(DxGammaI),
    DxGammaII(DxGammaII),
}

impl Primary {
    pub fn name(&self) -> &'static str {
        match self {
            Primary::Ndoppe(_) => "ndoppe",
            Primary::Poisson(_) => "poisson",
            Primary::NegBin(_) => "negbin",
            Primary::DiscreteLindley(_) => "dlindley",
            Primary::DxGammaI(_) => "dxgamma1",
            Primary::DxGammaII(_) => "dxgamma2",
        }
    }

    /// `P(N = n)`.
    pub fn pmf(&self, n: u64) -> f64 {
        match self {
            Primary::Ndoppe(d) => d.pmf(n),
            Primary::Poisson(d) => d.pmf(n),
            Primary::NegBin(d) => d.pmf(n),
            Primary::DiscreteLindley(d) => d.pmf(n),
            Primary::DxGammaI(d) => d.pmf(n),
            Primary::DxGammaII(d) => d.pmf(n),
        }
    }

    /// `E[s^N]`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        match self {
            Primary::Ndoppe(d) => d.pgf(s),
            Primary::Poisson(d) => Ok((d.rate() * (s - 1.0)).exp()),
            Primary::NegBin(d) => {
                if !(d.prob() * s < 1.0) {
                    return Err(Error::domain(
                        "pgf",
                        format!("s must be < 1/p = {}, got {s}", 1.0 / d.prob()),
                    ));
                }
                Ok(((1.0 - d.prob()) / (1.0 - d.prob() * s)).powf(d.size()))
            }
            Primary::DiscreteLindley(d) => d.pgf(s),
            Primary::DxGammaI(d) => d.pgf(s),
            Primary::DxGammaII(d) => d.pgf(s),
        }
    }

    /// `E[N]`; not available for the dxgamma laws.
    pub fn mean(&self) -> Result<f64> {
        match self {
            Primary::Ndoppe(d) => Ok(d.mean()),
            Primary::Poisson(d) => Ok(CountDistribution::mean(d)),
            Primary::NegBin(d) => Ok(CountDistribution::mean(d)),
            Primary::DiscreteLindley(d) => Ok(d.mean()),
            Primary::DxGammaI(_) | Primary::DxGammaII(_) => Err(self.unsupported_moments()),
        }
    }

    /// `Var[N]`; not available for the dxgamma laws.
    pub fn variance(&self) -> Result<f64> {
        match self {
            Primary::Ndoppe(d) => Ok(d.variance()),
            Primary::Poisson(d) => Ok(CountDistribution::variance(d)),
            Primary::NegBin(d) => Ok(CountDistribution::variance(d)),
            Primary::DiscreteLindley(d) => Ok(d.variance()),
            Primary::DxGammaI(_) | Primary::DxGammaII(_) => Err(self.unsupported_moments()),
        }
    }

    fn unsupported_moments(&self) -> Error {
        Error::Unsupported(format!("closed-form moment for the compound {} model", self.name()))
    }

    /// Count below which all but `eps` of the mass lies.
    pub fn tail_count(&self, eps: f64) -> u64 {
        counts::count_tail_bound(|n| self.pmf(n), eps)
    }
}

/// Atom at zero and continuous density at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedDensityValue {
    pub atom_at_zero: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompoundModel {
    primary: Primary,
    gamma: f64,
    upper: f64,
}

impl CompoundModel {
    pub fn new(primary: Primary, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(
                "gamma",
                format!("must be positive and finite, got {gamma}"),
            ));
        }
        let n_star = primary.tail_count(COUNT_TAIL_EPS) as f64;
        let upper = (n_star + 8.0 * n_star.sqrt() + 40.0) / gamma;
        Ok(Self { primary, gamma, upper })
    }

    pub fn ndoppe(coeffs: CoefficientVector, theta: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::Ndoppe(NdoppeDist::new(coeffs, theta)?), gamma)
    }

    pub fn poisson(alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::Poisson(PoissonDist::new(alpha)?), gamma)
    }

    pub fn negbin(size: f64, prob: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::NegBin(NegBinDist::new(size, prob)?), gamma)
    }

    pub fn discrete_lindley(lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::DiscreteLindley(DiscreteLindley::new(lambda)?), gamma)
    }

    pub fn dxgamma1(p: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::DxGammaI(DxGammaI::new(p)?), gamma)
    }

    pub fn dxgamma2(p: f64, gamma: f64) -> Result<Self> {
        Self::new(Primary::DxGammaII(DxGammaII::new(p)?), gamma)
    }

    pub fn primary(&self) -> &Primary {
        &self.primary
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Upper limit of the quadrature range.
    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    /// `P(S = 0)`.
    pub fn atom(&self) -> f64 {
        match &self.primary {
            Primary::Ndoppe(d) => {
                let a = d.coeffs().as_slice();
                let ln_num = log_sum_exp(
                    a.iter()
                        .enumerate()
                        .filter(|(_, a)| **a > 0.0)
                        .map(|(k, a)| a.ln() + log_gamma_unchecked(k as f64 + 1.0))
                        .collect::<Vec<_>>(),
                );
                (ln_num - d.ln_normalizer()).exp()
            }
            Primary::Poisson(d) => (-d.rate()).exp(),
            Primary::NegBin(d) => (1.0 - d.prob()).powf(d.size()),
            Primary::DiscreteLindley(d) => {
                let l = d.lambda();
                (1.0 - l + (2.0 * l - 1.0) * l.ln()) / (1.0 - l.ln())
            }
            Primary::DxGammaI(d) => {
                let (p, lp) = (d.p(), d.p().ln());
                (1.0 - lp - p * (1.0 - 2.0 * lp + 0.5 * lp * lp)) / (1.0 - lp)
            }
            Primary::DxGammaII(d) => d.zero_mass(),
        }
    }

    /// Continuous part of the aggregate law at `x >= 0` (right limit at 0).
    pub fn density(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::domain(
                "density",
                format!("x must be finite and non-negative, got {x}"),
            ));
        }
        let g = self.gamma;
        let gx = g * x;
        Ok(match &self.primary {
            Primary::Ndoppe(d) => {
                let theta_bar = 1.0 - d.theta();
                let z = gx * theta_bar;
                let mut terms = Vec::with_capacity(d.coeffs().as_slice().len());
                for (k, &a) in d.coeffs().as_slice().iter().enumerate() {
                    if a > 0.0 {
                        let kf = k as f64;
                        terms.push(a.ln() + log_gamma_unchecked(kf + 2.0) + log_hyp1f1(kf + 2.0, 2.0, z)?);
                    }
                }
                (g.ln() + theta_bar.ln() - gx + log_sum_exp(terms) - d.ln_normalizer()).exp()
            }
            Primary::Poisson(d) => {
                let alpha = d.rate();
                if x == 0.0 {
                    g * alpha * (-alpha).exp()
                } else {
                    let arg = 2.0 * (g * alpha * x).sqrt();
                    (0.5 * (g * alpha / x).ln() + log_bessel_i1(arg)? - alpha - gx).exp()
                }
            }
            Primary::NegBin(d) => {
                let (r, p) = (d.size(), d.prob());
                (g.ln() + r.ln() + r * (-p).ln_1p() + p.ln() - gx + log_hyp1f1(1.0 + r, 2.0, gx * p)?).exp()
            }
            Primary::DiscreteLindley(d) => {
                let l = d.lambda();
                let ln = l.ln();
                let poly = 1.0 - l + (l * l * gx + l * (3.0 - gx) - 2.0) * ln;
                g * l * poly / (1.0 - ln) * (-gx * (1.0 - l)).exp()
            }
            Primary::DxGammaI(d) => {
                let (p, lp) = (d.p(), d.p().ln());
                let u = gx * p;
                let poly = 1.0 - p - (2.0 - 3.0 * p) * lp
                    + 0.5 * (1.0 - 4.0 * p) * lp * lp
                    + lp * (p - 1.0 + 0.5 * (3.0 - 5.0 * p) * lp) * u
                    + 0.5 * (1.0 - p) * lp * lp * u * u;
                g * p / (1.0 - lp) * poly * (-gx * (1.0 - p)).exp()
            }
            Primary::DxGammaII(d) => {
                let (p, lp) = (d.p(), d.p().ln());
                let u = gx * p;
                let poly = 1.0 - 0.5 * lp - 1.5 * lp * u - 0.5 * lp * u * u;
                d.zero_mass() * g * p * poly * (-gx * (1.0 - p)).exp()
            }
        })
    }

    /// Two-branch form: the atom at `x = 0`, the continuous density for `x > 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            Ok(self.atom())
        } else {
            self.density(x)
        }
    }

    pub fn mixed(&self, x: f64) -> Result<MixedDensityValue> {
        Ok(MixedDensityValue {
            atom_at_zero: self.atom(),
            density: self.density(x)?,
        })
    }

    /// `∫_a^b density`, surfacing any evaluation error.
    fn integrate_density(&self, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
        let failure = Cell::new(None);
        let f = |x: f64| match self.density(x) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        };
        let panels = (16.0 * (b - a) / self.upper).ceil().max(1.0) as usize;
        let value = integrate_panels(&f, a, b, panels, cfg)?.value;
        match failure.take() {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    /// `atom + ∫_0^∞ density`; equals one up to quadrature error.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.atom() + self.integrate_density(0.0, self.upper, &QuadConfig::default())?)
    }

    /// `P(S <= x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let x = x.min(self.upper);
        Ok((self.atom() + self.integrate_density(0.0, x, &QuadConfig::default())?).min(1.0))
    }

    /// `P(S > x)`, integrated over the upper tail directly.
    pub fn survival(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(1.0);
        }
        if x >= self.upper {
            return Ok(0.0);
        }
        Ok(self
            .integrate_density(x, self.upper, &QuadConfig::default())?
            .clamp(0.0, 1.0))
    }

    /// `E[S]`.
    pub fn mean(&self) -> Result<f64> {
        let g = self.gamma;
        match &self.primary {
            Primary::Ndoppe(d) => {
                let odds = (1.0 - d.theta()) / d.theta();
                let weighted: f64 = d.weights().iter().enumerate().map(|(k, w)| w * (k as f64 + 1.0)).sum();
                Ok(odds * weighted / g)
            }
            Primary::Poisson(d) => Ok(d.rate() / g),
            Primary::NegBin(d) => Ok(d.size() * d.prob() / (g * (1.0 - d.prob()))),
            Primary::DiscreteLindley(d) => Ok(d.mean() / g),
            Primary::DxGammaI(_) | Primary::DxGammaII(_) => Err(self.primary.unsupported_moments()),
        }
    }

    /// `Var[S]`.
    pub fn variance(&self) -> Result<f64> {
        let g2 = self.gamma * self.gamma;
        match &self.primary {
            Primary::Ndoppe(d) => {
                let odds = (1.0 - d.theta()) / d.theta();
                let (mut first, mut second) = (0.0, 0.0);
                for (k, w) in d.weights().iter().enumerate() {
                    let n = k as f64 + 1.0;
                    first += w * n;
                    second += w * n * (n + 1.0);
                }
                let mean_count = odds * first;
                let factorial2 = odds * odds * second;
                Ok((factorial2 - mean_count * (mean_count - 2.0)) / g2)
            }
            Primary::Poisson(d) => Ok(2.0 * d.rate() / g2),
            Primary::NegBin(d) => {
                let (r, p) = (d.size(), d.prob());
                Ok(r * p * (2.0 - p) / (g2 * (1.0 - p).powi(2)))
            }
            Primary::DiscreteLindley(d) => Ok(d.mean_plus_variance() / g2),
            Primary::DxGammaI(_) | Primary::DxGammaII(_) => Err(self.primary.unsupported_moments()),
        }
    }

    /// `E[e^{tS}]`. The NDOPPE model uses its own closed form (valid for
    /// `t < γθ`); every other model uses `pgf_N(γ / (γ - t))`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let g = self.gamma;
        if !(t < g) {
            return Err(Error::domain("mgf", format!("t must be < γ = {g}, got {t}")));
        }
        match &self.primary {
            Primary::Ndoppe(d) => {
                let theta = d.theta();
                if !(t < g * theta) {
                    return Err(Error::domain("mgf", format!("t must be < γθ = {}, got {t}", g * theta)));
                }
                // 1 - θ̄ (1 - t/γ)^{-1}
                let ln_denom = (1.0 - (1.0 - theta) * g / (g - t)).ln();
                let terms: Vec<f64> = d
                    .coeffs()
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a > 0.0)
                    .map(|(k, a)| a.ln() + log_gamma_unchecked(k as f64 + 1.0) - (k as f64 + 1.0) * ln_denom)
                    .collect();
                Ok((log_sum_exp(terms) - d.ln_normalizer()).exp())
            }
            primary => primary.pgf(g / (g - t)),
        }
    }

    /// Stop-loss premium `E[(S - d)+] = ∫_d^∞ P(S > x) dx`.
    pub fn stop_loss_premium(&self, retention: f64) -> Result<f64> {
        if !(retention >= 0.0) || !retention.is_finite() {
            return Err(Error::domain(
                "stop_loss_premium",
                format!("retention must be finite and non-negative, got {retention}"),
            ));
        }
        if retention >= self.upper {
            return Ok(0.0);
        }
        let failure = Cell::new(None);
        let survival = |x: f64| match self.survival(x) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        };
        let cfg = QuadConfig {
            abs_tol: PREMIUM_TOLERANCE * 1e-2,
            rel_tol: 1e-10,
            ..QuadConfig::default()
        };
        let value = integrate_panels(&survival, retention, self.upper, 8, &cfg)?.value;
        match failure.take() {
            Some(e) => Err(e),
            None => Ok(value.max(0.0)),
        }
    }
}

impl fmt::Display for CompoundModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.primary {
            Primary::Ndoppe(d) => write!(f, "ndoppe(coeffs={}, theta={})", d.coeffs(), d.theta())?,
            Primary::Poisson(d) => write!(f, "poisson(alpha={})", d.rate())?,
            Primary::NegBin(d) => write!(f, "negbin(r={}, p={})", d.size(), d.prob())?,
            Primary::DiscreteLindley(d) => write!(f, "dlindley(lambda={})", d.lambda())?,
            Primary::DxGammaI(d) => write!(f, "dxgamma1(p={})", d.p())?,
            Primary::DxGammaII(d) => write!(f, "dxgamma2(p={})", d.p())?,
        }
        write!(f, " with exponential(gamma={}) claims", self.gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `Σ_n P(N=n) γ^n x^{n-1} e^{-γx} / (n-1)!`, summed in log space.
    fn series_density(model: &CompoundModel, x: f64) -> f64 {
        let g = model.gamma();
        let mut total = 0.0;
        for n in 1..3000u64 {
            let nf = n as f64;
            let p = model.primary().pmf(n);
            if p > 0.0 {
                total += (p.ln() + nf * g.ln() + (nf - 1.0) * x.ln() - g * x - log_gamma_unchecked(nf)).exp();
            }
        }
        total
    }

    fn all_models() -> Vec<CompoundModel> {
        vec![
            CompoundModel::ndoppe(CoefficientVector::new(vec![1.0, 1.0]).unwrap(), 0.4, 1.0).unwrap(),
            CompoundModel::ndoppe(CoefficientVector::new(vec![0.5, 0.0, 2.0, 1.0]).unwrap(), 0.25, 2.5).unwrap(),
            CompoundModel::poisson(0.5, 1.0).unwrap(),
            CompoundModel::poisson(7.0, 0.3).unwrap(),
            CompoundModel::negbin(2.5, 0.6, 1.7).unwrap(),
            CompoundModel::discrete_lindley(0.3, 1.0).unwrap(),
            CompoundModel::dxgamma1(0.4, 1.0).unwrap(),
            CompoundModel::dxgamma2(0.4, 1.0).unwrap(),
            CompoundModel::dxgamma1(0.85, 0.5).unwrap(),
        ]
    }

    #[test]
    fn densities_match_convolution_series() {
        for m in all_models() {
            assert_relative_eq!(m.atom(), m.primary().pmf(0), max_relative = 1e-13);
            for &x in &[1e-6, 0.05, 0.7, 3.0, 12.0, 40.0] {
                let oracle = series_density(&m, x);
                let got = m.density(x).unwrap();
                assert!(
                    (got - oracle).abs() <= 1e-11 * oracle.max(1e-300) + 1e-300,
                    "{m}: x={x} got {got} oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn normalization() {
        for m in all_models() {
            let total = m.total_mass().unwrap();
            assert!((total - 1.0).abs() < 1e-8, "{m}: {total}");
        }
    }

    #[test]
    fn two_branch_pdf() {
        let m = CompoundModel::ndoppe(CoefficientVector::new(vec![1.0]).unwrap(), 0.3, 1.0).unwrap();
        assert_relative_eq!(m.pdf(0.0).unwrap(), 0.3, max_relative = 1e-14);
        assert_relative_eq!(
            CompoundModel::poisson(1.0, 2.0).unwrap().pdf(0.0).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-14
        );
        let nb = CompoundModel::negbin(3.0, 0.2, 1.0).unwrap();
        assert_relative_eq!(nb.pdf(0.0).unwrap(), 0.8f64.powi(3), max_relative = 1e-14);
        assert!(m.density(-1.0).is_err());
        assert!(m.pdf(f64::NAN).is_err());
        let mixed = m.mixed(1.0).unwrap();
        assert_eq!(mixed.atom_at_zero, m.atom());
        assert_eq!(mixed.density, m.density(1.0).unwrap());
    }

    #[test]
    fn geometric_compound_reduces_to_exponential() {
        // γθθ̄ e^{-γθx}
        let (theta, g) = (0.35, 1.8);
        let m = CompoundModel::ndoppe(CoefficientVector::new(vec![1.0]).unwrap(), theta, g).unwrap();
        let nb = CompoundModel::negbin(1.0, 1.0 - theta, g).unwrap();
        for i in 0..50 {
            let x = 0.2 * i as f64;
            let expected = g * theta * (1.0 - theta) * (-g * theta * x).exp();
            assert_relative_eq!(m.density(x).unwrap(), expected, max_relative = 1e-10);
            assert_relative_eq!(nb.density(x).unwrap(), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn moments_match_count_identities() {
        for m in all_models() {
            let g = m.gamma();
            match (m.primary().mean(), m.primary().variance()) {
                (Ok(en), Ok(vn)) => {
                    assert_relative_eq!(m.mean().unwrap(), en / g, max_relative = 1e-10);
                    assert_relative_eq!(m.variance().unwrap(), (en + vn) / (g * g), max_relative = 1e-10);
                }
                _ => {
                    assert!(matches!(m.mean(), Err(Error::Unsupported(_))));
                    assert!(matches!(m.variance(), Err(Error::Unsupported(_))));
                }
            }
        }
        assert_relative_eq!(CompoundModel::poisson(2.0, 4.0).unwrap().mean().unwrap(), 0.5);
    }

    #[test]
    fn mgfs() {
        for m in all_models() {
            assert_relative_eq!(m.mgf(0.0).unwrap(), 1.0, max_relative = 1e-13);
            assert!(m.mgf(m.gamma()).is_err());
        }
        let d = NdoppeDist::new(CoefficientVector::new(vec![1.0, 2.0, 0.5]).unwrap(), 0.45).unwrap();
        let g = 2.0;
        let m = CompoundModel::new(Primary::Ndoppe(d.clone()), g).unwrap();
        let t = g * 0.45 / 2.0;
        let composed = d.mgf((g / (g - t)).ln()).unwrap();
        assert_relative_eq!(m.mgf(t).unwrap(), composed, max_relative = 1e-10);
        assert!(m.mgf(g * 0.45).is_err());
        let h = 1e-5;
        let fd = (m.mgf(h).unwrap() - m.mgf(-h).unwrap()) / (2.0 * h);
        assert_relative_eq!(fd, m.mean().unwrap(), max_relative = 1e-5);
    }

    #[test]
    fn cdf_and_survival_are_complementary() {
        let m = CompoundModel::discrete_lindley(0.3, 1.0).unwrap();
        assert_eq!(m.cdf(-1.0).unwrap(), 0.0);
        assert_eq!(m.survival(-1.0).unwrap(), 1.0);
        assert_relative_eq!(m.cdf(0.0).unwrap(), m.atom(), max_relative = 1e-14);
        for &x in &[0.1, 1.0, 4.0, 10.0] {
            assert!((m.cdf(x).unwrap() + m.survival(x).unwrap() - 1.0).abs() < 1e-10);
        }
        assert_eq!(m.survival(1e6).unwrap(), 0.0);
    }

    #[test]
    fn premium_limits() {
        for m in [
            CompoundModel::poisson(1.0, 1.0).unwrap(),
            CompoundModel::ndoppe(CoefficientVector::new(vec![1.0, 1.0]).unwrap(), 0.5, 2.0).unwrap(),
        ] {
            let mean = m.mean().unwrap();
            assert!((m.stop_loss_premium(0.0).unwrap() - mean).abs() < PREMIUM_TOLERANCE);
            assert_eq!(m.stop_loss_premium(1e9).unwrap(), 0.0);
            assert!(m.stop_loss_premium(-1.0).is_err());
        }
        // compound geometric: P(S > x) = θ̄ e^{-γθx}, premium θ̄ e^{-γθd} / (γθ)
        let (theta, g, d) = (0.4, 1.5, 2.0);
        let m = CompoundModel::ndoppe(CoefficientVector::new(vec![1.0]).unwrap(), theta, g).unwrap();
        let expected = (1.0 - theta) * (-g * theta * d).exp() / (g * theta);
        assert!((m.stop_loss_premium(d).unwrap() - expected).abs() < PREMIUM_TOLERANCE);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CompoundModel::poisson(1.0, 0.0).is_err());
        assert!(CompoundModel::poisson(-1.0, 1.0).is_err());
        assert!(CompoundModel::discrete_lindley(1.0, 1.0).is_err());
        assert!(CompoundModel::dxgamma2(0.0, 1.0).is_err());
        assert!(CompoundModel::negbin(0.0, 0.5, 1.0).is_err());
    }
}
