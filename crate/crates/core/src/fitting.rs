//! Maximum-likelihood fits and goodness-of-fit statistics.
//!
//! For the NDOPPE family the likelihood equation reduces to `mean(θ) = x̄`,
//! and the mean is strictly decreasing in `θ`, so the estimate is found by
//! bisection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{NegBinDist, PoissonDist};
use crate::dataset::CountDataset;
use crate::distribution::CountDistribution;
use crate::error::{Error, Result};
use crate::ndoppe::{CoefficientVector, NdoppeDist};

/// Open interval `(THETA_EPS, 1 - THETA_EPS)` searched for `θ̂`.
pub const THETA_EPS: f64 = 1e-12;

/// Search range for `ln r` in the free-size negative binomial fit.
pub const LOG_SIZE_BOUNDS: (f64, f64) = (-10.0, 10.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Poisson,
    NegBin,
    Ndoppe,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Poisson, ModelKind::NegBin, ModelKind::Ndoppe];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Poisson => "poisson",
            ModelKind::NegBin => "negbin",
            ModelKind::Ndoppe => "ndoppe",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "poisson" => Ok(ModelKind::Poisson),
            "negbin" | "nb" => Ok(ModelKind::NegBin),
            "ndoppe" => Ok(ModelKind::Ndoppe),
            other => Err(Error::invalid("model", format!("unknown model `{other}`"))),
        }
    }
}

/// How the negative binomial size parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NbShape {
    /// Size estimated jointly with the probability.
    Free,
    /// Size held at the given value; only the probability is estimated.
    Fixed(f64),
}

impl Default for NbShape {
    /// `Fixed(2.0)`, which is the convention behind the published comparison tables.
    fn default() -> Self {
        NbShape::Fixed(2.0)
    }
}

impl FromStr for NbShape {
    type Err = Error;

    /// `free` or a positive number.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("free") {
            return Ok(NbShape::Free);
        }
        let r: f64 = s
            .parse()
            .map_err(|_| Error::invalid("nb-shape", format!("expected `free` or a positive number, got `{s}`")))?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid("nb-shape", format!("size must be positive, got {r}")));
        }
        Ok(NbShape::Fixed(r))
    }
}

/// Estimated parameters, tagged by model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Poisson { rate: f64 },
    NegBin { size: f64, prob: f64 },
    Ndoppe { coeffs: CoefficientVector, theta: f64 },
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Poisson { .. } => ModelKind::Poisson,
            ModelParams::NegBin { .. } => ModelKind::NegBin,
            ModelParams::Ndoppe { .. } => ModelKind::Ndoppe,
        }
    }

    /// Rebuilds the fitted distribution.
    pub fn distribution(&self) -> Result<Box<dyn CountDistribution + Send + Sync>> {
        Ok(match self {
            ModelParams::Poisson { rate } => Box::new(PoissonDist::new(*rate)?),
            ModelParams::NegBin { size, prob } => Box::new(NegBinDist::new(*size, *prob)?),
            ModelParams::Ndoppe { coeffs, theta } => Box::new(NdoppeDist::new(coeffs.clone(), *theta)?),
        })
    }
}

/// One fitted model over one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ModelParams,
    pub counts: Vec<u64>,
    pub observed: Vec<u64>,
    /// Expected frequencies `n · p̂(x)` for each observed cell.
    pub fitted: Vec<f64>,
    pub nll: f64,
    pub chi_sq: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn model(&self) -> ModelKind {
        self.params.kind()
    }

    fn build(data: &CountDataset, params: ModelParams, dist: &dyn CountDistribution, warnings: Vec<String>) -> Self {
        let n = data.n() as f64;
        let fitted: Vec<f64> = data.counts().iter().map(|&x| n * dist.pmf(x)).collect();
        Self {
            params,
            counts: data.counts().to_vec(),
            observed: data.frequencies().to_vec(),
            chi_sq: chi_square(data, &fitted),
            nll: neg_log_likelihood(data, dist),
            fitted,
            warnings,
        }
    }
}

/// `-Σ_x O_x ln p(x)`.
pub fn neg_log_likelihood(data: &CountDataset, dist: &dyn CountDistribution) -> f64 {
    -data
        .cells()
        .filter(|(_, f)| *f > 0)
        .map(|(x, f)| f as f64 * dist.ln_pmf(x))
        .sum::<f64>()
}

/// Pearson statistic over exactly the listed cells, with no pooling and no tail cell.
pub fn chi_square(data: &CountDataset, fitted: &[f64]) -> f64 {
    data.frequencies()
        .iter()
        .zip(fitted)
        .map(|(&o, &e)| {
            let o = o as f64;
            if e > 0.0 {
                (o - e).powi(2) / e
            } else if o == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .sum()
}

fn positive_mean(data: &CountDataset) -> Result<f64> {
    let mean = data.mean();
    if !(mean > 0.0) {
        return Err(Error::invalid(
            "data",
            "all observations are zero; the sample mean must be positive",
        ));
    }
    Ok(mean)
}

/// NDOPPE maximum-likelihood estimate for known coefficients.
pub fn mle_ndoppe(data: &CountDataset, coeffs: &CoefficientVector) -> Result<FitResult> {
    let theta = solve_theta(coeffs, positive_mean(data)?)?;
    let dist = NdoppeDist::new(coeffs.clone(), theta)?;
    let params = ModelParams::Ndoppe {
        coeffs: coeffs.clone(),
        theta,
    };
    Ok(FitResult::build(data, params, &dist, Vec::new()))
}

/// Solves `mean(θ) = target` by bisection.
pub fn solve_theta(coeffs: &CoefficientVector, target: f64) -> Result<f64> {
    let mean_at = |theta: f64| -> Result<f64> { Ok(NdoppeDist::new(coeffs.clone(), theta)?.mean()) };
    let (mut lo, mut hi) = (THETA_EPS, 1.0 - THETA_EPS);
    let (mean_lo, mean_hi) = (mean_at(lo)?, mean_at(hi)?);
    if target > mean_lo || target < mean_hi {
        return Err(Error::NoRoot(format!(
            "sample mean {target} lies outside the attainable range [{mean_hi}, {mean_lo}]"
        )));
    }
    let (mut res_lo, mut res_hi) = (mean_lo - target, mean_hi - target);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let res = mean_at(mid)? - target;
        if res == 0.0 {
            return Ok(mid);
        }
        if res > 0.0 {
            lo = mid;
            res_lo = res;
        } else {
            hi = mid;
            res_hi = res;
        }
    }
    Ok(if res_lo.abs() <= res_hi.abs() { lo } else { hi })
}

/// Derivative of the NDOPPE log-likelihood in `θ`:
/// `n Σ_k w_k (k+1) / θ - Σ x_i / (1-θ)`.
pub fn ndoppe_score(data: &CountDataset, dist: &NdoppeDist) -> f64 {
    let theta = dist.theta();
    let weighted: f64 = dist
        .weights()
        .iter()
        .enumerate()
        .map(|(k, w)| w * (k as f64 + 1.0))
        .sum();
    data.n() as f64 * weighted / theta - data.total() / (1.0 - theta)
}

/// Poisson estimate `α̂ = x̄`.
pub fn mle_poisson(data: &CountDataset) -> Result<FitResult> {
    let rate = positive_mean(data)?;
    let dist = PoissonDist::new(rate)?;
    Ok(FitResult::build(data, ModelParams::Poisson { rate }, &dist, Vec::new()))
}

/// Negative binomial estimate. The probability is profiled out as
/// `p̂ = x̄ / (r + x̄)`; with [`NbShape::Free`] the size is then chosen by a
/// grid scan plus golden-section search over `ln r` in [`LOG_SIZE_BOUNDS`].
pub fn mle_negbin(data: &CountDataset, shape: NbShape) -> Result<FitResult> {
    let mean = positive_mean(data)?;
    let profile = |size: f64| -> Result<(NegBinDist, f64)> {
        let dist = NegBinDist::with_mean(size, mean)?;
        let nll = neg_log_likelihood(data, &dist);
        Ok((dist, nll))
    };
    let mut warnings = Vec::new();
    let size = match shape {
        NbShape::Fixed(r) => r,
        NbShape::Free => {
            let objective = |log_size: f64| profile(log_size.exp()).map(|(_, nll)| nll);
            let log_size = minimize_bounded(objective, LOG_SIZE_BOUNDS.0, LOG_SIZE_BOUNDS.1)?;
            if LOG_SIZE_BOUNDS.1 - log_size < 1e-3 || log_size - LOG_SIZE_BOUNDS.0 < 1e-3 {
                warnings.push(format!(
                    "negative binomial size hit the search bound (ln r = {log_size:.4}); data look Poisson-like"
                ));
            }
            log_size.exp()
        }
    };
    let (dist, _) = profile(size)?;
    let params = ModelParams::NegBin {
        size: dist.size(),
        prob: dist.prob(),
    };
    Ok(FitResult::build(data, params, &dist, warnings))
}

/// Minimizes `f` on `[lo, hi]`: coarse grid, then golden section around the best grid point.
fn minimize_bounded<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64) -> Result<f64> {
    const GRID: usize = 80;
    let step = (hi - lo) / GRID as f64;
    let mut best = (lo, f(lo)?);
    for i in 1..=GRID {
        let x = lo + step * i as f64;
        let v = f(x)?;
        if v < best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut previous = f64::INFINITY;
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        let current = fc.min(fd);
        if (previous - current).abs() < 1e-10 && b - a < 1e-8 {
            break;
        }
        previous = current;
    }
    let x = if fc < fd { c } else { d };
    // the grid endpoints are candidates too
    Ok(if f(x)? <= best.1 { x } else { best.0 })
}

/// Fits one model kind.
pub fn fit_model(
    data: &CountDataset,
    kind: ModelKind,
    coeffs: &CoefficientVector,
    shape: NbShape,
) -> Result<FitResult> {
    match kind {
        ModelKind::Poisson => mle_poisson(data),
        ModelKind::NegBin => mle_negbin(data, shape),
        ModelKind::Ndoppe => mle_ndoppe(data, coeffs),
    }
}
