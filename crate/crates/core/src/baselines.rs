//! Poisson and negative binomial reference models.

use crate::distribution::CountDistribution;
use crate::error::{Error, Result};
use crate::specfun::log_gamma_unchecked;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonDist {
    rate: f64,
}

impl PoissonDist {
    pub fn new(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid(
                "rate",
                format!("must be positive and finite, got {rate}"),
            ));
        }
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl CountDistribution for PoissonDist {
    fn ln_pmf(&self, x: u64) -> f64 {
        let xf = x as f64;
        xf * self.rate.ln() - self.rate - log_gamma_unchecked(xf + 1.0)
    }

    fn mean(&self) -> f64 {
        self.rate
    }

    fn variance(&self) -> f64 {
        self.rate
    }
}

/// Negative binomial with real `size` and pmf
/// `Γ(x+size) / (Γ(size) x!) · prob^x · (1-prob)^size`, so the mean is
/// `size · prob / (1 - prob)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegBinDist {
    size: f64,
    prob: f64,
}

impl NegBinDist {
    pub fn new(size: f64, prob: f64) -> Result<Self> {
        if !(size > 0.0 && size.is_finite()) {
            return Err(Error::invalid(
                "size",
                format!("must be positive and finite, got {size}"),
            ));
        }
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::invalid("prob", format!("must lie in (0, 1), got {prob}")));
        }
        Ok(Self { size, prob })
    }

    /// The member of the family with `size` and the given mean.
    pub fn with_mean(size: f64, mean: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::invalid(
                "mean",
                format!("must be positive and finite, got {mean}"),
            ));
        }
        Self::new(size, mean / (size + mean))
    }

    pub fn size(&self) -> f64 {
        self.size
    }

    pub fn prob(&self) -> f64 {
        self.prob
    }
}

impl CountDistribution for NegBinDist {
    fn ln_pmf(&self, x: u64) -> f64 {
        let xf = x as f64;
        log_gamma_unchecked(xf + self.size) - log_gamma_unchecked(self.size) - log_gamma_unchecked(xf + 1.0)
            + xf * self.prob.ln()
            + self.size * (-self.prob).ln_1p()
    }

    fn mean(&self) -> f64 {
        self.size * self.prob / (1.0 - self.prob)
    }

    fn variance(&self) -> f64 {
        self.size * self.prob / (1.0 - self.prob).powi(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn poisson_values() {
        let d = PoissonDist::new(2.0).unwrap();
        assert_relative_eq!(d.pmf(0), (-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(d.pmf(3), 8.0 / 6.0 * (-2.0f64).exp(), max_relative = 1e-13);
        let total: f64 = (0..100).map(|x| d.pmf(x)).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-14);
        assert!(PoissonDist::new(0.0).is_err());
        assert!(PoissonDist::new(f64::NAN).is_err());
    }

    #[test]
    fn negbin_values() {
        // size 2: (x+1) p^x (1-p)^2
        let d = NegBinDist::new(2.0, 0.3).unwrap();
        for x in 0..20u64 {
            let expected = (x as f64 + 1.0) * 0.3f64.powi(x as i32) * 0.49;
            assert_relative_eq!(d.pmf(x), expected, max_relative = 1e-12);
        }
        let (m, v) = (0..400).fold((0.0, 0.0), |(m, v), x| {
            let p = d.pmf(x);
            (m + x as f64 * p, v + (x * x) as f64 * p)
        });
        assert_relative_eq!(d.mean(), m, max_relative = 1e-12);
        assert_relative_eq!(d.variance(), v - m * m, max_relative = 1e-11);
        let e = NegBinDist::with_mean(2.0, 0.25).unwrap();
        assert_relative_eq!(e.mean(), 0.25, max_relative = 1e-14);
        assert!(NegBinDist::new(-1.0, 0.5).is_err());
        assert!(NegBinDist::new(1.0, 1.0).is_err());
    }
}
