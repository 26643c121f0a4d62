//! Claim-count laws that appear only as compound primaries.
//!
//! These pmfs are the ones implied by the closed-form aggregate densities:
//! each compound density below is `Σ_n P(N=n) · Gamma(n, γ)` for exactly
//! these `P(N=n)`.

use crate::error::{Error, Result};

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::invalid(name, format!("must lie in (0, 1), got {v}")));
    }
    Ok(())
}

/// `Σ u^m`, `Σ m u^m`, `Σ m² u^m` for `|u| < 1`.
fn geometric_sums(u: f64) -> (f64, f64, f64) {
    let v = 1.0 - u;
    (1.0 / v, u / (v * v), u * (1.0 + u) / (v * v * v))
}

/// Discrete Lindley with `P(N=n) = λ^n [λ ln λ + (1-λ)(1 - (n+1) ln λ)] / (1 - ln λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteLindley {
    lambda: f64,
}

impl DiscreteLindley {
    pub fn new(lambda: f64) -> Result<Self> {
        check_open_unit("lambda", lambda)?;
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    // P(N=n) = λ^n (A + B n) / (1 - ln λ)
    fn linear_terms(&self) -> (f64, f64, f64) {
        let l = self.lambda;
        let ln = l.ln();
        (l * ln + (1.0 - l) * (1.0 - ln), -(1.0 - l) * ln, 1.0 - ln)
    }

    pub fn pmf(&self, n: u64) -> f64 {
        let (a, b, norm) = self.linear_terms();
        self.lambda.powf(n as f64) * (a + b * n as f64) / norm
    }

    /// `E[s^N]` for `|s| < 1/λ`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        let u = self.lambda * s;
        if !(u.abs() < 1.0) {
            return Err(Error::domain(
                "pgf",
                format!("|s| must be < 1/λ = {}, got {s}", 1.0 / self.lambda),
            ));
        }
        let (a, b, norm) = self.linear_terms();
        let (s0, s1, _) = geometric_sums(u);
        Ok((a * s0 + b * s1) / norm)
    }

    pub fn mean(&self) -> f64 {
        let l = self.lambda;
        let ln = l.ln();
        l * (1.0 - l + (l - 2.0) * ln) / ((1.0 - l).powi(2) * (1.0 - ln))
    }

    pub fn variance(&self) -> f64 {
        self.mean_plus_variance() - self.mean()
    }

    /// `E[N] + Var[N]`, the bracketed closed form behind the aggregate variance.
    pub fn mean_plus_variance(&self) -> f64 {
        let l = self.lambda;
        let ln = l.ln();
        let q = 1.0 - l;
        l / (q.powi(4) * (1.0 - ln).powi(2))
            * (q * q * (1.0 - ln) * (q + (l - 2.0) * ln) + q * q - (3.0 - 4.0 * l + l * l) * ln
                + (2.0 - 3.0 * l) * ln * ln)
    }
}

/// Discrete xgamma-I: `P(N=n) = S(n) - S(n+1)` with survival
/// `S(n) = (1 + t + t n + t² n² / 2) / (1 + t) · p^n`, `t = -ln p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DxGammaI {
    p: f64,
}

impl DxGammaI {
    pub fn new(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `P(N >= n)`.
    pub fn survival(&self, n: u64) -> f64 {
        let t = -self.p.ln();
        let nf = n as f64;
        (1.0 + t + t * nf + 0.5 * t * t * nf * nf) / (1.0 + t) * self.p.powf(nf)
    }

    pub fn pmf(&self, n: u64) -> f64 {
        // P(N=n) = p^n/(1+t) · [(1+t)(1-p) + t n (1-p) - t p + t²/2 (n² - p (n+1)²)]
        let t = -self.p.ln();
        let p = self.p;
        let nf = n as f64;
        let poly =
            (1.0 + t) * (1.0 - p) + t * nf * (1.0 - p) - t * p + 0.5 * t * t * (nf * nf - p * (nf + 1.0).powi(2));
        p.powf(nf) * poly / (1.0 + t)
    }

    /// `E[s^N] = 1 - (1-s) Σ_m s^m S(m+1)` for `|s| < 1/p`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        let u = self.p * s;
        if !(u.abs() < 1.0) {
            return Err(Error::domain(
                "pgf",
                format!("|s| must be < 1/p = {}, got {s}", 1.0 / self.p),
            ));
        }
        let t = -self.p.ln();
        let (s0, s1, s2) = geometric_sums(u);
        let tail = self.p / (1.0 + t) * ((1.0 + 2.0 * t + 0.5 * t * t) * s0 + (t + t * t) * s1 + 0.5 * t * t * s2);
        Ok(1.0 - (1.0 - s) * tail)
    }
}

/// Discrete xgamma-II: `P(N=n) = c p^n (1 - n² ln p / 2)` with
/// `c = 2(1-p)³ / (2(1-p)² - p(1+p) ln p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DxGammaII {
    p: f64,
}

impl DxGammaII {
    pub fn new(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn zero_mass(&self) -> f64 {
        let p = self.p;
        2.0 * (1.0 - p).powi(3) / (2.0 * (1.0 - p).powi(2) - p * (1.0 + p) * p.ln())
    }

    pub fn pmf(&self, n: u64) -> f64 {
        let nf = n as f64;
        self.zero_mass() * self.p.powf(nf) * (1.0 - 0.5 * nf * nf * self.p.ln())
    }

    /// `E[s^N]` for `|s| < 1/p`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        let u = self.p * s;
        if !(u.abs() < 1.0) {
            return Err(Error::domain(
                "pgf",
                format!("|s| must be < 1/p = {}, got {s}", 1.0 / self.p),
            ));
        }
        let (s0, _, s2) = geometric_sums(u);
        Ok(self.zero_mass() * (s0 - 0.5 * self.p.ln() * s2))
    }
}

/// Smallest `n` past which the remaining count mass is below `eps`, assuming
/// the pmf ratio `p(n+1)/p(n)` is eventually non-increasing (true for every
/// primary here). The tail beyond `n` is bounded by `p(n+1) / (1 - ρ)`.
pub(crate) fn count_tail_bound(pmf: impl Fn(u64) -> f64, eps: f64) -> u64 {
    let mut n = 0u64;
    let mut next = pmf(1);
    loop {
        let after = pmf(n + 2);
        if next > 0.0 {
            let ratio = after / next;
            if ratio < 1.0 && next / (1.0 - ratio) < eps {
                return n;
            }
        } else if after == 0.0 && n > 0 {
            return n;
        }
        next = after;
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn moments(pmf: impl Fn(u64) -> f64) -> (f64, f64, f64) {
        let (mut total, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for n in 0..4000u64 {
            let p = pmf(n);
            total += p;
            m1 += n as f64 * p;
            m2 += (n * n) as f64 * p;
        }
        (total, m1, m2 - m1 * m1)
    }

    #[test]
    fn pmfs_normalize_and_stay_positive() {
        for i in 1..20 {
            let v = i as f64 / 20.0;
            let laws: [Box<dyn Fn(u64) -> f64>; 3] = [
                Box::new(move |n| DiscreteLindley::new(v).unwrap().pmf(n)),
                Box::new(move |n| DxGammaI::new(v).unwrap().pmf(n)),
                Box::new(move |n| DxGammaII::new(v).unwrap().pmf(n)),
            ];
            for pmf in laws {
                let (total, _, _) = moments(&pmf);
                assert!((total - 1.0).abs() < 1e-12, "v={v} total={total}");
                assert!((0..200).all(|n| pmf(n) >= 0.0));
            }
        }
    }

    #[test]
    fn dxgamma1_pmf_is_survival_difference() {
        let d = DxGammaI::new(0.37).unwrap();
        assert_eq!(d.survival(0), 1.0);
        for n in 0..50 {
            assert_relative_eq!(d.pmf(n), d.survival(n) - d.survival(n + 1), max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_masses() {
        let l: f64 = 0.3;
        let expected = (1.0 - l + (2.0 * l - 1.0) * l.ln()) / (1.0 - l.ln());
        assert_relative_eq!(DiscreteLindley::new(l).unwrap().pmf(0), expected, max_relative = 1e-14);
        let p: f64 = 0.5;
        let expected = 2.0 * p.powi(3) / (2.0 * p * p - 0.5 * 1.5 * p.ln());
        assert_relative_eq!(DxGammaII::new(p).unwrap().pmf(0), expected, max_relative = 1e-14);
        let lp = p.ln();
        let expected = (1.0 - lp - p * (1.0 - 2.0 * lp + lp * lp / 2.0)) / (1.0 - lp);
        assert_relative_eq!(DxGammaI::new(p).unwrap().pmf(0), expected, max_relative = 1e-14);
    }

    #[test]
    fn lindley_moments_match_summation() {
        for &l in &[0.1, 0.35, 0.6, 0.85] {
            let d = DiscreteLindley::new(l).unwrap();
            let (_, mean, var) = moments(|n| d.pmf(n));
            assert_relative_eq!(d.mean(), mean, max_relative = 1e-10);
            assert_relative_eq!(d.variance(), var, max_relative = 1e-9);
        }
    }

    #[test]
    fn pgfs_match_summation() {
        for &v in &[0.2, 0.5, 0.8] {
            for &s in &[0.0f64, 0.3, -0.7, 1.0, 1.1] {
                let sum = |pmf: &dyn Fn(u64) -> f64| (0..3000u64).map(|n| pmf(n) * s.powi(n as i32)).sum::<f64>();
                let dl = DiscreteLindley::new(v).unwrap();
                let d1 = DxGammaI::new(v).unwrap();
                let d2 = DxGammaII::new(v).unwrap();
                assert!((dl.pgf(s).unwrap() - sum(&|n| dl.pmf(n))).abs() < 1e-12);
                assert!((d1.pgf(s).unwrap() - sum(&|n| d1.pmf(n))).abs() < 1e-12);
                assert!((d2.pgf(s).unwrap() - sum(&|n| d2.pmf(n))).abs() < 1e-12);
            }
        }
        assert!(DxGammaII::new(0.5).unwrap().pgf(2.0).is_err());
        assert!(DiscreteLindley::new(1.0).is_err());
    }

    #[test]
    fn tail_bound_covers_mass() {
        let d = DxGammaII::new(0.9).unwrap();
        let n = count_tail_bound(|k| d.pmf(k), 1e-15);
        let rest: f64 = (n + 1..n + 5000).map(|k| d.pmf(k)).sum();
        assert!(rest < 1e-15 && rest > 0.0);
        let geometric = |k: u64| 0.5f64.powi(k as i32 + 1);
        // tail beyond n is 0.5^(n+1); first below 1e-10 at n = 33
        assert_eq!(count_tail_bound(geometric, 1e-10), 33);
    }
}
