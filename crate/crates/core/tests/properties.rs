use approx::assert_relative_eq;
use ndoppe_core::compound::CompoundModel;
use ndoppe_core::specfun::{hyp1f1, reg_inc_beta};
use ndoppe_core::{CoefficientVector, CountDistribution, NdoppeDist, NegBinDist};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = CoefficientVector> {
    prop::collection::vec(0.0..1.0f64, 1..=7)
        .prop_filter("not all zero", |v| v.iter().any(|a| *a > 0.0))
        .prop_map(|v| CoefficientVector::new(v).unwrap())
}

fn theta() -> impl Strategy<Value = f64> {
    0.05..=0.95f64
}

fn compound() -> impl Strategy<Value = CompoundModel> {
    let gamma = 0.2..5.0f64;
    prop_oneof![
        (coeffs(), theta(), gamma.clone()).prop_map(|(a, t, g)| CompoundModel::ndoppe(a, t, g).unwrap()),
        (0.05..20.0f64, gamma.clone()).prop_map(|(a, g)| CompoundModel::poisson(a, g).unwrap()),
        (0.2..10.0f64, 0.05..0.95f64, gamma.clone()).prop_map(|(r, p, g)| CompoundModel::negbin(r, p, g).unwrap()),
        (0.05..0.95f64, gamma.clone()).prop_map(|(l, g)| CompoundModel::discrete_lindley(l, g).unwrap()),
        (0.05..0.95f64, gamma.clone()).prop_map(|(p, g)| CompoundModel::dxgamma1(p, g).unwrap()),
        (0.05..0.95f64, gamma).prop_map(|(p, g)| CompoundModel::dxgamma2(p, g).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pmf_sums_to_one(a in coeffs(), t in theta()) {
        let d = NdoppeDist::new(a, t).unwrap();
        let total: f64 = d.pmf_recursive(d.tail_bound(1e-13)).iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "total {total}");
    }

    #[test]
    fn recursion_matches_direct(a in coeffs(), t in theta()) {
        let d = NdoppeDist::new(a, t).unwrap();
        for (x, p) in d.pmf_recursive(200).into_iter().enumerate() {
            prop_assert!((p - d.pmf(x as u64)).abs() <= 1e-13, "x={x}");
        }
    }

    #[test]
    fn cdf_increments_are_pmf(a in coeffs(), t in theta(), x in 1u64..200) {
        let d = NdoppeDist::new(a, t).unwrap();
        prop_assert!((d.cdf(x) - d.cdf(x - 1) - d.pmf(x)).abs() <= 1e-12);
        prop_assert!((d.survival(x) - (1.0 - d.cdf(x - 1))).abs() <= 1e-12);
    }

    #[test]
    fn larger_theta_is_stochastically_smaller(a in coeffs(), t1 in theta(), t2 in theta()) {
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let d1 = NdoppeDist::new(a.clone(), lo).unwrap();
        let d2 = NdoppeDist::new(a, hi).unwrap();
        prop_assert!(d1.mean() >= d2.mean());
        let mut ratio = 0.0;
        for x in 0..=200 {
            prop_assert!(d1.cdf(x) <= d2.cdf(x), "cdf at {x}");
            let next = (d1.ln_pmf(x) - d2.ln_pmf(x)).exp();
            prop_assert!(next >= ratio * (1.0 - 1e-12), "ratio at {x}");
            ratio = next;
        }
    }

    #[test]
    fn hazard_between_zero_mass_and_theta(a in coeffs(), t in theta(), x in 0u64..200) {
        let d = NdoppeDist::new(a, t).unwrap();
        let r = d.hazard(x).unwrap();
        prop_assert!(r >= d.pmf(0) * (1.0 - 1e-10) && r <= t * (1.0 + 1e-10), "r={r}");
    }

    #[test]
    fn one_hot_is_negative_binomial(k in 0usize..8, t in theta(), x in 0u64..150) {
        let d = NdoppeDist::new(CoefficientVector::one_hot(k), t).unwrap();
        let nb = NegBinDist::new(k as f64 + 1.0, 1.0 - t).unwrap();
        prop_assert!((d.pmf(x) - nb.pmf(x)).abs() <= 1e-14 + 1e-12 * nb.pmf(x));
    }

    #[test]
    fn nb_size_one_is_geometric(p in 0.01..0.99f64, x in 0u64..100) {
        let nb = NegBinDist::new(1.0, p).unwrap();
        let expected = (1.0 - p) * p.powi(x as i32);
        prop_assert!((nb.pmf(x) - expected).abs() <= 1e-13 * expected.max(1e-300) + 1e-300);
    }

    #[test]
    fn inc_beta_reflection(m in 0.1..60.0f64, n in 0.1..60.0f64, p in 0.0..=1.0f64) {
        let sum = reg_inc_beta(p, m, n).unwrap() + reg_inc_beta(1.0 - p, n, m).unwrap();
        prop_assert!((sum - 1.0).abs() <= 1e-10, "sum {sum}");
    }

    #[test]
    fn kummer_equal_parameters(a in 0.1..20.0f64, z in 0.0..300.0f64) {
        let v = hyp1f1(a, a, z).unwrap();
        prop_assert!(((v - z.exp()) / z.exp()).abs() <= 1e-10);
    }

    #[test]
    fn compound_mass_is_one(m in compound()) {
        let total = m.total_mass().unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-8, "{m}: {total}");
    }

    #[test]
    fn compound_density_near_zero(m in compound()) {
        // only single claims contribute at x -> 0+
        let limit = m.gamma() * m.primary().pmf(1);
        let x = 1e-9 / m.gamma();
        prop_assert!((m.density(x).unwrap() - limit).abs() <= 1e-6 * limit.max(1e-12), "{m}");
    }

    #[test]
    fn claim_scale_invariance(m in compound(), c in 0.1..10.0f64, u in 0.01..1.0f64) {
        let scaled = CompoundModel::new(m.primary().clone(), c * m.gamma()).unwrap();
        let x = u * m.upper_bound() * 0.5;
        let lhs = x * m.density(x).unwrap();
        let rhs = (x / c) * scaled.density(x / c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-290), "{m} c={c} x={x}");
    }
}

/// `Σ_{j<=x} NB(j; k+1, θ)` against the incomplete-beta form, on 1000 seeded triples.
#[test]
fn inc_beta_matches_negative_binomial_partial_sums() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let k = rng.random_range(0..8u64);
        let x = rng.random_range(0..120u64);
        let theta: f64 = rng.random_range(0.02..0.98);
        let nb = NegBinDist::new(k as f64 + 1.0, 1.0 - theta).unwrap();
        let partial: f64 = (0..=x).map(|j| nb.pmf(j)).sum();
        let beta = reg_inc_beta(theta, k as f64 + 1.0, x as f64 + 1.0).unwrap();
        assert!(
            (partial - beta).abs() <= 1e-9,
            "k={k} x={x} θ={theta}: {partial} vs {beta}"
        );
    }
}

#[test]
fn special_cases_collapse() {
    let g = NdoppeDist::new(CoefficientVector::one_hot(0), 0.3).unwrap();
    for x in 0..30u64 {
        assert_relative_eq!(g.pmf(x), 0.3 * 0.7f64.powi(x as i32), max_relative = 1e-13);
        assert_relative_eq!(g.survival(x), 0.7f64.powi(x as i32), max_relative = 1e-12);
    }
    // a0 = a1 = 1: weights θ/(1+θ) and 1/(1+θ) on NB(1) and NB(2)
    let t = 0.4;
    let ndl = NdoppeDist::new(CoefficientVector::new(vec![1.0, 1.0]).unwrap(), t).unwrap();
    for x in 0..30u64 {
        let xf = x as f64;
        let expected = t * t * (1.0 - t).powi(x as i32) * (2.0 + xf) / (1.0 + t);
        assert_relative_eq!(ndl.pmf(x), expected, max_relative = 1e-13);
    }
}
