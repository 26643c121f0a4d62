/// A distribution on the non-negative integers.
pub trait CountDistribution {
    fn ln_pmf(&self, x: u64) -> f64;

    fn pmf(&self, x: u64) -> f64 {
        self.ln_pmf(x).exp()
    }

    fn mean(&self) -> f64;

    fn variance(&self) -> f64;
}
