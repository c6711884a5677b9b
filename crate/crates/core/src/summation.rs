//! Compensated (Neumaier) accumulation for real and complex sums.

use num_complex::Complex64;

/// Error-free transform: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.compensation += e;
    }

    /// Folds another partial sum in, keeping both compensations.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let mut s = NeumaierSum::new();
        for x in [1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn sum_of_roots_of_unity_cancels() {
        use std::f64::consts::PI;
        let n = 997;
        let mut s = ComplexSum::new();
        for k in 0..n {
            s.add(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64));
        }
        assert!(s.value().norm() < 1e-13);
    }

    #[test]
    fn merge_in_order_matches_sequential() {
        let xs: Vec<f64> = (1..2000)
            .map(|k| (k as f64).sin() * 10f64.powi(k % 17 - 8))
            .collect();
        let mut whole = NeumaierSum::new();
        xs.iter().for_each(|&x| whole.add(x));
        let mut merged = NeumaierSum::new();
        for chunk in xs.chunks(64) {
            let mut part = NeumaierSum::new();
            chunk.iter().for_each(|&x| part.add(x));
            merged.merge(&part);
        }
        assert!((whole.value() - merged.value()).abs() <= 1e-15 * whole.value().abs().max(1.0));
    }
}
