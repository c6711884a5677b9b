//! Quantum arithmetic at `q = e^{2πi/r}` for odd `r`.
//!
//! Quantum integers use the real convention `{n} = 2 sin(2πn/r)`, so
//! `[n] = {n}/{1}` and `ζ_r = {1}`. Square roots of possibly negative
//! radicands take the principal branch.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// An edge colour, an element of `I_r = {0, 2, ..., r-3}`.
pub type Color = u32;

#[derive(Clone, Debug)]
pub struct RootContext {
    r: u32,
    zeta: f64,
    eta: f64,
    qint: Vec<f64>,
    qfact: Vec<f64>,
}

impl RootContext {
    pub fn new(r: u32) -> Result<Self> {
        if r < 3 || r.is_multiple_of(2) {
            return Err(Error::Precondition(format!(
                "r must be odd and at least 3, got {r}"
            )));
        }
        let qint: Vec<f64> = (0..=r as i64).map(|n| quantum_integer_raw(n, r)).collect();
        let mut qfact = Vec::with_capacity(qint.len());
        qfact.push(1.0);
        for n in 1..=r as usize {
            qfact.push(qfact[n - 1] * qint[n]);
        }
        let zeta = qint[1];
        Ok(RootContext {
            r,
            zeta,
            eta: zeta / (r as f64).sqrt(),
            qint,
            qfact,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `ζ_r = 2 sin(2π/r)`.
    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `η_r = 2 sin(2π/r) / √r`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `I_r = {0, 2, ..., r-3}`.
    pub fn colors(&self) -> impl Iterator<Item = Color> + Clone {
        (0..=self.r - 3).step_by(2)
    }

    pub fn num_colors(&self) -> usize {
        ((self.r - 1) / 2) as usize
    }

    /// `{n} = 2 sin(2πn/r)` for any integer `n`.
    pub fn quantum_integer(&self, n: i64) -> f64 {
        match usize::try_from(n) {
            Ok(k) if k < self.qint.len() => self.qint[k],
            _ => quantum_integer_raw(n, self.r),
        }
    }

    /// `[n] = {n} / {1}`.
    pub fn quantum_bracket(&self, n: i64) -> f64 {
        self.quantum_integer(n) / self.zeta
    }

    /// `{n}! = {1}{2}...{n}` for `0 ≤ n ≤ r`.
    pub fn quantum_factorial(&self, n: i64) -> Result<f64> {
        if n < 0 || n > self.r as i64 {
            return Err(Error::Precondition(format!(
                "quantum factorial argument {n} outside [0, {}]",
                self.r
            )));
        }
        Ok(self.qfact[n as usize])
    }

    fn check_color(&self, c: Color) -> Result<()> {
        if c % 2 == 1 || c + 3 > self.r {
            return Err(Error::ColorOutOfRange {
                color: c as i64,
                r: self.r,
            });
        }
        Ok(())
    }

    pub fn is_admissible_triple(&self, i: Color, j: Color, k: Color) -> Result<bool> {
        self.check_color(i)?;
        self.check_color(j)?;
        self.check_color(k)?;
        Ok(self.admissible_unchecked(i, j, k))
    }

    #[inline]
    pub(crate) fn admissible_unchecked(&self, i: Color, j: Color, k: Color) -> bool {
        i <= j + k && j <= i + k && k <= i + j && i + j + k <= 2 * (self.r - 2)
    }

    /// Whether the four faces `(i,j,k), (j,l,n), (i,m,n), (k,l,m)` are admissible.
    pub fn is_admissible_six(&self, c: [Color; 6]) -> Result<bool> {
        for x in c {
            self.check_color(x)?;
        }
        Ok(faces_of(c)
            .iter()
            .all(|&[a, b, d]| self.admissible_unchecked(a, b, d)))
    }

    /// `Δ(i,j,k) = ζ^{1/2} ({(i+j-k)/2}! {(i+k-j)/2}! {(j+k-i)/2}! / {(i+j+k)/2 + 1}!)^{1/2}`.
    pub fn delta_triple(&self, i: Color, j: Color, k: Color) -> Result<Complex64> {
        if !self.is_admissible_triple(i, j, k)? {
            return Err(Error::NotAdmissible(format!(
                "triple ({i},{j},{k}) at r = {}",
                self.r
            )));
        }
        Ok(self.delta_unchecked(i, j, k))
    }

    pub(crate) fn delta_unchecked(&self, i: Color, j: Color, k: Color) -> Complex64 {
        let f = |n: u32| self.qfact[n as usize];
        let radicand =
            f((i + j - k) / 2) * f((i + k - j) / 2) * f((j + k - i) / 2) / f((i + j + k) / 2 + 1);
        principal_sqrt(radicand) * self.zeta.sqrt()
    }

    /// Quantum 6j symbol with rows `(i, j, k)` over `(l, m, n)`.
    pub fn six_j(&self, c: [Color; 6]) -> Result<Complex64> {
        if !self.is_admissible_six(c)? {
            return Err(Error::NotAdmissible(format!(
                "6-tuple {c:?} at r = {}",
                self.r
            )));
        }
        Ok(self.six_j_unchecked(c))
    }

    pub(crate) fn six_j_unchecked(&self, c: [Color; 6]) -> Complex64 {
        let [i, j, k, l, m, n] = c;
        let t = [
            (i + j + k) / 2,
            (i + m + n) / 2,
            (j + l + n) / 2,
            (k + l + m) / 2,
        ];
        let q = [
            (i + j + l + m) / 2,
            (i + k + l + n) / 2,
            (j + k + m + n) / 2,
        ];
        let z_lo = *t.iter().max().unwrap();
        let z_hi = *q.iter().min().unwrap();

        let mut sum = 0.0;
        // {z+1}! vanishes once it contains {r} = 0.
        for z in z_lo..=z_hi.min(self.r - 1) {
            let mut denom = 1.0;
            for tb in t {
                denom *= self.qfact[(z - tb) as usize];
            }
            for qc in q {
                denom *= self.qfact[(qc - z) as usize];
            }
            let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * self.qfact[(z + 1) as usize] / denom;
        }

        let lambda = i + j + k + l + m + n;
        // λ is even, so (√-1)^λ = (-1)^{λ/2}.
        let phase = if (lambda / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let deltas: Complex64 = faces_of(c)
            .iter()
            .map(|&[a, b, d]| self.delta_unchecked(a, b, d))
            .product();
        deltas * (phase * sum / self.zeta)
    }
}

/// Faces `F_1..F_4` of the 6-tuple.
pub(crate) fn faces_of(c: [Color; 6]) -> [[Color; 3]; 4] {
    let [i, j, k, l, m, n] = c;
    [[i, j, k], [j, l, n], [i, m, n], [k, l, m]]
}

/// Reduces `n` into `(-r/2, r/2]` first, so `{r - n} = -{n}` holds bit-for-bit.
fn quantum_integer_raw(n: i64, r: u32) -> f64 {
    let r = r as i64;
    let mut m = n.rem_euclid(r);
    if 2 * m > r {
        m -= r;
    }
    if m == 0 {
        return 0.0;
    }
    2.0 * (2.0 * PI * m as f64 / r as f64).sin()
}

fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}
