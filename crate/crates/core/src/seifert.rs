//! Seifert symbols `(ε, g; (a_1, b_1), ..., (a_n, b_n))` and their classical invariants.
//!
//! A symbol is validated on construction: genus is positive, every pair is
//! coprime and `a ≥ 0`. Pairs with `a = 0` (necessarily `(0, ±1)`) are
//! accepted so that [`SeifertSymbol::normalize`] can see them, but every
//! invariant computation rejects them.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Orientability of the base orbifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    #[serde(rename = "o")]
    Orientable,
    #[serde(rename = "n")]
    NonOrientable,
}

impl Epsilon {
    /// The exponent weight `a_ε`: 2 for an orientable base, 1 otherwise.
    pub fn weight(self) -> i64 {
        match self {
            Epsilon::Orientable => 2,
            Epsilon::NonOrientable => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Epsilon::Orientable => "o",
            Epsilon::NonOrientable => "n",
        }
    }
}

/// A Seifert pair `(a, b)`, serialized as the two-element array `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Fiber {
    pub a: i64,
    pub b: i64,
}

impl Fiber {
    pub const fn new(a: i64, b: i64) -> Self {
        Fiber { a, b }
    }

    fn validate(&self) -> Result<()> {
        if self.a < 0 {
            return Err(Error::InvalidFiber {
                a: self.a,
                b: self.b,
                reason: "a must be non-negative",
            });
        }
        if self.a.gcd(&self.b) != 1 {
            return Err(Error::InvalidFiber {
                a: self.a,
                b: self.b,
                reason: "a and b must be coprime",
            });
        }
        Ok(())
    }

    /// Rejects the transient `(0, ±1)` pairs.
    pub fn require_positive(&self) -> Result<()> {
        if self.a < 1 {
            return Err(Error::InvalidFiber {
                a: self.a,
                b: self.b,
                reason: "a must be at least 1",
            });
        }
        Ok(())
    }
}

impl From<[i64; 2]> for Fiber {
    fn from([a, b]: [i64; 2]) -> Self {
        Fiber { a, b }
    }
}

impl From<Fiber> for [i64; 2] {
    fn from(f: Fiber) -> Self {
        [f.a, f.b]
    }
}

#[derive(Deserialize)]
struct RawSymbol {
    epsilon: Epsilon,
    genus: i64,
    fibers: Vec<Fiber>,
    boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSymbol")]
pub struct SeifertSymbol {
    epsilon: Epsilon,
    genus: i64,
    fibers: Vec<Fiber>,
    boundary: bool,
}

impl TryFrom<RawSymbol> for SeifertSymbol {
    type Error = Error;
    fn try_from(raw: RawSymbol) -> Result<Self> {
        SeifertSymbol::new(raw.epsilon, raw.genus, raw.fibers, raw.boundary)
    }
}

impl SeifertSymbol {
    pub fn new(epsilon: Epsilon, genus: i64, fibers: Vec<Fiber>, boundary: bool) -> Result<Self> {
        if genus <= 0 {
            return Err(Error::InvalidSymbol(format!(
                "genus must be positive, got {genus}"
            )));
        }
        for f in &fibers {
            f.validate()?;
        }
        Ok(SeifertSymbol {
            epsilon,
            genus,
            fibers,
            boundary,
        })
    }

    /// Closed symbol from `(a, b)` pairs.
    pub fn closed(epsilon: Epsilon, genus: i64, pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            epsilon,
            genus,
            pairs.iter().map(|&(a, b)| Fiber::new(a, b)).collect(),
            false,
        )
    }

    /// Symbol with boundary from `(a, b)` pairs.
    pub fn bounded(epsilon: Epsilon, genus: i64, pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            epsilon,
            genus,
            pairs.iter().map(|&(a, b)| Fiber::new(a, b)).collect(),
            true,
        )
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary
    }

    /// Compact JSON, e.g. `{"epsilon":"o","genus":1,"fibers":[[3,1]],"boundary":true}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSymbol(e.to_string()))
    }

    /// Errors unless every `a_j ≥ 1`.
    pub fn require_positive_fibers(&self) -> Result<()> {
        self.fibers.iter().try_for_each(Fiber::require_positive)
    }

    /// `A = lcm(a_1, ..., a_n)`, with `lcm(∅) = 1`.
    pub fn lcm_a(&self) -> i64 {
        self.fibers.iter().fold(1i64, |acc, f| acc.lcm(&f.a))
    }

    /// Seifert Euler number `e(M) = -Σ b_j / a_j`.
    pub fn euler_number(&self) -> Result<Rational> {
        self.require_positive_fibers()?;
        Ok(-self
            .fibers
            .iter()
            .map(|f| Rational::new(f.b as i128, f.a as i128))
            .sum::<Rational>())
    }

    /// `2 - 2g - Σ (1 - 1/a_j)`, applied for both orientable and non-orientable bases.
    pub fn orbifold_euler_characteristic(&self) -> Result<Rational> {
        self.require_positive_fibers()?;
        let cone: Rational = self
            .fibers
            .iter()
            .map(|f| Rational::from_integer(1) - Rational::new(1, f.a as i128))
            .sum();
        Ok(Rational::from_integer(2 - 2 * self.genus as i128) - cone)
    }

    /// The double `D(M)`: genus doubles and the fiber list is followed by its b-negated copy.
    pub fn double(&self) -> Result<Self> {
        if !self.boundary {
            return Err(Error::Domain(
                "the double is only defined for symbols with boundary".into(),
            ));
        }
        let mut fibers = self.fibers.clone();
        fibers.extend(self.fibers.iter().map(|f| Fiber::new(f.a, -f.b)));
        Ok(SeifertSymbol {
            epsilon: self.epsilon,
            genus: 2 * self.genus,
            fibers,
            boundary: false,
        })
    }

    pub fn reverse_orientation(&self) -> Self {
        SeifertSymbol {
            fibers: self.fibers.iter().map(|f| Fiber::new(f.a, -f.b)).collect(),
            ..self.clone()
        }
    }

    /// Canonical form under the fibration-preserving moves.
    ///
    /// `(0, -1)` becomes `(0, 1)`; fibers are sorted by `(a, b mod a, b)` with
    /// the `a = 0` pairs first; every fiber with `a ≥ 1` has `b` reduced into
    /// `[0, a)`. For closed symbols the total shift is pushed onto the last
    /// fiber so that `Σ k_j = 0`, which leaves that fiber unreduced in general.
    /// Finally `(1, 0)` pairs are dropped.
    pub fn normalize(&self) -> Self {
        let mut fibers: Vec<Fiber> = self
            .fibers
            .iter()
            .map(|f| if f.a == 0 { Fiber::new(0, 1) } else { *f })
            .collect();
        fibers.sort_by_key(|f| {
            let residue = if f.a == 0 { 0 } else { f.b.rem_euclid(f.a) };
            (f.a, residue, f.b)
        });

        let last = fibers.iter().rposition(|f| f.a >= 1);
        let mut carried: i64 = 0;
        for (idx, f) in fibers.iter_mut().enumerate() {
            if f.a == 0 {
                continue;
            }
            if self.boundary || Some(idx) != last {
                let q = f.b.div_euclid(f.a);
                f.b -= q * f.a;
                carried += q;
            }
        }
        if !self.boundary {
            if let Some(idx) = last {
                fibers[idx].b += carried * fibers[idx].a;
            }
        }
        fibers.retain(|f| !(f.a == 1 && f.b == 0));

        SeifertSymbol {
            fibers,
            ..self.clone()
        }
    }
}

impl fmt::Display for SeifertSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};", self.epsilon.as_str(), self.genus)?;
        for (i, fib) in self.fibers.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            write!(f, "{sep}({},{})", fib.a, fib.b)?;
        }
        if self.boundary {
            write!(f, "; boundary")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Epsilon::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn euler_number_examples() {
        let t3 = SeifertSymbol::closed(Orientable, 1, &[]).unwrap();
        assert_eq!(t3.euler_number().unwrap(), Rational::ZERO);
        let s = SeifertSymbol::closed(Orientable, 1, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(s.euler_number().unwrap(), q(-5, 6));
    }

    #[test]
    fn euler_number_rejects_zero_a() {
        let s = SeifertSymbol::closed(Orientable, 1, &[(0, 1)]).unwrap();
        assert_eq!(s.euler_number().unwrap_err().code(), "invalid-fiber");
    }

    #[test]
    fn orbifold_characteristic_examples() {
        let torus = SeifertSymbol::closed(Orientable, 1, &[]).unwrap();
        assert_eq!(
            torus.orbifold_euler_characteristic().unwrap(),
            Rational::ZERO
        );
        let s = SeifertSymbol::closed(Orientable, 1, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(
            s.orbifold_euler_characteristic().unwrap(),
            q(-1, 2) - q(2, 3)
        );
        assert_eq!(s.orbifold_euler_characteristic().unwrap(), q(-7, 6));
        let g2 = SeifertSymbol::closed(Orientable, 2, &[]).unwrap();
        assert_eq!(
            g2.orbifold_euler_characteristic().unwrap(),
            Rational::from_integer(-2)
        );
    }

    #[test]
    fn construction_validates() {
        assert!(SeifertSymbol::closed(Orientable, 0, &[]).is_err());
        assert!(SeifertSymbol::closed(Orientable, 1, &[(4, 2)]).is_err());
        assert!(SeifertSymbol::closed(Orientable, 1, &[(-3, 1)]).is_err());
        assert!(SeifertSymbol::closed(Orientable, 1, &[(0, 1), (1, 0)]).is_ok());
        assert!(SeifertSymbol::closed(Orientable, 1, &[(0, 2)]).is_err());
    }

    #[test]
    fn double_examples() {
        let m = SeifertSymbol::bounded(Orientable, 1, &[(2, 1)]).unwrap();
        assert_eq!(
            m.double().unwrap(),
            SeifertSymbol::closed(Orientable, 2, &[(2, 1), (2, -1)]).unwrap()
        );
        let m = SeifertSymbol::bounded(Orientable, 1, &[]).unwrap();
        assert_eq!(
            m.double().unwrap(),
            SeifertSymbol::closed(Orientable, 2, &[]).unwrap()
        );
        let m = SeifertSymbol::bounded(NonOrientable, 1, &[(3, 2)]).unwrap();
        assert_eq!(
            m.double().unwrap(),
            SeifertSymbol::closed(NonOrientable, 2, &[(3, 2), (3, -2)]).unwrap()
        );
    }

    #[test]
    fn double_of_closed_is_domain_error() {
        let m = SeifertSymbol::closed(Orientable, 1, &[(2, 1)]).unwrap();
        assert_eq!(m.double().unwrap_err().code(), "domain");
    }

    #[test]
    fn reverse_examples() {
        let s = SeifertSymbol::closed(Orientable, 1, &[(2, 1)]).unwrap();
        assert_eq!(
            s.reverse_orientation(),
            SeifertSymbol::closed(Orientable, 1, &[(2, -1)]).unwrap()
        );
        let t = SeifertSymbol::closed(Orientable, 1, &[]).unwrap();
        assert_eq!(t.reverse_orientation(), t);
    }

    #[test]
    fn normalize_examples() {
        let s = SeifertSymbol::closed(Orientable, 1, &[(1, 0), (3, 1)]).unwrap();
        assert_eq!(
            s.normalize(),
            SeifertSymbol::closed(Orientable, 1, &[(3, 1)]).unwrap()
        );

        let s = SeifertSymbol::bounded(Orientable, 1, &[(3, 4)]).unwrap();
        assert_eq!(
            s.normalize(),
            SeifertSymbol::bounded(Orientable, 1, &[(3, 1)]).unwrap()
        );

        let s = SeifertSymbol::closed(Orientable, 1, &[(3, 4), (5, 1)]).unwrap();
        assert_eq!(
            s.normalize(),
            SeifertSymbol::closed(Orientable, 1, &[(3, 1), (5, 6)]).unwrap()
        );
    }

    #[test]
    fn normalize_flips_zero_pairs_and_drops_trivial_fibers() {
        let s = SeifertSymbol::bounded(Orientable, 1, &[(5, 2), (0, -1), (1, 7)]).unwrap();
        assert_eq!(
            s.normalize(),
            SeifertSymbol::bounded(Orientable, 1, &[(0, 1), (5, 2)]).unwrap()
        );
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let text = r#"{"epsilon":"n","genus":2,"fibers":[[3,1],[5,-2]],"boundary":true}"#;
        let s = SeifertSymbol::from_json(text).unwrap();
        assert_eq!(s.to_json(), text);
        assert_eq!(s.epsilon(), NonOrientable);
    }

    #[test]
    fn json_rejects_invalid_symbols() {
        assert!(SeifertSymbol::from_json(
            r#"{"epsilon":"o","genus":1,"fibers":[[4,2]],"boundary":false}"#
        )
        .is_err());
        assert!(SeifertSymbol::from_json(
            r#"{"epsilon":"x","genus":1,"fibers":[],"boundary":false}"#
        )
        .is_err());
        assert!(SeifertSymbol::from_json(
            r#"{"epsilon":"o","genus":0,"fibers":[],"boundary":false}"#
        )
        .is_err());
    }

    fn arb_fiber() -> impl Strategy<Value = Fiber> {
        (1i64..12, -40i64..40)
            .prop_filter("coprime", |(a, b)| a.gcd(b) == 1)
            .prop_map(|(a, b)| Fiber::new(a, b))
    }

    fn arb_symbol() -> impl Strategy<Value = SeifertSymbol> {
        (
            prop_oneof![Just(Orientable), Just(NonOrientable)],
            1i64..4,
            prop::collection::vec(arb_fiber(), 0..6),
            any::<bool>(),
        )
            .prop_map(|(e, g, f, bd)| SeifertSymbol::new(e, g, f, bd).unwrap())
    }

    proptest! {
        #[test]
        fn double_has_zero_euler_number(s in arb_symbol()) {
            let bounded = SeifertSymbol::new(s.epsilon(), s.genus(), s.fibers().to_vec(), true).unwrap();
            prop_assert!(bounded.double().unwrap().euler_number().unwrap().is_zero());
        }

        #[test]
        fn reverse_negates_euler_number(s in arb_symbol()) {
            prop_assert_eq!(s.reverse_orientation().euler_number().unwrap(), -s.euler_number().unwrap());
            prop_assert_eq!(s.reverse_orientation().reverse_orientation(), s);
        }

        #[test]
        fn normalize_is_idempotent(s in arb_symbol()) {
            let once = s.normalize();
            prop_assert_eq!(once.normalize(), once);
        }

        #[test]
        fn normalize_preserves_closed_euler_number(s in arb_symbol()) {
            if !s.has_boundary() {
                prop_assert_eq!(s.normalize().euler_number().unwrap(), s.euler_number().unwrap());
            }
        }

        #[test]
        fn normalize_forgets_fiber_order(s in arb_symbol()) {
            let mut fibers = s.fibers().to_vec();
            fibers.reverse();
            let permuted = SeifertSymbol::new(s.epsilon(), s.genus(), fibers, s.has_boundary()).unwrap();
            prop_assert_eq!(permuted.normalize(), s.normalize());
        }

        #[test]
        fn json_round_trip(s in arb_symbol()) {
            let text = s.to_json();
            let back = SeifertSymbol::from_json(&text).unwrap();
            prop_assert_eq!(back.to_json(), text);
            prop_assert_eq!(back, s);
        }
    }
}
