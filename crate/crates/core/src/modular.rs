//! Congruence machinery: modular inverses, CRT, the solution set `B`, and
//! Dedekind sums.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::seifert::{Fiber, SeifertSymbol};

/// Inverse of `b` modulo `a`, reduced into `{0, ..., a-1}`. For `a = 1` this is 0.
pub fn mod_inverse(b: i64, a: i64) -> Result<i64> {
    if a < 1 {
        return Err(Error::InvalidFiber {
            a,
            b,
            reason: "modulus must be at least 1",
        });
    }
    let eg = (b.rem_euclid(a)).extended_gcd(&a);
    if eg.gcd != 1 {
        return Err(Error::NotInvertible { b, a });
    }
    Ok(eg.x.rem_euclid(a))
}

/// Dedekind sum `s(b, a)` as an exact rational, via the sawtooth form
/// `Σ_{k=1}^{a-1} ((k/a)) ((kb/a))`.
///
/// Every call cross-checks the result against [`dedekind_sum_cot`] and
/// reports a numeric inconsistency if they disagree.
pub fn dedekind_sum(b: i64, a: i64) -> Result<Rational> {
    if a < 1 {
        return Err(Error::InvalidFiber {
            a,
            b,
            reason: "modulus must be at least 1",
        });
    }
    if a.gcd(&b) != 1 {
        return Err(Error::NotInvertible { b, a });
    }
    let a128 = a as i128;
    let b_red = b.rem_euclid(a) as i128;
    // ((k/a)) = (2k - a) / 2a for 0 < k < a, and 0 at integers.
    let mut numer: i128 = 0;
    for k in 1..a128 {
        let t = (k * b_red) % a128;
        if t != 0 {
            numer += (2 * k - a128) * (2 * t - a128);
        }
    }
    let exact = Rational::new(numer, 4 * a128 * a128);

    let (approx, scale) = cot_sum(b, a);
    let tol = 1e-12 * scale.max(1.0);
    if (exact.to_f64() - approx).abs() > tol {
        return Err(Error::Numeric(format!(
            "Dedekind sum s({b},{a}): sawtooth {exact} disagrees with cotangent form {approx:e}"
        )));
    }
    Ok(exact)
}

/// The cotangent form `(4a)^{-1} Σ_{l=1}^{a-1} cot(πl/a) cot(πlb/a)` in floating point.
pub fn dedekind_sum_cot(b: i64, a: i64) -> f64 {
    cot_sum(b, a).0
}

/// Returns the value and `(4a)^{-1} Σ |term|`, the scale for its rounding error.
fn cot_sum(b: i64, a: i64) -> (f64, f64) {
    use std::f64::consts::PI;
    let mut sum = 0.0;
    let mut mag = 0.0;
    for l in 1..a {
        let lb = (l as i128 * b as i128).rem_euclid(a as i128) as f64;
        let x = 1.0 / (PI * l as f64 / a as f64).tan();
        let y = if lb == 0.0 {
            0.0
        } else {
            1.0 / (PI * lb / a as f64).tan()
        };
        // cot(π/2) is 0 exactly, tan(π/2) is not infinite in floating point.
        let term = if 2 * l == a || 2.0 * lb == a as f64 {
            0.0
        } else {
            x * y
        };
        sum += term;
        mag += term.abs();
    }
    let denom = 4.0 * a as f64;
    (sum / denom, mag / denom)
}

/// Sign vector entry. Stored as `i8` with values ±1.
pub type Sign = i8;

/// Enumerates `{±1}^n` with `+1 < -1` in lexicographic order.
pub(crate) fn sign_vectors(n: usize) -> impl Iterator<Item = Vec<Sign>> {
    (0u64..1u64 << n).map(move |bits| {
        (0..n)
            .map(|j| if bits >> (n - 1 - j) & 1 == 0 { 1 } else { -1 })
            .collect()
    })
}

/// Solves `γ + μ_j b_j* ≡ 0 (mod a_j)` for all `j` by CRT.
///
/// Returns `(γ mod L, L)` with `L = lcm(a_j)`, or `None` when the congruences
/// are incompatible.
pub fn solve_system(fibers: &[Fiber], mu: &[Sign]) -> Result<Option<(i64, i64)>> {
    if fibers.len() != mu.len() {
        return Err(Error::Precondition(format!(
            "{} fibers but {} signs",
            fibers.len(),
            mu.len()
        )));
    }
    let mut residue: i128 = 0;
    let mut modulus: i128 = 1;
    for (f, &m) in fibers.iter().zip(mu) {
        f.require_positive()?;
        let b_star = mod_inverse(f.b, f.a)? as i128;
        let a = f.a as i128;
        let target = (-(m as i128) * b_star).rem_euclid(a);
        match crt_pair(residue, modulus, target, a) {
            Some((r, l)) => {
                residue = r;
                modulus = l;
            }
            None => return Ok(None),
        }
    }
    Ok(Some((residue as i64, modulus as i64)))
}

/// `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for arbitrary positive moduli.
fn crt_pair(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let eg = m1.extended_gcd(&m2);
    let g = eg.gcd;
    if (r2 - r1).rem_euclid(g) != 0 {
        return None;
    }
    let l = m1 / g * m2;
    // x = r1 + m1 * t with m1 t ≡ r2 - r1 (mod m2)
    let t = ((r2 - r1) / g).rem_euclid(m2 / g) * eg.x.rem_euclid(m2 / g) % (m2 / g);
    Some(((r1 + m1 * t).rem_euclid(l), l))
}

/// Pairwise solvability test: `μ_s b_s* ≡ μ_t b_t* (mod gcd(a_s, a_t))` for all `s, t`.
pub fn pairwise_compatible(fibers: &[Fiber], mu: &[Sign]) -> Result<bool> {
    let targets: Vec<i64> = fibers
        .iter()
        .zip(mu)
        .map(|(f, &m)| Ok(m as i64 * mod_inverse(f.b, f.a)?))
        .collect::<Result<_>>()?;
    for s in 0..fibers.len() {
        for t in s + 1..fibers.len() {
            let g = fibers[s].a.gcd(&fibers[t].a);
            if (targets[s] - targets[t]).rem_euclid(g) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solutions `(γ, μ)` of the congruence system, with `γ ∈ {1, ..., A-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    /// Smallest solution `γ`; `None` only for the empty fiber list.
    pub gamma: Option<i64>,
    pub mu: Vec<Sign>,
    #[serde(rename = "modulus")]
    pub modulus_a: i64,
    #[serde(rename = "set_B")]
    pub full_set_b: Vec<(i64, Vec<Sign>)>,
    #[serde(rename = "cardinality_B")]
    pub cardinality_b: usize,
}

impl CongruenceCertificate {
    pub fn is_empty(&self) -> bool {
        self.full_set_b.is_empty()
    }

    /// Representatives of the orbits of `(γ, μ) ↦ (A - γ, -μ)`: the elements with `μ_1 = +1`.
    pub fn orbit_representatives(&self) -> impl Iterator<Item = &(i64, Vec<Sign>)> {
        self.full_set_b
            .iter()
            .filter(|(_, mu)| mu.first() == Some(&1))
    }
}

/// The full solution set `B`, or `None` when it is empty.
///
/// For an empty fiber list the certificate is present with `A = 1` and empty `B`.
pub fn enumerate_b(fibers: &[Fiber]) -> Result<Option<CongruenceCertificate>> {
    for f in fibers {
        f.require_positive()?;
        mod_inverse(f.b, f.a)?;
    }
    let modulus_a = fibers.iter().fold(1i64, |acc, f| acc.lcm(&f.a));
    if fibers.is_empty() {
        return Ok(Some(CongruenceCertificate {
            gamma: None,
            mu: Vec::new(),
            modulus_a,
            full_set_b: Vec::new(),
            cardinality_b: 0,
        }));
    }
    let mut set = Vec::new();
    for mu in sign_vectors(fibers.len()) {
        if let Some((gamma, l)) = solve_system(fibers, &mu)? {
            debug_assert_eq!(l, modulus_a);
            if gamma >= 1 {
                set.push((gamma, mu));
            }
        }
    }
    if set.is_empty() {
        return Ok(None);
    }
    set.sort();
    let (gamma, mu) = set[0].clone();
    Ok(Some(CongruenceCertificate {
        gamma: Some(gamma),
        mu,
        modulus_a,
        cardinality_b: set.len(),
        full_set_b: set,
    }))
}

/// Which sufficient condition for the congruence hypothesis holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisCase {
    /// No fibers: the hypothesis holds vacuously and `B` is empty.
    NoFibers,
    /// (a) pairwise coprime `a_j`.
    PairwiseCoprime,
    /// (b) all `a_j` equal with compatible `μ_j b_j*`.
    EqualModuli,
    /// (c) the general pairwise-gcd criterion.
    PairwiseGcd,
    /// (d) no solution.
    NoSolution,
}

impl HypothesisCase {
    pub fn label(self) -> &'static str {
        match self {
            HypothesisCase::NoFibers => "none",
            HypothesisCase::PairwiseCoprime => "a",
            HypothesisCase::EqualModuli => "b",
            HypothesisCase::PairwiseGcd => "c",
            HypothesisCase::NoSolution => "d",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub case: HypothesisCase,
    pub label: String,
    pub certificate: Option<CongruenceCertificate>,
    pub warnings: Vec<String>,
}

pub fn classify_hypothesis(symbol: &SeifertSymbol) -> Result<Classification> {
    let fibers = symbol.fibers();
    let certificate = enumerate_b(fibers)?;
    let mut warnings = Vec::new();
    if !symbol.has_boundary() {
        warnings
            .push("symbol is closed; the hypothesis concerns manifolds with boundary".to_string());
    }

    let coprime = (0..fibers.len())
        .all(|s| (s + 1..fibers.len()).all(|t| fibers[s].a.gcd(&fibers[t].a) == 1));
    let equal = fibers.windows(2).all(|w| w[0].a == w[1].a);

    let case = match &certificate {
        _ if fibers.is_empty() => HypothesisCase::NoFibers,
        None => HypothesisCase::NoSolution,
        Some(_) if coprime => HypothesisCase::PairwiseCoprime,
        Some(_) if equal => HypothesisCase::EqualModuli,
        Some(_) => HypothesisCase::PairwiseGcd,
    };
    if case == HypothesisCase::NoFibers {
        warnings.push("no exceptional fibers: the lower bound degenerates (n = 0)".to_string());
    }
    if let Some(cert) = &certificate {
        if cert.modulus_a % 2 == 0 {
            warnings.push(format!(
                "A = {} is even, so r = kA is never odd; certificate-based checks need odd r",
                cert.modulus_a
            ));
        }
    }
    Ok(Classification {
        case,
        label: case.label().to_string(),
        certificate,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::Epsilon;
    use proptest::prelude::*;

    fn fibers(pairs: &[(i64, i64)]) -> Vec<Fiber> {
        pairs.iter().map(|&(a, b)| Fiber::new(a, b)).collect()
    }

    /// Brute-force inverse by exhaustive search over residues.
    fn inverse_oracle(b: i64, a: i64) -> Option<i64> {
        (0..a).find(|x| (b * x - 1).rem_euclid(a) == 0)
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(1, 5).unwrap(), 1);
        assert_eq!(mod_inverse(3, 5).unwrap(), 2);
        assert_eq!(mod_inverse(-1, 5).unwrap(), 4);
        assert_eq!(mod_inverse(7, 1).unwrap(), 0);
        assert_eq!(mod_inverse(2, 4).unwrap_err().code(), "not-invertible");
    }

    #[test]
    fn mod_inverse_matches_search() {
        for a in 2..40 {
            for b in -40..40 {
                match inverse_oracle(b, a) {
                    Some(x) => assert_eq!(mod_inverse(b, a).unwrap(), x, "b={b} a={a}"),
                    None => assert!(mod_inverse(b, a).is_err()),
                }
            }
        }
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(1, 1).unwrap(), Rational::ZERO);
        assert_eq!(dedekind_sum(1, 2).unwrap(), Rational::ZERO);
        assert_eq!(dedekind_sum(1, 3).unwrap(), Rational::new(1, 18));
        assert!(dedekind_sum(2, 4).is_err());
        assert!(dedekind_sum(1, 0).is_err());
    }

    #[test]
    fn dedekind_closed_form_for_unit_numerator() {
        // s(1, a) = (a-1)(a-2) / 12a
        for a in 1..200i128 {
            assert_eq!(
                dedekind_sum(1, a as i64).unwrap(),
                Rational::new((a - 1) * (a - 2), 12 * a)
            );
        }
    }

    #[test]
    fn dedekind_reciprocity_exact() {
        for a in 1..=50i64 {
            for b in 1..=50i64 {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let lhs = dedekind_sum(b, a).unwrap() + dedekind_sum(a, b).unwrap();
                let (a, b) = (a as i128, b as i128);
                let rhs = Rational::new(-1, 4) + Rational::new(a * a + b * b + 1, 12 * a * b);
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn dedekind_antisymmetric() {
        for a in 1..60 {
            for b in 1..60 {
                if a.gcd(&b) == 1 {
                    assert_eq!(dedekind_sum(-b, a).unwrap(), -dedekind_sum(b, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn solve_system_examples() {
        let f = fibers(&[(3, 1), (5, 1)]);
        assert_eq!(solve_system(&f, &[-1, -1]).unwrap(), Some((1, 15)));
        assert_eq!(solve_system(&f, &[1, 1]).unwrap(), Some((14, 15)));
        let f = fibers(&[(5, 1), (5, 3)]);
        for mu in sign_vectors(2) {
            assert_eq!(solve_system(&f, &mu).unwrap(), None);
        }
    }

    #[test]
    fn enumerate_b_examples() {
        let cert = enumerate_b(&fibers(&[(3, 1), (5, 1)])).unwrap().unwrap();
        assert_eq!(cert.cardinality_b, 4);
        assert_eq!(cert.modulus_a, 15);
        let gammas: Vec<i64> = cert.full_set_b.iter().map(|(g, _)| *g).collect();
        assert_eq!(gammas, vec![1, 4, 11, 14]);
        assert_eq!(cert.gamma, Some(1));
        assert_eq!(cert.mu, vec![-1, -1]);
        assert_eq!(cert.orbit_representatives().count(), 2);

        let cert = enumerate_b(&fibers(&[(2, 1), (3, 1), (5, 1)]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.cardinality_b, 8);

        assert!(enumerate_b(&fibers(&[(5, 1), (5, 3)])).unwrap().is_none());

        let empty = enumerate_b(&[]).unwrap().unwrap();
        assert_eq!(empty.modulus_a, 1);
        assert!(empty.is_empty());
    }

    #[test]
    fn trivial_fibers_contribute_free_signs() {
        let cert = enumerate_b(&fibers(&[(3, 1), (1, 0)])).unwrap().unwrap();
        assert_eq!(cert.cardinality_b, 4);
    }

    #[test]
    fn certificate_serialization_fields() {
        let cert = enumerate_b(&fibers(&[(3, 1)])).unwrap().unwrap();
        let v: serde_json::Value = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["gamma"], 1);
        assert_eq!(v["modulus"], 3);
        assert_eq!(v["set_B"], serde_json::json!([[1, [-1]], [2, [1]]]));
        assert_eq!(v["cardinality_B"], 2);
    }

    #[test]
    fn classify_examples() {
        let s = SeifertSymbol::bounded(Epsilon::Orientable, 1, &[(2, 1), (3, 1), (5, 1)]).unwrap();
        let c = classify_hypothesis(&s).unwrap();
        assert_eq!(c.case, HypothesisCase::PairwiseCoprime);
        assert_eq!(c.certificate.as_ref().unwrap().cardinality_b, 8);
        assert!(c.warnings.iter().any(|w| w.contains("A = 30 is even")));

        let s = SeifertSymbol::bounded(Epsilon::Orientable, 1, &[(4, 1), (4, 1)]).unwrap();
        let c = classify_hypothesis(&s).unwrap();
        assert_eq!(c.case, HypothesisCase::EqualModuli);
        assert_eq!(
            c.certificate.unwrap().full_set_b,
            vec![(1, vec![-1, -1]), (3, vec![1, 1])]
        );

        let s = SeifertSymbol::bounded(Epsilon::Orientable, 1, &[(5, 1), (5, 3)]).unwrap();
        let c = classify_hypothesis(&s).unwrap();
        assert_eq!(c.case, HypothesisCase::NoSolution);
        assert!(c.certificate.is_none());

        let s = SeifertSymbol::bounded(Epsilon::Orientable, 1, &[(3, 1), (9, 2), (5, 1)]).unwrap();
        let c = classify_hypothesis(&s).unwrap();
        assert_eq!(c.case, HypothesisCase::PairwiseGcd);
    }

    fn brute_force(fibers: &[Fiber], mu: &[Sign]) -> Option<i64> {
        let a_lcm = fibers.iter().fold(1i64, |acc, f| acc.lcm(&f.a));
        (0..a_lcm).find(|g| {
            fibers.iter().zip(mu).all(|(f, &m)| {
                (g + m as i64 * inverse_oracle(f.b, f.a).unwrap()).rem_euclid(f.a) == 0
            })
        })
    }

    fn arb_fibers() -> impl Strategy<Value = Vec<Fiber>> {
        prop::collection::vec(
            (1i64..12, -30i64..30).prop_filter("coprime", |(a, b)| a.gcd(b) == 1),
            0..4,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(a, b)| Fiber::new(a, b))
                .collect::<Vec<_>>()
        })
        .prop_filter("A <= 1000", |f| {
            f.iter().fold(1i64, |acc, x| acc.lcm(&x.a)) <= 1000
        })
    }

    proptest! {
        #[test]
        fn solve_system_matches_brute_force(f in arb_fibers(), bits in 0u64..16) {
            let mu: Vec<Sign> = (0..f.len()).map(|j| if bits >> j & 1 == 0 { 1 } else { -1 }).collect();
            let got = solve_system(&f, &mu).unwrap().map(|(g, _)| g);
            prop_assert_eq!(got, brute_force(&f, &mu));
            prop_assert_eq!(got.is_some(), pairwise_compatible(&f, &mu).unwrap());
        }

        #[test]
        fn certificate_invariants(f in arb_fibers()) {
            if let Some(cert) = enumerate_b(&f).unwrap() {
                prop_assert_eq!(cert.cardinality_b, cert.full_set_b.len());
                for (g, mu) in &cert.full_set_b {
                    prop_assert!(*g >= 1 && *g < cert.modulus_a);
                    for (fib, &m) in f.iter().zip(mu) {
                        let bs = mod_inverse(fib.b, fib.a).unwrap();
                        prop_assert_eq!((g + m as i64 * bs).rem_euclid(fib.a), 0);
                    }
                }
            }
        }

        #[test]
        fn pairwise_coprime_gives_two_to_the_n(seed in 0usize..6, bs in prop::collection::vec(1i64..100, 4)) {
            let moduli = [[3i64, 5, 7, 11], [2, 9, 5, 7], [4, 3, 5, 13], [7, 9, 11, 13], [3, 5, 8, 11], [5, 7, 9, 16]][seed];
            let f: Vec<Fiber> = moduli.iter().zip(&bs)
                .filter(|(a, b)| a.gcd(b) == 1)
                .map(|(&a, &b)| Fiber::new(a, b))
                .collect();
            let cert = enumerate_b(&f).unwrap().unwrap();
            if f.is_empty() {
                prop_assert_eq!(cert.cardinality_b, 0);
            } else {
                prop_assert_eq!(cert.cardinality_b, 1usize << f.len());
            }
        }
    }
}
