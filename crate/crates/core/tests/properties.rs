use num_complex::Complex64;
use proptest::prelude::*;
use seifert_tv::rt::{rt_closed, z_direct, z_double_simplified};
use seifert_tv::tv::{tv_bounded, tv_closed};
use seifert_tv::{Epsilon, Fiber, SeifertSymbol};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-12)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn fiber() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=7, -9i64..=9).prop_filter("coprime", |&(a, b)| gcd(a, b) == 1)
}

fn closed_symbol() -> impl Strategy<Value = SeifertSymbol> {
    (
        any::<bool>(),
        1i64..=2,
        prop::collection::vec(fiber(), 0..=3),
    )
        .prop_map(|(o, g, fs)| {
            let eps = if o {
                Epsilon::Orientable
            } else {
                Epsilon::NonOrientable
            };
            let fibers = fs.into_iter().map(|(a, b)| Fiber::new(a, b)).collect();
            SeifertSymbol::new(eps, g, fibers, false).unwrap()
        })
}

fn level() -> impl Strategy<Value = u32> {
    (1u32..=6).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversal_conjugates(s in closed_symbol(), r in level()) {
        let a = rt_closed(&s, r).unwrap();
        let b = rt_closed(&s.reverse_orientation(), r).unwrap();
        let scale = a.term_magnitude_sum.max(1.0);
        prop_assert!((b.value - a.value.conj()).norm() < 1e-9 * scale, "{} r={}: {} vs {}", s, r, a.value, b.value);
    }

    #[test]
    fn normalization_preserves_rt(s in closed_symbol(), r in level()) {
        let a = rt_closed(&s, r).unwrap();
        let b = rt_closed(&s.normalize(), r).unwrap();
        let scale = a.term_magnitude_sum.max(1.0);
        prop_assert!((a.value - b.value).norm() < 1e-9 * scale, "{} r={}", s, r);
    }

    #[test]
    fn tv_is_nonnegative_and_real(s in closed_symbol(), r in level()) {
        let tv = tv_closed(&s, r).unwrap();
        prop_assert!(tv.value >= 0.0);
        prop_assert_eq!(tv.imaginary_residue, 0.0);
    }

    #[test]
    fn double_has_real_rt(fs in prop::collection::vec(fiber(), 0..=2), r in level()) {
        let fibers: Vec<Fiber> = fs.into_iter().map(|(a, b)| Fiber::new(a, b)).collect();
        let m = SeifertSymbol::new(Epsilon::Orientable, 1, fibers, true).unwrap();
        prop_assert!(tv_bounded(&m, r).is_ok(), "{} r={}", m, r);
    }
}

/// Every bounded symbol with odd pairwise-coprime `a_j` from a small pool,
/// at the smallest odd multiple of `A` that is at least 3.
#[test]
fn simplified_matches_direct_on_small_coprime_symbols() {
    let pool = [(3, 1), (3, 2), (5, 1), (5, 2), (5, 3), (7, 1), (7, 4)];
    let mut checked = 0;
    for (i, &f1) in pool.iter().enumerate() {
        for &f2 in &pool[i..] {
            if gcd(f1.0, f2.0) != 1 {
                continue;
            }
            let m = SeifertSymbol::bounded(Epsilon::Orientable, 1, &[f1, f2]).unwrap();
            let r = (f1.0 * f2.0) as u32;
            let a = z_double_simplified(&m, r).unwrap();
            let b = z_direct(&m.double().unwrap(), r).unwrap();
            assert!(
                rel(a.value, b.value) < 1e-9,
                "{m} r={r}: {} vs {}",
                a.value,
                b.value
            );
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn simplified_matches_direct_for_non_orientable_base() {
    let m = SeifertSymbol::bounded(Epsilon::NonOrientable, 1, &[(3, 1), (5, 2)]).unwrap();
    for r in [15, 45] {
        let a = z_double_simplified(&m, r).unwrap();
        let b = z_direct(&m.double().unwrap(), r).unwrap();
        assert!(
            rel(a.value, b.value) < 1e-9,
            "r={r}: {} vs {}",
            a.value,
            b.value
        );
    }
}
