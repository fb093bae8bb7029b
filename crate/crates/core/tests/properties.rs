use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use sunflower_kit::exactmath::{choose, choose_u128, Interval};
use sunflower_kit::extension::ext_count;
use sunflower_kit::format::{parse_family, write_family};
use sunflower_kit::gamma::{gamma_unit_check, gamma_weighted_check};
use sunflower_kit::split::split1_identity_check;
use sunflower_kit::sunflower::find_sunflower;
use sunflower_kit::{ElementSet, Holds, SetFamily, Universe};

const PREC: u32 = 96;

fn rational(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `m`-uniform family on `n <= 8` elements chosen by a bit mask over all `m`-sets.
fn family() -> impl Strategy<Value = SetFamily> {
    (2u32..=8)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), any::<u64>()))
        .prop_map(|(n, m, mask)| {
            let all: Vec<ElementSet> = sunflower_kit::family::k_subsets(n, m).collect();
            let sets = all.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, s)| *s).collect();
            SetFamily::new(Universe::new(n).unwrap(), m, sets).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ln_encloses_float_value(p in 1u64..1_000_000, q in 1u64..1_000_000) {
        let x = Interval::from_rational(&rational(p, q), PREC);
        let ln = x.ln();
        let expect = (p as f64).ln() - (q as f64).ln();
        prop_assert!(ln.lo().to_f64() <= expect + 1e-9 && expect - 1e-9 <= ln.hi().to_f64());
        prop_assert!(ln.width().to_f64() < 1e-20);
    }

    #[test]
    fn exp_inverts_ln(p in 1u64..100_000, q in 1u64..100_000) {
        let r = rational(p, q);
        prop_assert!(Interval::from_rational(&r, PREC).ln().exp().contains_rational(&r));
    }

    #[test]
    fn ln_is_additive(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let (x, y) = (Interval::from_int(a, PREC), Interval::from_int(b, PREC));
        let sum = &x.ln() + &y.ln();
        prop_assert!(sum.intersects(&(&x * &y).ln()));
    }

    #[test]
    fn binomials_follow_pascal(x in 1u64..200, y in 0u64..200) {
        prop_assume!(y <= x);
        let below = if y == 0 { BigUint::from(0u8) } else { choose(x - 1, y - 1) };
        prop_assert_eq!(choose(x, y), below + choose(x - 1, y));
        prop_assert_eq!(choose(x, y), choose(x, x - y));
        if x <= 100 {
            prop_assert_eq!(BigUint::from(choose_u128(x as i64, y as i64)), choose(x, y));
        }
    }

    #[test]
    fn text_format_round_trips(f in family()) {
        let text = write_family(&f).unwrap();
        let back = parse_family(&text).unwrap();
        prop_assert_eq!(write_family(&back).unwrap(), text);
        prop_assert_eq!(back, f.canonical());
    }

    #[test]
    fn split_identity_always_holds(f in family()) {
        let d = f.n() / f.m();
        prop_assume!(d >= 2 && f.n() % f.m() == 0 && f.n() <= 7);
        for j in 0..=f.m() {
            prop_assert_eq!(split1_identity_check(&f, d, j).unwrap().holds, Holds::True);
        }
    }

    #[test]
    fn extension_count_is_bounded(f in family(), extra in 0u32..3) {
        let l = (f.m() + extra).min(f.n());
        let count = ext_count(&f, l).unwrap();
        let all = choose(f.n() as u64, l as u64);
        prop_assert!(BigUint::from(count) <= all);
        prop_assert_eq!(count == 0, f.is_empty());
        if l == f.m() {
            prop_assert_eq!(count as usize, f.len());
        }
    }

    #[test]
    fn set_condition_implies_weighted(f in family(), num in 11u64..40) {
        prop_assume!(!f.is_empty());
        let b = rational(num, 10);
        if gamma_unit_check(&f, &b).unwrap().holds == Holds::True {
            prop_assert!(gamma_weighted_check(&f, &b).unwrap().holds.passed());
        }
    }

    #[test]
    fn sunflowers_found_are_valid(f in family(), k in 2usize..5) {
        if let Some(s) = find_sunflower(&f, k, 10_000_000).unwrap() {
            prop_assert_eq!(s.petals.len(), k);
            prop_assert!(s.is_valid_in(&f));
        }
    }

    #[test]
    fn complement_is_an_involution(f in family()) {
        prop_assert_eq!(f.complement().complement().canonical(), f.canonical());
        let all = choose(f.n() as u64, f.m() as u64);
        prop_assert_eq!(BigUint::from(f.complement().len() + f.len()), all);
        prop_assert!(f.complement().sets().iter().all(|s| !f.contains(s)));
    }
}
