//! `l`-extensions of a family, the lower bound on their size, and the
//! sparsity comparisons between a family, its extensions and complements.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactmath::{choose, factorial, Interval};
use crate::family::{k_subsets, ElementSet, SetFamily, Sparsity, Universe};
use crate::verdict::{Holds, Value, VerdictReport};

pub const CLAIM_EXT_LOWER: &str = "eq-1.1";
pub const CLAIM_PHASE2: &str = "lemma-2.3";
pub const CLAIM_EXT_SPARSITY: &str = "remarks-a-b";

/// `Ext(F, l)` together with its size.
#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub l: u32,
    /// The `l`-sets containing some member, lexicographically sorted.
    pub family: SetFamily,
    pub count: BigUint,
}

/// How [`ext_with`] enumerates the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtStrategy {
    /// Enumerate the `l`-supersets of each member and deduplicate.
    Supersets,
    /// Scan every `l`-set and test containment.
    Scan,
    /// Pick whichever of the two is cheaper for the given sizes.
    Auto,
}

fn check_l(f: &SetFamily, l: u32) -> Result<()> {
    if l < f.m() || l > f.n() {
        return Err(Error::InvalidArgument(format!("need m <= l <= n, got m = {}, l = {l}, n = {}", f.m(), f.n())));
    }
    Ok(())
}

/// Place the bits of `compact` onto the given positions (bit `i` of
/// `compact` goes to bit `positions[i]`).
fn scatter(compact: u128, positions: &[u32]) -> u128 {
    let mut out = 0u128;
    let mut c = compact;
    while c != 0 {
        let i = c.trailing_zeros() as usize;
        out |= 1u128 << positions[i];
        c &= c - 1;
    }
    out
}

/// All `l`-subsets of `[n]` containing `base`.
pub fn supersets(base: ElementSet, n: u32, l: u32) -> impl Iterator<Item = ElementSet> {
    let free: Vec<u32> = (0..n).filter(|&b| base.bits() >> b & 1 == 0).collect();
    let extra = l.checked_sub(base.len());
    let count = free.len() as u32;
    let iter = extra.map(|e| k_subsets(count, e));
    iter.into_iter().flatten().map(move |c| ElementSet::from_bits(base.bits() | scatter(c.bits(), &free)))
}

fn superset_cost(f: &SetFamily, l: u32) -> f64 {
    f.len() as f64 * choose((f.n() - f.m()) as u64, (l - f.m()) as u64).to_f64().unwrap_or(f64::MAX)
}

fn scan_cost(f: &SetFamily, l: u32) -> f64 {
    choose(f.n() as u64, l as u64).to_f64().unwrap_or(f64::MAX) * (1.0 + f.len() as f64 / 4.0)
}

pub fn ext(f: &SetFamily, l: u32) -> Result<ExtensionResult> {
    ext_with(f, l, ExtStrategy::Auto)
}

pub fn ext_with(f: &SetFamily, l: u32, strategy: ExtStrategy) -> Result<ExtensionResult> {
    check_l(f, l)?;
    let strategy = match strategy {
        ExtStrategy::Auto if superset_cost(f, l) <= scan_cost(f, l) => ExtStrategy::Supersets,
        ExtStrategy::Auto => ExtStrategy::Scan,
        s => s,
    };
    let mut sets: Vec<ElementSet> = match strategy {
        ExtStrategy::Supersets => {
            let mut seen = HashSet::new();
            for u in f.sets() {
                seen.extend(supersets(*u, f.n(), l));
            }
            seen.into_iter().collect()
        }
        _ => k_subsets(f.n(), l).filter(|y| f.sets().iter().any(|u| u.is_subset(y))).collect(),
    };
    sets.sort();
    let count = BigUint::from(sets.len());
    let family = SetFamily::from_parts_unchecked(f.universe(), l, sets, None);
    Ok(ExtensionResult { l, family, count })
}

/// `|Ext(F, l)|` without materializing the family.
pub fn ext_count(f: &SetFamily, l: u32) -> Result<u64> {
    check_l(f, l)?;
    if superset_cost(f, l) <= scan_cost(f, l) {
        let mut seen = HashSet::new();
        for u in f.sets() {
            seen.extend(supersets(*u, f.n(), l).map(|s| s.bits()));
        }
        Ok(seen.len() as u64)
    } else {
        Ok(k_subsets(f.n(), l).filter(|y| f.sets().iter().any(|u| u.is_subset(y))).count() as u64)
    }
}

/// Enclosure of `C(n,l) [1 - m exp(-(l-m+1)|F| / (8 m! C(n,m)))]`.
pub fn ext_lower_bound_rhs(n: u32, m: u32, l: u32, family_len: usize, prec: u32) -> Interval {
    let num = BigInt::from((l - m + 1) as u64) * BigInt::from(family_len);
    let den = BigInt::from(8u32) * BigInt::from(factorial(m as u64)) * BigInt::from(choose(n as u64, m as u64));
    let arg = Interval::from_rational(&BigRational::new(-num, den), prec).exp();
    let inner = &Interval::from_int(1, prec) - &(&Interval::from_int(m, prec) * &arg);
    &Interval::from_biguint(&choose(n as u64, l as u64), prec) * &inner
}

/// Decide `count >= rhs`, reporting "vacuous" when `rhs <= 0`.
pub fn ext_lower_bound_verdict(count: &BigUint, rhs: &Interval) -> Holds {
    if rhs.hi().signum() <= 0 {
        return Holds::Vacuous;
    }
    let c = Interval::from_biguint(count, rhs.precision());
    Holds::from_decision(rhs.le(&c))
}

/// The lower bound on `|Ext(F, l)|` for a nonempty family.
pub fn ext_lower_bound_check(f: &SetFamily, l: u32, prec: u32) -> Result<VerdictReport> {
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "the bound needs at least one member"));
    }
    check_l(f, l)?;
    let count = BigUint::from(ext_count(f, l)?);
    let rhs = ext_lower_bound_rhs(f.n(), f.m(), l, f.len(), prec);
    let holds = ext_lower_bound_verdict(&count, &rhs);
    let mut r = VerdictReport::new(CLAIM_EXT_LOWER, holds, Value::uint(&count), Value::Interval(rhs));
    if holds == Holds::Inconclusive {
        r = r.with_note("inconclusive: widen precision");
    }
    Ok(r)
}

fn sparsity_value(s: &Sparsity, prec: u32) -> Value {
    match s.interval(prec) {
        Some(iv) => Value::Interval(iv),
        None => Value::PosInfinity,
    }
}

/// Both sides of the complement comparison from the sizes involved: `a` is
/// the size of a subfamily of `(X choose 2m)`, `b` of `(X choose m)`.
/// Returns `(kappa_a, 2 kappa_b)`.
pub fn phase2_sides(n: u32, m: u32, a: &BigUint, b: &BigUint) -> (Sparsity, Sparsity) {
    let total_2m = BigRational::from_integer(BigInt::from(choose(n as u64, 2 * m as u64)));
    let total_m = BigRational::from_integer(BigInt::from(choose(n as u64, m as u64)));
    let lhs = Sparsity::of(&total_2m, &BigRational::from_integer(BigInt::from(a.clone())));
    let rhs = Sparsity::of(&total_m, &BigRational::from_integer(BigInt::from(b.clone()))).scaled(2);
    (lhs, rhs)
}

/// `kappa[(X choose 2m) - Ext(F, 2m)] >= 2 kappa[(X choose m) - F]`,
/// decided exactly with `+inf` for empty families.
pub fn phase2_check(f: &SetFamily, prec: u32) -> Result<VerdictReport> {
    if 2 * f.m() > f.n() {
        return Err(Error::precondition("m <= n/2", format!("m = {}, n = {}", f.m(), f.n())));
    }
    let (n, m) = (f.n(), f.m());
    let ext_size = ext_count(f, 2 * m)?;
    let a = choose(n as u64, 2 * m as u64) - BigUint::from(ext_size);
    let b = choose(n as u64, m as u64) - BigUint::from(f.len());
    let (lhs, rhs) = phase2_sides(n, m, &a, &b);
    let holds = Holds::from_bool(lhs >= rhs);
    Ok(VerdictReport::new(CLAIM_PHASE2, holds, sparsity_value(&lhs, prec), sparsity_value(&rhs, prec))
        .with_detail("complement_2m_size", Value::uint(&a))
        .with_detail("complement_m_size", Value::uint(&b)))
}

/// Sparsity never increases under extension, also after adjoining `p`
/// fresh elements `n+1..n+p` to the universe.
///
/// Part A compares `kappa(Ext(F, l))` with `kappa(F)`; part B compares the
/// sparsity of `Ext(F, m+p)` inside the enlarged universe with `kappa(F)`.
/// Both use member counts (unit weights).
pub fn ext_sparsity_checks(f: &SetFamily, l: u32, p: u32, prec: u32) -> Result<VerdictReport> {
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "sparsity of an empty family is infinite"));
    }
    check_l(f, l)?;
    let (n, m) = (f.n(), f.m());
    let big_n = n + p;
    let big = Universe::new(big_n)?;
    let size = BigRational::from_integer(BigInt::from(f.len()));
    let kappa_f = Sparsity::of(&BigRational::from_integer(BigInt::from(choose(n as u64, m as u64))), &size);

    let count_a = ext_count(f, l)?;
    let kappa_a = Sparsity::of(
        &BigRational::from_integer(BigInt::from(choose(n as u64, l as u64))),
        &BigRational::from_integer(BigInt::from(count_a)),
    );
    let holds_a = Holds::from_bool(kappa_a <= kappa_f);

    let lifted = SetFamily::from_parts_unchecked(big, m, f.sets().to_vec(), None);
    let count_b = ext_count(&lifted, m + p)?;
    let kappa_b = Sparsity::of(
        &BigRational::from_integer(BigInt::from(choose(big_n as u64, (m + p) as u64))),
        &BigRational::from_integer(BigInt::from(count_b)),
    );
    let holds_b = Holds::from_bool(kappa_b <= kappa_f);

    let mut r = VerdictReport::new(CLAIM_EXT_SPARSITY, holds_a.and(holds_b), sparsity_value(&kappa_a, prec), sparsity_value(&kappa_f, prec))
        .with_detail("ext_count", Value::int(count_a))
        .with_detail("fresh_ext_count", Value::int(count_b))
        .with_detail("fresh_ext_kappa", sparsity_value(&kappa_b, prec));
    if !holds_a.passed() {
        r = r.with_note("extension sparsity exceeds family sparsity");
    }
    if !holds_b.passed() {
        r = r.with_note("fresh-element extension sparsity exceeds family sparsity");
    }
    Ok(r)
}

/// Exact threshold `C(n,l) e^{-kappa(F)} = C(n,l) ||F|| / C(n,m)` implied by
/// sparsity monotonicity.
pub fn ext_count_floor(f: &SetFamily, l: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(choose(f.n() as u64, l as u64))) * f.size()
        / BigRational::from_integer(BigInt::from(choose(f.n() as u64, f.m() as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRECISION as P;

    #[test]
    fn ext_examples() {
        let f = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        let e = ext(&f, 3).unwrap();
        assert_eq!(e.family.sets(), &[ElementSet::of(&[1, 2, 3]), ElementSet::of(&[1, 2, 4])]);
        assert_eq!(e.count, BigUint::from(2u32));
        let f = SetFamily::from_lists(4, 2, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(ext(&f, 3).unwrap().count, BigUint::from(4u32));
        assert_eq!(ext(&f, 4).unwrap().family.sets(), &[ElementSet::full(4)]);
        let empty = SetFamily::empty(Universe::new(4).unwrap(), 2);
        assert_eq!(ext(&empty, 4).unwrap().count, BigUint::from(0u32));
        assert!(ext(&f, 1).is_err());
        assert!(ext(&f, 5).is_err());
    }

    #[test]
    fn strategies_agree() {
        let f = SetFamily::from_lists(7, 3, &[&[1, 2, 3], &[2, 4, 6], &[5, 6, 7]]).unwrap();
        for l in 3..=7 {
            let a = ext_with(&f, l, ExtStrategy::Supersets).unwrap();
            let b = ext_with(&f, l, ExtStrategy::Scan).unwrap();
            assert_eq!(a.family, b.family);
            assert_eq!(a.count, BigUint::from(ext_count(&f, l).unwrap()));
        }
    }

    #[test]
    fn lower_bound_examples() {
        let f = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        assert_eq!(ext_lower_bound_check(&f, 3, P).unwrap().holds, Holds::Vacuous);
        let full = SetFamily::full(4, 2).unwrap();
        assert!(ext_lower_bound_check(&full, 3, P).unwrap().holds.passed());
        assert!(ext_lower_bound_check(&full, 2, P).unwrap().holds.passed());
        let single = SetFamily::from_lists(6, 1, &[&[1], &[2], &[3]]).unwrap();
        assert_eq!(ext_lower_bound_check(&single, 3, P).unwrap().holds, Holds::True);
        assert!(ext_lower_bound_check(&SetFamily::empty(Universe::new(4).unwrap(), 2), 3, P).is_err());
    }

    #[test]
    fn phase2_examples() {
        let empty = SetFamily::empty(Universe::new(4).unwrap(), 2);
        assert_eq!(phase2_check(&empty, P).unwrap().holds, Holds::True);
        let all_but = SetFamily::full(4, 2).unwrap().filter(|s| *s != ElementSet::of(&[1, 2]));
        let r = phase2_check(&all_but, P).unwrap();
        assert_eq!(r.holds, Holds::True);
        assert_eq!(r.lhs, Value::PosInfinity);
        let f = SetFamily::from_lists(5, 3, &[&[1, 2, 3]]).unwrap();
        assert!(phase2_check(&f, P).is_err());
    }

    #[test]
    fn sparsity_remark_examples() {
        let full = SetFamily::full(4, 2).unwrap();
        assert_eq!(ext_sparsity_checks(&full, 3, 0, P).unwrap().holds, Holds::True);
        let f = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        let r = ext_sparsity_checks(&f, 3, 1, P).unwrap();
        assert_eq!(r.holds, Holds::True);
        assert_eq!(r.detail("ext_count"), Some(&Value::int(2)));
        assert_eq!(r.detail("fresh_ext_count"), Some(&Value::int(3)));
    }
}
