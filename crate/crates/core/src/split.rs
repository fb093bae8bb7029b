//! Splits of the ground set into disjoint equal blocks, the exact counting
//! identity for families hitting each block once, and the good-split search.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{choose, Interval};
use crate::family::{k_subsets, ElementSet, SetFamily, Universe};
use crate::verdict::{Holds, Value, VerdictReport, Witness};

pub const CLAIM_SPLIT_IDENTITY: &str = "lemma-3.1";
pub const CLAIM_SPLIT_FIND: &str = "corollary-3.2";
pub const CLAIM_SPLIT_SPARSITY: &str = "eq-3.1";

/// Default number of randomized restarts in [`split2_find`].
pub const DEFAULT_RESTARTS: u64 = 10_000;
/// Unordered full splits up to which [`split2_find`] searches exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 200_000;

/// Ordered tuple of pairwise-disjoint `d`-sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitVector {
    blocks: Vec<ElementSet>,
    d: u32,
}

impl SplitVector {
    pub fn new(universe: Universe, d: u32, blocks: Vec<ElementSet>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("block size d must be positive".into()));
        }
        let mut seen = ElementSet::EMPTY;
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != d {
                return Err(Error::InvalidArgument(format!("block {} has {} elements, expected {d}", i + 1, b.len())));
            }
            if !b.is_subset(&universe.full_set()) {
                return Err(Error::InvalidArgument(format!("block {} leaves 1..={}", i + 1, universe.n())));
            }
            if !b.is_disjoint(&seen) {
                return Err(Error::InvalidArgument(format!("block {} overlaps an earlier block", i + 1)));
            }
            seen = seen.union(b);
        }
        Ok(SplitVector { blocks, d })
    }

    pub fn empty(d: u32) -> Self {
        SplitVector { blocks: Vec::new(), d }
    }

    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn j(&self) -> usize {
        self.blocks.len()
    }

    pub fn support(&self) -> ElementSet {
        self.blocks.iter().fold(ElementSet::EMPTY, |a, b| a.union(b))
    }

    /// `U` meets every block in exactly one element.
    pub fn hits(&self, u: &ElementSet) -> bool {
        hits(&self.blocks, u)
    }
}

impl std::fmt::Display for SplitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

fn hits(blocks: &[ElementSet], u: &ElementSet) -> bool {
    blocks.iter().all(|b| b.intersection(u).len() == 1)
}

/// `F_X`: members meeting each block exactly once, weights preserved.
pub fn family_on_split(f: &SetFamily, s: &SplitVector) -> Result<SetFamily> {
    if !s.support().is_subset(&f.universe().full_set()) {
        return Err(Error::InvalidArgument(format!("split {s} leaves 1..={}", f.n())));
    }
    Ok(f.filter(|u| s.hits(u)))
}

/// `||F_X||` without materializing the subfamily.
fn split_size(f: &SetFamily, blocks: &[ElementSet]) -> BigRational {
    if f.is_unit_weighted() {
        return BigRational::from_integer(f.sets().iter().filter(|u| hits(blocks, u)).count().into());
    }
    let mut total = BigRational::zero();
    for (i, u) in f.sets().iter().enumerate() {
        if hits(blocks, u) {
            total += f.weight(i);
        }
    }
    total
}

/// Number of ordered split vectors with `j` blocks of size `d`: `prod_{i<j} C(n - d i, d)`.
pub fn count_ordered_splits(n: u32, d: u32, j: u32) -> BigUint {
    (0..j).map(|i| choose(n.saturating_sub(d * i) as u64, d as u64)).product()
}

/// Visit every ordered split vector with `j` blocks of size `d` in `{1..n}`.
pub fn for_each_split<V: FnMut(&[ElementSet])>(n: u32, d: u32, j: u32, mut visit: V) {
    fn go<V: FnMut(&[ElementSet])>(n: u32, d: u32, j: u32, used: ElementSet, blocks: &mut Vec<ElementSet>, visit: &mut V) {
        if blocks.len() as u32 == j {
            visit(blocks);
            return;
        }
        for b in k_subsets(n - used.len(), d) {
            let b = b.expand(&used);
            blocks.push(b);
            go(n, d, j, used.union(&b), blocks, visit);
            blocks.pop();
        }
    }
    if d * j > n {
        return;
    }
    go(n, d, j, ElementSet::EMPTY, &mut Vec::with_capacity(j as usize), &mut visit);
}

/// `sum_X |F_X|` for unit weights and at most 128 members: the members still
/// hitting every chosen block once ride along as a bit mask.
fn unit_split_hits(f: &SetFamily, d: u32, j: u32) -> u128 {
    fn blocks(rem: u128, d: u32, from: u32, block: u128, visit: &mut dyn FnMut(u128)) {
        if d == 0 {
            visit(block);
            return;
        }
        let mut avail = rem >> from << from;
        while avail != 0 {
            let e = avail.trailing_zeros();
            avail &= avail - 1;
            if (rem >> e).count_ones() < d {
                break;
            }
            blocks(rem, d - 1, e + 1, block | 1 << e, visit);
        }
    }
    fn go(sets: &[u128], rem: u128, d: u32, left: u32, alive: u128, total: &mut u128) {
        if left == 0 {
            *total += alive.count_ones() as u128;
            return;
        }
        if alive == 0 {
            return;
        }
        blocks(rem, d, 0, 0, &mut |b| {
            let mut keep = 0u128;
            let mut a = alive;
            while a != 0 {
                let i = a.trailing_zeros();
                a &= a - 1;
                if (sets[i as usize] & b).count_ones() == 1 {
                    keep |= 1 << i;
                }
            }
            go(sets, rem & !b, d, left - 1, keep, total);
        });
    }
    if d * j > f.n() {
        return 0;
    }
    let sets: Vec<u128> = f.sets().iter().map(|s| s.bits()).collect();
    let alive = if sets.len() == 128 { u128::MAX } else { (1u128 << sets.len()) - 1 };
    let mut total = 0;
    go(&sets, f.universe().full_set().bits(), d, j, alive, &mut total);
    total
}

fn block_size(f: &SetFamily) -> Result<u32> {
    let (n, m) = (f.n(), f.m());
    if m == 0 || n % m != 0 || n / m < 2 {
        return Err(Error::precondition("d = n/m integral and >= 2", format!("n = {n}, m = {m}")));
    }
    Ok(n / m)
}

/// `d^j C(n - d j, m - j) (||F|| / C(n, m)) prod_{i<j} C(n - d i, d)`.
pub fn split1_rhs(n: u32, m: u32, d: u32, j: u32, size: &BigRational) -> BigRational {
    let int = |v: BigUint| BigRational::from_integer(BigInt::from(v));
    let dj = Pow::pow(BigInt::from(d), j);
    int(choose((n - d * j) as u64, (m - j) as u64)) * BigRational::from_integer(dj) * size / int(choose(n as u64, m as u64))
        * int(count_ordered_splits(n, d, j))
}

/// Exact check of `|T_{F,j}| = sum_X ||F_X||` against its closed form, the
/// sum running over all ordered split vectors with `j` blocks.
pub fn split1_identity_check(f: &SetFamily, d: u32, j: u32) -> Result<VerdictReport> {
    let dd = block_size(f)?;
    if d != dd {
        return Err(Error::precondition("d = n/m", format!("d = {d}, n/m = {dd}")));
    }
    if j > f.m() {
        return Err(Error::precondition("0 <= j <= m", format!("j = {j}, m = {}", f.m())));
    }
    let lhs = if f.is_unit_weighted() && f.len() <= 128 {
        BigRational::from_integer(unit_split_hits(f, d, j).into())
    } else {
        let mut lhs = BigRational::zero();
        for_each_split(f.n(), d, j, |blocks| lhs += split_size(f, blocks));
        lhs
    };
    let rhs = split1_rhs(f.n(), f.m(), d, j, &f.size());
    let holds = Holds::from_bool(lhs == rhs);
    Ok(VerdictReport::new(CLAIM_SPLIT_IDENTITY, holds, Value::rational(lhs), Value::rational(rhs))
        .with_detail("splits", Value::uint(&count_ordered_splits(f.n(), d, j))))
}

/// `(n/m)^m ||F|| / C(n, m)`.
pub fn split2_bound(f: &SetFamily) -> BigRational {
    let (n, m) = (f.n(), f.m());
    let ratio = BigRational::new(n.into(), m.into());
    Pow::pow(&ratio, m as i32) * f.size() / BigRational::from_integer(BigInt::from(choose(n as u64, m as u64)))
}

/// Result of [`split2_find`].
#[derive(Debug, Clone)]
pub struct SplitSearch {
    pub split: SplitVector,
    pub size: BigRational,
    pub bound: BigRational,
    pub holds: Holds,
    pub exhaustive: bool,
}

impl SplitSearch {
    pub fn to_report(&self) -> VerdictReport {
        let mut r = VerdictReport::new(CLAIM_SPLIT_FIND, self.holds, Value::rational(self.size.clone()), Value::rational(self.bound.clone()))
            .with_witness(Witness::Text(self.split.to_string()));
        if !self.exhaustive && !self.holds.passed() {
            r = r.with_note("randomized search exhausted its budget; best split returned");
        }
        r
    }
}

/// Unordered full splits of `n` elements into blocks of size `d`: `n! / ((d!)^m m!)`.
pub fn count_unordered_splits(n: u32, d: u32) -> BigUint {
    let m = n / d;
    count_ordered_splits(n, d, m) / crate::exactmath::factorial(m as u64)
}

/// Visit each unordered full split once (blocks ordered by smallest element).
fn for_each_unordered<V: FnMut(&[ElementSet]) -> bool>(n: u32, d: u32, visit: &mut V) -> bool {
    fn go<V: FnMut(&[ElementSet]) -> bool>(n: u32, d: u32, used: ElementSet, blocks: &mut Vec<ElementSet>, visit: &mut V) -> bool {
        if used.len() == n {
            return visit(blocks);
        }
        let first = (1..=n).find(|e| !used.contains(*e)).expect("free element");
        let taken = used.with(first);
        for rest in k_subsets(n - taken.len(), d - 1) {
            let b = rest.expand(&taken).with(first);
            blocks.push(b);
            let stop = go(n, d, used.union(&b), blocks, visit);
            blocks.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(n, d, ElementSet::EMPTY, &mut Vec::new(), visit)
}

/// Local search: swap elements across blocks while `||F_X||` grows.
fn repair(f: &SetFamily, blocks: &mut [ElementSet], mut size: BigRational) -> BigRational {
    let n = f.n();
    let block_of = |blocks: &[ElementSet], e: u32| blocks.iter().position(|b| b.contains(e)).expect("covered");
    let mut improved = true;
    while improved {
        improved = false;
        for a in 1..=n {
            for c in a + 1..=n {
                let (ia, ic) = (block_of(blocks, a), block_of(blocks, c));
                if ia == ic {
                    continue;
                }
                let (oa, oc) = (blocks[ia], blocks[ic]);
                blocks[ia] = ElementSet::from_bits(oa.bits() & !(1u128 << (a - 1))).with(c);
                blocks[ic] = ElementSet::from_bits(oc.bits() & !(1u128 << (c - 1))).with(a);
                let s = split_size(f, blocks);
                if s > size {
                    size = s;
                    improved = true;
                } else {
                    blocks[ia] = oa;
                    blocks[ic] = oc;
                }
            }
        }
    }
    size
}

/// Find a full split with `||F_X|| >= (n/m)^m ||F|| / C(n, m)`. Exhaustive
/// when there are at most [`EXHAUSTIVE_LIMIT`] unordered splits; otherwise
/// `restarts` seeded random splits, each improved by local swaps.
pub fn split2_find(f: &SetFamily, restarts: u64, seed: u64) -> Result<SplitSearch> {
    let d = block_size(f)?;
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "empty family"));
    }
    let n = f.n();
    let universe = f.universe();
    let bound = split2_bound(f);
    let mut best: Option<(Vec<ElementSet>, BigRational)> = None;
    let exhaustive = count_unordered_splits(n, d) <= BigUint::from(EXHAUSTIVE_LIMIT);
    let mut consider = |blocks: &[ElementSet], size: BigRational| {
        if best.as_ref().map_or(true, |(_, s)| size > *s) {
            best = Some((blocks.to_vec(), size));
        }
    };
    if exhaustive {
        for_each_unordered(n, d, &mut |blocks| {
            let s = split_size(f, blocks);
            let done = s >= bound;
            consider(blocks, s);
            done
        });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut elems: Vec<u32> = (1..=n).collect();
        for _ in 0..restarts.max(1) {
            elems.shuffle(&mut rng);
            let mut blocks: Vec<ElementSet> =
                elems.chunks(d as usize).map(|c| ElementSet::from_elements(c.iter().copied()).expect("in range")).collect();
            let start = split_size(f, &blocks);
            let size = repair(f, &mut blocks, start);
            let done = size >= bound;
            consider(&blocks, size);
            if done {
                break;
            }
        }
    }
    let (blocks, size) = best.expect("at least one split visited");
    let split = SplitVector::new(universe, d, blocks)?;
    // verify independently of the search bookkeeping
    let verified = family_on_split(f, &split)?.size();
    if verified != size {
        return Err(Error::Consistency(format!("split size {verified} differs from search value {size}")));
    }
    let holds = Holds::from_bool(size >= bound);
    Ok(SplitSearch { split, size, bound, holds, exhaustive })
}

/// `kappa(F_X) < kappa(F) + m`, i.e. `||F|| / ||F_X|| < e^m`, with both
/// sparsities measured against `C(n, m)`.
pub fn split_sparsity_check(f: &SetFamily, s: &SplitVector, prec: u32) -> Result<VerdictReport> {
    let d = block_size(f)?;
    if s.d() != d || s.j() as u32 != f.m() {
        return Err(Error::precondition("full split with d = n/m", format!("split {s}")));
    }
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "empty family"));
    }
    let fx = family_on_split(f, s)?;
    let m = f.m();
    let kappa = f.sparsity();
    if fx.size().is_zero() {
        return Ok(VerdictReport::new(CLAIM_SPLIT_SPARSITY, Holds::Vacuous, Value::PosInfinity, Value::Absent)
            .with_witness(Witness::Text(s.to_string()))
            .with_note("F_X is empty"));
    }
    let kx = fx.sparsity();
    let ratio = f.size() / fx.size();
    let e_m = Interval::from_int(m, prec).exp();
    let holds = Holds::from_decision(Interval::from_rational(&ratio, prec).lt(&e_m));
    let lhs = kx.interval(prec).map(Value::Interval).unwrap_or(Value::PosInfinity);
    let rhs = match kappa.interval(prec) {
        Some(k) => Value::Interval(&k + &Interval::from_int(m, prec)),
        None => Value::PosInfinity,
    };
    let mut r = VerdictReport::new(CLAIM_SPLIT_SPARSITY, holds, lhs, rhs).with_witness(Witness::Text(s.to_string()));
    if holds == Holds::Inconclusive {
        r = r.with_note("inconclusive: widen precision");
    }
    Ok(r)
}

/// `|T_{F,m}| = d^m ||F|| / C(n,m) * |X_m|`, both sides as exact rationals.
pub fn full_split_count(f: &SetFamily) -> Result<(BigRational, BigRational)> {
    let d = block_size(f)?;
    let m = f.m();
    let mut lhs = BigRational::zero();
    for_each_split(f.n(), d, m, |blocks| lhs += split_size(f, blocks));
    let dm = BigRational::from_integer(Pow::pow(BigInt::from(d), m));
    let xm = BigRational::from_integer(BigInt::from(count_ordered_splits(f.n(), d, m)));
    let rhs = dm * f.size() / BigRational::from_integer(BigInt::from(choose(f.n() as u64, m as u64))) * xm;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRECISION as P;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn split(n: u32, d: u32, blocks: &[&[u32]]) -> SplitVector {
        SplitVector::new(Universe::new(n).unwrap(), d, blocks.iter().map(|b| ElementSet::of(b)).collect()).unwrap()
    }

    #[test]
    fn mask_count_matches_split_walk() {
        let mut rng = crate::gen::rng_from_seed(7);
        for (n, m) in [(4, 2), (6, 2), (6, 3), (8, 4), (9, 3)] {
            let d = n / m;
            for _ in 0..5 {
                let f = crate::gen::bernoulli_family(&mut rng, n, m, 0.5).unwrap();
                for j in 0..=m {
                    let mut walk = BigRational::zero();
                    for_each_split(n, d, j, |b| walk += split_size(&f, b));
                    assert_eq!(r(unit_split_hits(&f, d, j) as i64), walk, "n={n} m={m} j={j}");
                }
            }
        }
    }

    #[test]
    fn family_on_split_examples() {
        let full = SetFamily::full(4, 2).unwrap();
        let fx = family_on_split(&full, &split(4, 2, &[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(fx.canonical(), SetFamily::from_lists(4, 2, &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]]).unwrap().canonical());
        assert_eq!(family_on_split(&full, &SplitVector::empty(2)).unwrap(), full);
        let one = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        assert!(family_on_split(&one, &split(4, 2, &[&[1, 2]])).unwrap().is_empty());
        assert!(SplitVector::new(Universe::new(4).unwrap(), 2, vec![ElementSet::of(&[1, 2]), ElementSet::of(&[2, 3])]).is_err());
    }

    #[test]
    fn split1_examples() {
        let full = SetFamily::full(4, 2).unwrap();
        let rep = split1_identity_check(&full, 2, 1).unwrap();
        assert_eq!((rep.holds, rep.lhs.clone()), (Holds::True, Value::rational(r(24))));
        let rep = split1_identity_check(&full, 2, 0).unwrap();
        assert_eq!(rep.lhs, Value::rational(r(6)));
        let f = SetFamily::from_lists(6, 2, &[&[1, 4]]).unwrap();
        let rep = split1_identity_check(&f, 3, 1).unwrap();
        assert_eq!((rep.holds, rep.rhs), (Holds::True, Value::rational(r(12))));
        for j in 0..=2 {
            assert!(split1_identity_check(&f, 3, j).unwrap().holds.passed());
        }
        assert!(split1_identity_check(&f, 2, 1).is_err());
        assert!(split1_identity_check(&f, 3, 3).is_err());
        assert!(split1_identity_check(&SetFamily::full(5, 2).unwrap(), 2, 1).is_err());
        let (a, b) = full_split_count(&SetFamily::full(6, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn split2_examples() {
        let full = SetFamily::full(4, 2).unwrap();
        let s = split2_find(&full, 10, 0).unwrap();
        assert_eq!((s.bound.clone(), s.size.clone(), s.holds), (r(4), r(4), Holds::True));
        let f = SetFamily::from_lists(6, 2, &[&[1, 4], &[2, 5], &[3, 6]]).unwrap();
        let s = split2_find(&f, 10, 0).unwrap();
        assert_eq!(s.bound, BigRational::new(9.into(), 5.into()));
        assert!(s.size >= r(2));
        let fx = family_on_split(&f, &split(6, 3, &[&[1, 2, 3], &[4, 5, 6]])).unwrap();
        assert_eq!(fx.len(), 3);
        assert_eq!(count_unordered_splits(8, 2), BigUint::from(105u32));
    }

    #[test]
    fn randomized_search_meets_bound() {
        let f = SetFamily::full(16, 4).unwrap().filter(|u| u.contains(1) || u.contains(2));
        assert!(count_unordered_splits(16, 4) > BigUint::from(EXHAUSTIVE_LIMIT));
        let s = split2_find(&f, 50, 7).unwrap();
        assert!(!s.exhaustive);
        assert_eq!(s.holds, Holds::True);
    }

    #[test]
    fn sparsity_examples() {
        let full = SetFamily::full(4, 2).unwrap();
        let s = split(4, 2, &[&[1, 2], &[3, 4]]);
        assert_eq!(split_sparsity_check(&full, &s, P).unwrap().holds, Holds::True);
        let one = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        assert_eq!(split_sparsity_check(&one, &s, P).unwrap().holds, Holds::Vacuous);
    }
}
