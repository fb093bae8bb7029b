//! Universes, bitset element sets, uniform set families and their basic
//! statistics (size, sparsity, restriction, intersection profile).

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{choose, Interval};

/// Largest supported universe; sets are stored as `u128` bitsets.
pub const UNIVERSE_CAP: u32 = 128;

/// The ground set `{1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    n: u32,
}

impl Universe {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, UNIVERSE_CAP)
    }

    /// Universe with a caller-chosen cap (at most [`UNIVERSE_CAP`]).
    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        let cap = cap.min(UNIVERSE_CAP);
        if n == 0 || n > cap {
            return Err(Error::InvalidArgument(format!("universe size must lie in 1..={cap}, got {n}")));
        }
        Ok(Universe { n })
    }

    /// Possibly empty universe, used for residual families after removing a core.
    pub(crate) fn sized(n: u32) -> Self {
        debug_assert!(n <= UNIVERSE_CAP);
        Universe { n }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }
}

/// A subset of `{1, ..., 128}` stored as a bitset; element `i` is bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u128) -> Self {
        ElementSet(bits)
    }

    /// `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        if n >= 128 {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << n) - 1)
        }
    }

    /// Build from 1-based element ids; ids outside `1..=128` are rejected.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elems: I) -> Result<Self> {
        let mut bits = 0u128;
        for e in elems {
            if e == 0 || e > UNIVERSE_CAP {
                return Err(Error::InvalidArgument(format!("element {e} out of range")));
            }
            bits |= 1u128 << (e - 1);
        }
        Ok(ElementSet(bits))
    }

    /// Panicking shorthand for literals in tests and examples.
    pub fn of(elems: &[u32]) -> Self {
        Self::from_elements(elems.iter().copied()).expect("element out of range")
    }

    pub fn bits(&self) -> u128 {
        self.0
    }

    pub fn len(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, e: u32) -> bool {
        e >= 1 && e <= 128 && self.0 >> (e - 1) & 1 == 1
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 & !other.0)
    }

    pub fn with(&self, e: u32) -> ElementSet {
        ElementSet(self.0 | 1u128 << (e - 1))
    }

    /// Largest element, if any.
    pub fn max(&self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(128 - self.0.leading_zeros())
        }
    }

    pub fn iter(&self) -> Elements {
        Elements(self.0)
    }

    pub fn elements(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Keep only positions not in `removed` and renumber the survivors
    /// consecutively, preserving order.
    pub fn compress(&self, removed: &ElementSet) -> ElementSet {
        let mut out = 0u128;
        let mut pos = 0u32;
        for bit in 0..128u32 {
            if removed.0 >> bit & 1 == 1 {
                continue;
            }
            if self.0 >> bit & 1 == 1 {
                out |= 1u128 << pos;
            }
            pos += 1;
        }
        ElementSet(out)
    }

    /// Inverse of [`compress`](Self::compress).
    pub fn expand(&self, removed: &ElementSet) -> ElementSet {
        let mut out = 0u128;
        let mut pos = 0u32;
        for bit in 0..128u32 {
            if removed.0 >> bit & 1 == 1 {
                continue;
            }
            if self.0 >> pos & 1 == 1 {
                out |= 1u128 << bit;
            }
            pos += 1;
        }
        ElementSet(out)
    }
}

/// Iterator over the elements of an [`ElementSet`] in ascending order.
#[derive(Debug, Clone)]
pub struct Elements(u128);

impl Iterator for Elements {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

/// Lexicographic order on the ascending element sequences.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let bit = diff.trailing_zeros();
        let above = |x: u128| if bit == 127 { 0 } else { x >> (bit + 1) };
        if self.0 >> bit & 1 == 1 {
            // `other` continues with something larger, or has ended.
            if above(other.0) == 0 { Ordering::Greater } else { Ordering::Less }
        } else if above(self.0) == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// All `k`-subsets of `{1, ..., n}` in colexicographic order (Gosper's hack).
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    let cur = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else if k == 128 {
        Some(u128::MAX)
    } else {
        Some((1u128 << k) - 1)
    };
    KSubsets { cur, n }
}

#[derive(Debug, Clone)]
pub struct KSubsets {
    cur: Option<u128>,
    n: u32,
}

impl Iterator for KSubsets {
    type Item = ElementSet;
    fn next(&mut self) -> Option<ElementSet> {
        let x = self.cur?;
        self.cur = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let next = (((r ^ x) >> 2) / c) | r;
                if self.n < 128 && next >> self.n != 0 { None } else { Some(next) }
            }
        };
        Some(ElementSet(x))
    }
}

/// All subsets of `mask` (including the empty set and `mask` itself).
pub fn submasks(mask: ElementSet) -> impl Iterator<Item = ElementSet> {
    let m = mask.0;
    let mut cur = Some(m);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == 0 { None } else { Some((s - 1) & m) };
        Some(ElementSet(s))
    })
}

/// A uniform family of distinct `m`-sets with optional nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    universe: Universe,
    m: u32,
    sets: Vec<ElementSet>,
    weights: Option<Vec<BigRational>>,
}

impl SetFamily {
    /// Validated unit-weight family.
    pub fn new(universe: Universe, m: u32, sets: Vec<ElementSet>) -> Result<Self> {
        Self::build(universe, m, sets, None)
    }

    pub fn with_weights(universe: Universe, m: u32, sets: Vec<ElementSet>, weights: Vec<BigRational>) -> Result<Self> {
        Self::build(universe, m, sets, Some(weights))
    }

    /// Convenience constructor from element lists.
    pub fn from_lists(n: u32, m: u32, lists: &[&[u32]]) -> Result<Self> {
        let universe = Universe::new(n)?;
        let sets = lists
            .iter()
            .map(|l| ElementSet::from_elements(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, m, sets)
    }

    fn build(universe: Universe, m: u32, sets: Vec<ElementSet>, weights: Option<Vec<BigRational>>) -> Result<Self> {
        if m > universe.n {
            return Err(Error::InvalidFamily(format!("m = {m} exceeds n = {}", universe.n)));
        }
        let full = universe.full_set();
        let mut seen = HashSet::with_capacity(sets.len());
        for s in &sets {
            if !s.is_subset(&full) {
                return Err(Error::InvalidFamily(format!("set {s} is not inside [{}]", universe.n)));
            }
            if s.len() != m {
                return Err(Error::InvalidFamily(format!("set {s} has size {} instead of {m}", s.len())));
            }
            if !seen.insert(*s) {
                return Err(Error::InvalidFamily(format!("duplicate set {s}")));
            }
        }
        if let Some(w) = &weights {
            if w.len() != sets.len() {
                return Err(Error::InvalidFamily("weight count differs from set count".into()));
            }
            if let Some(bad) = w.iter().find(|x| x.is_negative()) {
                return Err(Error::InvalidFamily(format!("negative weight {bad}")));
            }
        }
        Ok(SetFamily { universe, m, sets, weights })
    }

    /// Internal constructor for sets already known to be valid.
    pub(crate) fn from_parts_unchecked(universe: Universe, m: u32, sets: Vec<ElementSet>, weights: Option<Vec<BigRational>>) -> Self {
        SetFamily { universe, m, sets, weights }
    }

    /// `(X choose m)`.
    pub fn full(n: u32, m: u32) -> Result<Self> {
        let universe = Universe::new(n)?;
        if m > n {
            return Err(Error::InvalidFamily(format!("m = {m} exceeds n = {n}")));
        }
        Ok(SetFamily { universe, m, sets: k_subsets(n, m).collect(), weights: None })
    }

    pub fn empty(universe: Universe, m: u32) -> Self {
        SetFamily { universe, m, sets: Vec::new(), weights: None }
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn n(&self) -> u32 {
        self.universe.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn weights(&self) -> Option<&[BigRational]> {
        self.weights.as_deref()
    }

    pub fn is_unit_weighted(&self) -> bool {
        match &self.weights {
            None => true,
            Some(w) => w.iter().all(|x| x.is_one()),
        }
    }

    pub fn weight(&self, i: usize) -> BigRational {
        match &self.weights {
            None => BigRational::one(),
            Some(w) => w[i].clone(),
        }
    }

    /// Drop the weights, keeping the sets.
    pub fn unweighted(&self) -> SetFamily {
        SetFamily { universe: self.universe, m: self.m, sets: self.sets.clone(), weights: None }
    }

    pub fn contains(&self, s: &ElementSet) -> bool {
        self.sets.contains(s)
    }

    pub fn position(&self, s: &ElementSet) -> Option<usize> {
        self.sets.iter().position(|x| x == s)
    }

    /// `||G||` for the members selected by index.
    pub fn family_size(&self, selection: &[usize]) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for &i in selection {
            if i >= self.sets.len() {
                return Err(Error::InvalidArgument(format!("index {i} out of range")));
            }
            total += self.weight(i);
        }
        Ok(total)
    }

    /// `||F||`: total weight, or the count for unit weights.
    pub fn size(&self) -> BigRational {
        match &self.weights {
            None => BigRational::from_integer(BigInt::from(self.sets.len())),
            Some(w) => w.iter().sum(),
        }
    }

    /// `ln C(n,m) - ln ||F||` as an exact extended real.
    pub fn sparsity(&self) -> Sparsity {
        Sparsity::of(&BigRational::from_integer(BigInt::from(choose(self.n() as u64, self.m as u64))), &self.size())
    }

    /// `F[T]`: members containing `t`, weights preserved.
    pub fn restrict(&self, t: &ElementSet) -> SetFamily {
        self.filter(|s| t.is_subset(s))
    }

    /// Subfamily of members satisfying `keep`, weights preserved.
    pub fn filter<P: Fn(&ElementSet) -> bool>(&self, keep: P) -> SetFamily {
        let mut sets = Vec::new();
        let mut weights = self.weights.as_ref().map(|_| Vec::new());
        for (i, s) in self.sets.iter().enumerate() {
            if keep(s) {
                sets.push(*s);
                if let Some(w) = weights.as_mut() {
                    w.push(self.weight(i));
                }
            }
        }
        SetFamily { universe: self.universe, m: self.m, sets, weights }
    }

    /// `{U - T : U in F[T]}` as an `(m - |T|)`-uniform family on the
    /// `n - |T|` elements outside `T`, renumbered in increasing order.
    pub fn residual(&self, t: &ElementSet) -> SetFamily {
        let r = self.restrict(t);
        let sets = r.sets.iter().map(|s| s.difference(t).compress(t)).collect();
        SetFamily {
            universe: Universe::sized(self.n() - t.intersection(&self.universe.full_set()).len()),
            m: self.m - t.len().min(self.m),
            sets,
            weights: r.weights,
        }
    }

    /// `||P_j||` for `j = 0..=m`: weighted ordered pairs (diagonal included)
    /// whose intersection has size `j`.
    pub fn intersection_profile(&self) -> Vec<BigRational> {
        let m = self.m as usize;
        if self.weights.is_none() {
            return self.intersection_counts().into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect();
        }
        let mut out = vec![BigRational::zero(); m + 1];
        for (i, a) in self.sets.iter().enumerate() {
            let wa = self.weight(i);
            for (j, b) in self.sets.iter().enumerate() {
                let k = a.intersection(b).len() as usize;
                out[k] += &wa * self.weight(j);
            }
        }
        out
    }

    /// Unweighted intersection profile as machine integers.
    pub fn intersection_counts(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.m as usize + 1];
        for (i, a) in self.sets.iter().enumerate() {
            out[self.m as usize] += 1;
            for b in &self.sets[i + 1..] {
                out[a.intersection(b).len() as usize] += 2;
            }
        }
        out
    }

    /// Canonical text form; requires `m >= 1`.
    pub fn to_text(&self) -> Result<String> {
        crate::format::write_family(self)
    }

    pub fn parse(text: &str) -> Result<SetFamily> {
        crate::format::parse_family(text)
    }

    /// Members sorted lexicographically (weights follow their sets).
    pub fn canonical(&self) -> SetFamily {
        let mut idx: Vec<usize> = (0..self.sets.len()).collect();
        idx.sort_by(|&a, &b| self.sets[a].cmp(&self.sets[b]));
        SetFamily {
            universe: self.universe,
            m: self.m,
            sets: idx.iter().map(|&i| self.sets[i]).collect(),
            weights: self.weights.as_ref().map(|w| idx.iter().map(|&i| w[i].clone()).collect()),
        }
    }

    /// `(X choose m) - F` (unit weights).
    pub fn complement(&self) -> SetFamily {
        let present: HashSet<ElementSet> = self.sets.iter().copied().collect();
        let sets = k_subsets(self.n(), self.m).filter(|s| !present.contains(s)).collect();
        SetFamily { universe: self.universe, m: self.m, sets, weights: None }
    }
}

/// The sparsity `ln C(n,m) - ln ||F||` of a family, kept exact as the ratio
/// inside the logarithm; an empty family has sparsity `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sparsity {
    /// `ln(ratio)` with `ratio = C(n,m) / ||F||`.
    Finite(BigRational),
    Infinite,
}

impl Sparsity {
    pub fn of(total: &BigRational, size: &BigRational) -> Sparsity {
        if size.is_zero() {
            Sparsity::Infinite
        } else {
            Sparsity::Finite(total / size)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Sparsity::Infinite)
    }

    /// `e^{kappa}`, exact, when finite.
    pub fn exp(&self) -> Option<&BigRational> {
        match self {
            Sparsity::Finite(r) => Some(r),
            Sparsity::Infinite => None,
        }
    }

    /// `k * kappa`.
    pub fn scaled(&self, k: i32) -> Sparsity {
        match self {
            Sparsity::Finite(r) => Sparsity::Finite(num_traits::pow::Pow::pow(r, k)),
            Sparsity::Infinite => Sparsity::Infinite,
        }
    }

    /// `kappa + ln(factor)` for a positive rational factor.
    pub fn plus_ln(&self, factor: &BigRational) -> Sparsity {
        match self {
            Sparsity::Finite(r) => Sparsity::Finite(r * factor),
            Sparsity::Infinite => Sparsity::Infinite,
        }
    }

    /// Enclosure of the real value; `None` for `+inf`.
    pub fn interval(&self, prec: u32) -> Option<Interval> {
        self.exp().map(|r| Interval::from_rational(r, prec).ln())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Sparsity::Finite(r) if r.is_one())
    }
}

impl Ord for Sparsity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Sparsity::Infinite, Sparsity::Infinite) => Ordering::Equal,
            (Sparsity::Infinite, _) => Ordering::Greater,
            (_, Sparsity::Infinite) => Ordering::Less,
            (Sparsity::Finite(a), Sparsity::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Sparsity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Sparsity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sparsity::Infinite => f.write_str("+inf"),
            Sparsity::Finite(r) => write!(f, "ln({r})"),
        }
    }
}

/// Nonnegative integer weights on ordered pairs of members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWeight {
    len: usize,
    table: Vec<u64>,
}

impl PairWeight {
    pub fn zeros(len: usize) -> Self {
        PairWeight { len, table: vec![0; len * len] }
    }

    pub fn uniform(len: usize, w: u64) -> Self {
        PairWeight { len, table: vec![w; len * len] }
    }

    pub fn from_fn<G: Fn(usize, usize) -> u64>(len: usize, g: G) -> Self {
        let mut table = Vec::with_capacity(len * len);
        for i in 0..len {
            for j in 0..len {
                table.push(g(i, j));
            }
        }
        PairWeight { len, table }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.table[i * self.len + j]
    }

    pub fn set(&mut self, i: usize, j: usize, w: u64) {
        self.table[i * self.len + j] = w;
    }

    pub fn total(&self) -> BigUint {
        self.table.iter().map(|&w| BigUint::from(w)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn family_size_examples() {
        let f = SetFamily::from_lists(4, 2, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(f.family_size(&[0, 1]).unwrap(), q(2, 1));
        assert_eq!(f.family_size(&[]).unwrap(), q(0, 1));
        let u = Universe::new(4).unwrap();
        let w = SetFamily::with_weights(u, 2, vec![ElementSet::of(&[1, 2])], vec![q(3, 2)]).unwrap();
        assert_eq!(w.size(), q(3, 2));
    }

    #[test]
    fn sparsity_examples() {
        assert!(SetFamily::full(4, 2).unwrap().sparsity().is_zero());
        let one = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap().sparsity();
        let v = one.interval(128).unwrap();
        assert!((v.midpoint_f64() - 6f64.ln()).abs() < 1e-15);
        assert!(SetFamily::empty(Universe::new(4).unwrap(), 2).sparsity().is_infinite());
    }

    #[test]
    fn restrict_examples() {
        let f = SetFamily::from_lists(4, 2, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        assert_eq!(f.restrict(&ElementSet::of(&[1])).sets(), &[ElementSet::of(&[1, 2]), ElementSet::of(&[1, 3])]);
        assert_eq!(f.restrict(&ElementSet::EMPTY), f);
        assert!(f.restrict(&ElementSet::of(&[4])).is_empty());
    }

    #[test]
    fn profile_examples() {
        let f = SetFamily::from_lists(5, 2, &[&[1, 2], &[1, 3], &[4, 5]]).unwrap();
        assert_eq!(f.intersection_profile(), vec![q(4, 1), q(2, 1), q(3, 1)]);
        let f = SetFamily::from_lists(5, 2, &[&[1, 2]]).unwrap();
        assert_eq!(f.intersection_profile(), vec![q(0, 1), q(0, 1), q(1, 1)]);
        let f = SetFamily::from_lists(4, 2, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(f.intersection_profile(), vec![q(2, 1), q(0, 1), q(2, 1)]);
    }

    #[test]
    fn validation() {
        assert!(SetFamily::from_lists(4, 2, &[&[1, 2], &[1, 2]]).is_err());
        assert!(SetFamily::from_lists(4, 2, &[&[1, 2, 3]]).is_err());
        assert!(SetFamily::from_lists(4, 2, &[&[1, 5]]).is_err());
        assert!(Universe::new(0).is_err());
        assert!(Universe::new(129).is_err());
    }

    #[test]
    fn lexicographic_order() {
        let mut v = vec![ElementSet::of(&[2, 3]), ElementSet::of(&[1, 4]), ElementSet::of(&[1, 2]), ElementSet::of(&[1, 2, 3])];
        v.sort();
        assert_eq!(v, vec![ElementSet::of(&[1, 2]), ElementSet::of(&[1, 2, 3]), ElementSet::of(&[1, 4]), ElementSet::of(&[2, 3])]);
    }

    #[test]
    fn subset_iterators() {
        assert_eq!(k_subsets(6, 3).count(), 20);
        assert_eq!(k_subsets(4, 0).count(), 1);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(128, 127).count(), 128);
        assert_eq!(k_subsets(128, 128).count(), 1);
        assert_eq!(submasks(ElementSet::of(&[1, 3, 5])).count(), 8);
    }

    #[test]
    fn residual_renumbers() {
        let f = SetFamily::from_lists(5, 3, &[&[1, 2, 4], &[2, 3, 5], &[1, 3, 5]]).unwrap();
        let r = f.residual(&ElementSet::of(&[2]));
        assert_eq!(r.n(), 4);
        assert_eq!(r.m(), 2);
        // {1,4} -> {1,3}; {3,5} -> {2,4}
        assert_eq!(r.sets(), &[ElementSet::of(&[1, 3]), ElementSet::of(&[2, 4])]);
        let x = ElementSet::of(&[2, 4]).expand(&ElementSet::of(&[2]));
        assert_eq!(x, ElementSet::of(&[3, 5]));
    }
}
