//! Block-partition machinery for the three-sunflower construction: cardinality
//! vectors, the sets realizing them, the property conditions on families
//! `F_1, F_2, F_3`, and a small-scale brute-force search for the first step.
//!
//! Parameters at their asymptotic values are far beyond reach, so every
//! operation takes `q`, `r`, `beta` and the `b_j` directly; see
//! [`DerivedConstants`] for the formula-derived values.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::choose;
use crate::family::{k_subsets, submasks, ElementSet, SetFamily, Universe};
use crate::verdict::{Holds, Value, VerdictReport, Witness};

pub const CLAIM_PI: &str = "property-pi";
pub const CLAIM_PI_II: &str = "property-pi-ii";
pub const CLAIM_STEP1: &str = "step-1";

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn binom_rat(n: u32, k: u32) -> BigRational {
    rat(choose(n as u64, k as u64))
}

/// Parameters of the construction, supplied directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionParams {
    pub eps: BigRational,
    pub m: u32,
    pub q: u32,
    pub r: u32,
    pub beta: u32,
    /// `b_1, ..., b_r`.
    b: Vec<BigRational>,
}

impl ConstructionParams {
    /// `b_j = b_1 (1 - 1/r)^{2(j-1)}`.
    pub fn direct(eps: BigRational, m: u32, q: u32, r: u32, beta: u32, b1: BigRational) -> Result<Self> {
        if !eps.is_positive() || eps >= BigRational::one() {
            return Err(Error::InvalidArgument(format!("eps must lie in (0,1), got {eps}")));
        }
        if q == 0 || r == 0 {
            return Err(Error::InvalidArgument("q and r must be positive".into()));
        }
        if !b1.is_positive() {
            return Err(Error::InvalidArgument(format!("b_1 must be positive, got {b1}")));
        }
        let decay = BigRational::one() - BigRational::new(1.into(), r.into());
        let b = (0..r).map(|i| &b1 * Pow::pow(&decay, 2 * i as i32)).collect();
        Ok(ConstructionParams { eps, m, q, r, beta, b })
    }

    /// Same `b` at every level.
    pub fn with_constant_b(mut self, b: BigRational) -> Self {
        self.b = vec![b; self.r as usize];
        self
    }

    /// `b_j`, `1 <= j <= r`.
    pub fn b(&self, j: u32) -> Result<&BigRational> {
        check_level(j, self.r)?;
        Ok(&self.b[j as usize - 1])
    }

    /// `(1 - 1/r) b_j`, the weight used by the first step at level `j`.
    pub fn step_b(&self, j: u32) -> Result<BigRational> {
        Ok(self.b(j)? * (BigRational::one() - BigRational::new(1.into(), self.r.into())))
    }
}

/// The formula-derived constants: `q = floor(m^{3/4})`, `r = floor(m/q)`,
/// `c_i = 2^{2^{(4-i)/eps}}`. The `c_i` are carried as their doubly
/// logarithmic exponents; `beta = floor(c_3 m^{1/4})` is evaluated only when
/// `2^{1/eps}` is an integer of at most 16 bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    pub q: u32,
    pub r: u32,
    /// `log2 log2 c_i = (4 - i)/eps` for `i = 1, 2, 3`.
    pub c_loglog: [BigRational; 3],
    pub beta: Option<BigUint>,
}

pub fn derived_constants(eps: &BigRational, m: u32) -> Result<DerivedConstants> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!("eps must lie in (0,1), got {eps}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let m3 = BigUint::from(m).pow(3u32);
    let q: u32 = m3.nth_root(4).try_into().expect("fits");
    let r = m / q;
    let inv = eps.recip();
    let c_loglog = [rat(3) * &inv, rat(2) * &inv, inv.clone()];
    let beta = if inv.is_integer() && inv <= rat(16) {
        let k: u32 = inv.to_integer().try_into().expect("small");
        // c_3 = 2^{2^k}; floor(c_3 m^{1/4}) = floor((c_3^4 m)^{1/4})
        let c3_4 = BigUint::one() << (4u64 << k);
        Some((c3_4 * m).nth_root(4))
    } else {
        None
    };
    Ok(DerivedConstants { q, r, c_loglog, beta })
}

fn check_level(j: u32, r: u32) -> Result<()> {
    if j == 0 || j > r {
        return Err(Error::precondition("1 <= j <= r", format!("j = {j}, r = {r}")));
    }
    Ok(())
}

/// Disjoint blocks `Z_1, ..., Z_r` with common per-member intersection size `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    universe: Universe,
    blocks: Vec<ElementSet>,
    q: u32,
}

impl BlockPartition {
    pub fn new(universe: Universe, q: u32, blocks: Vec<ElementSet>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("at least one block required".into()));
        }
        let mut seen = ElementSet::EMPTY;
        for (i, z) in blocks.iter().enumerate() {
            if !z.is_subset(&universe.full_set()) {
                return Err(Error::InvalidArgument(format!("block Z_{} leaves 1..={}", i + 1, universe.n())));
            }
            if !z.is_disjoint(&seen) {
                return Err(Error::InvalidArgument(format!("block Z_{} overlaps an earlier block", i + 1)));
            }
            if z.len() < q {
                return Err(Error::InvalidArgument(format!("block Z_{} has fewer than q = {q} elements", i + 1)));
            }
            seen = seen.union(z);
        }
        Ok(BlockPartition { universe, blocks, q })
    }

    pub fn from_lists(n: u32, q: u32, lists: &[&[u32]]) -> Result<Self> {
        let blocks = lists.iter().map(|l| ElementSet::from_elements(l.iter().copied())).collect::<Result<Vec<_>>>()?;
        Self::new(Universe::new(n)?, q, blocks)
    }

    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn r(&self) -> u32 {
        self.blocks.len() as u32
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// `Z_j`, 1-based.
    pub fn block(&self, j: u32) -> &ElementSet {
        &self.blocks[j as usize - 1]
    }

    /// `Z_j + ... + Z_r`.
    pub fn tail(&self, j: u32) -> ElementSet {
        self.blocks[j as usize - 1..].iter().fold(ElementSet::EMPTY, |a, z| a.union(z))
    }

    /// `Z_1 + ... + Z_{j-1}`.
    pub fn head(&self, j: u32) -> ElementSet {
        self.blocks[..(j as usize - 1).min(self.blocks.len())].iter().fold(ElementSet::EMPTY, |a, z| a.union(z))
    }

    /// Every member meets every block in exactly `q` elements.
    pub fn check_family(&self, f: &SetFamily) -> Result<()> {
        if f.universe() != self.universe {
            return Err(Error::precondition("same universe", format!("family on {} elements, blocks on {}", f.n(), self.universe.n())));
        }
        for u in f.sets() {
            for (i, z) in self.blocks.iter().enumerate() {
                let k = u.intersection(z).len();
                if k != self.q {
                    return Err(Error::precondition(
                        "|Z_j ∩ U| = q",
                        format!("member {u} meets Z_{} in {k} elements, q = {}", i + 1, self.q),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `j`th cardinality vector of `s`, or `None` if `s` leaves `Z_j..Z_r`
    /// or meets some block in more than `q` elements.
    pub fn vector_of(&self, j: u32, s: &ElementSet) -> Option<CardinalityVector> {
        if !s.is_subset(&self.tail(j)) {
            return None;
        }
        let entries: Vec<u32> = self.blocks[j as usize - 1..].iter().map(|z| s.intersection(z).len()).collect();
        if entries.iter().any(|&e| e > self.q) {
            return None;
        }
        Some(CardinalityVector { start: j, entries })
    }
}

/// `(v_j, ..., v_r)` with entries in `[0, q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardinalityVector {
    start: u32,
    entries: Vec<u32>,
}

impl CardinalityVector {
    pub fn new(start: u32, entries: Vec<u32>) -> Self {
        CardinalityVector { start, entries }
    }

    pub fn zero(start: u32, r: u32) -> Self {
        CardinalityVector { start, entries: vec![0; (r + 1 - start) as usize] }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `v_p`, for `start <= p <= r`.
    pub fn get(&self, p: u32) -> u32 {
        self.entries[(p - self.start) as usize]
    }

    pub fn norm(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `v_p = 0` for every `p > start`.
    pub fn has_zero_tail(&self) -> bool {
        self.entries.iter().skip(1).all(|&e| e == 0)
    }

    fn validate(&self, p: &BlockPartition) -> Result<()> {
        if self.start == 0 || self.start + self.entries.len() as u32 != p.r() + 1 {
            return Err(Error::InvalidArgument(format!("vector starting at {} with {} entries does not match r = {}", self.start, self.entries.len(), p.r())));
        }
        if self.entries.iter().any(|&e| e > p.q()) {
            return Err(Error::InvalidArgument(format!("vector entries must lie in [0, {}]", p.q())));
        }
        Ok(())
    }
}

impl std::fmt::Display for CardinalityVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorFilter {
    All,
    /// Norm strictly above `beta`.
    Beta(u32),
    /// Zero beyond the first entry.
    ZeroTail,
}

/// Every `(v_j, ..., v_r)` with entries in `[0, q]` passing `filter`, in
/// lexicographic order.
pub fn enumerate_vectors(j: u32, q: u32, r: u32, filter: VectorFilter) -> Result<Vec<CardinalityVector>> {
    check_level(j, r)?;
    let len = (r + 1 - j) as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    loop {
        let v = CardinalityVector { start: j, entries: cur.clone() };
        let keep = match filter {
            VectorFilter::All => true,
            VectorFilter::Beta(beta) => v.norm() > beta,
            VectorFilter::ZeroTail => v.has_zero_tail(),
        };
        if keep {
            out.push(v);
        }
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < q {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Vectors of each norm against `C(w + len - 1, len - 1)`: never above it,
/// equal to it whenever `w <= q`.
pub fn stars_and_bars_check(j: u32, q: u32, r: u32) -> Result<bool> {
    let vs = enumerate_vectors(j, q, r, VectorFilter::All)?;
    let len = r + 1 - j;
    let mut by_norm: HashMap<u32, u64> = HashMap::new();
    for v in &vs {
        *by_norm.entry(v.norm()).or_insert(0) += 1;
    }
    Ok((0..=len * q).all(|w| {
        let count = BigUint::from(*by_norm.get(&w).unwrap_or(&0));
        let bound = choose((w + len - 1) as u64, (len - 1) as u64);
        count <= bound && (w > q || count == bound)
    }))
}

/// `S(v, B)`: sets inside `Z_j..Z_r` meeting each `Z_p` in `v_p` elements and avoiding `B`.
pub fn sets_with_vector(p: &BlockPartition, v: &CardinalityVector, avoid: &ElementSet) -> Result<Vec<ElementSet>> {
    v.validate(p)?;
    let mut out = vec![ElementSet::EMPTY];
    for (idx, &k) in v.entries().iter().enumerate() {
        let z = p.block(v.start() + idx as u32).difference(avoid);
        let elems = z.elements();
        let choices: Vec<ElementSet> = k_subsets(elems.len() as u32, k)
            .map(|c| ElementSet::from_elements(c.iter().map(|i| elems[i as usize - 1])).expect("in range"))
            .collect();
        out = out.iter().flat_map(|s| choices.iter().map(move |c| s.union(c))).collect();
    }
    out.sort();
    Ok(out)
}

/// `|F[S]|` for every `S` inside `region` and contained in some member.
fn restricted_counts(f: &SetFamily, region: &ElementSet) -> HashMap<ElementSet, u64> {
    let mut counts = HashMap::new();
    for u in f.sets() {
        for s in submasks(u.intersection(region)) {
            *counts.entry(s).or_insert(0u64) += 1;
        }
    }
    counts
}

/// Sum of `|F[S]|^2 b^{|v|} / prod_p C(q, v_p)` over the vectors of `S`
/// accepted by `keep`.
fn weighted_square_sum<K: Fn(&CardinalityVector) -> bool>(f: &SetFamily, p: &BlockPartition, j: u32, b: &BigRational, keep: K) -> BigRational {
    let mut sum = BigRational::zero();
    for (s, c) in restricted_counts(f, &p.tail(j)) {
        let Some(v) = p.vector_of(j, &s) else { continue };
        if !keep(&v) {
            continue;
        }
        let denom: BigRational = v.entries().iter().map(|&e| binom_rat(p.q(), e)).product();
        sum += rat(c * c) * Pow::pow(b, v.norm() as i32) / denom;
    }
    sum
}

/// The sum in the second property condition and its ratio to `|F_i|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionValue {
    pub sum: BigRational,
    pub ratio: BigRational,
}

/// `sum_{v in V_j^beta, S in S_j(v)} |F_i[S]|^2 / (b_j^{-|v|} prod_p C(q, v_p))`,
/// returned with its ratio to `|F_i|^2`. The condition holds when the ratio is below 1.
pub fn pi_condition_ii_value(fi: &SetFamily, p: &BlockPartition, j: u32, params: &ConstructionParams) -> Result<ConditionValue> {
    check_level(j, p.r())?;
    if fi.is_empty() {
        return Err(Error::precondition("F_i nonempty", "empty family"));
    }
    let b = params.b(j)?;
    let sum = weighted_square_sum(fi, p, j, b, |v| v.norm() > params.beta);
    let sq = rat(fi.len()) * rat(fi.len());
    Ok(ConditionValue { ratio: &sum / sq, sum })
}

/// Conditions i)–iii) for three families at level `j` (`1 <= j <= r + 1`).
pub fn pi_check(
    families: [&SetFamily; 3],
    p: &BlockPartition,
    j: u32,
    params: &ConstructionParams,
    base_size: &BigUint,
) -> Result<VerdictReport> {
    if j == 0 || j > p.r() + 1 {
        return Err(Error::precondition("1 <= j <= r + 1", format!("j = {j}")));
    }
    let m = families[0].m();
    for f in families {
        if f.m() != m {
            return Err(Error::precondition("common uniformity", format!("m = {} vs {m}", f.m())));
        }
        p.check_family(f)?;
    }
    let mut holds = Holds::True;
    let mut report_details = Vec::new();
    let mut worst = BigRational::zero();
    let floor = rat(base_size.clone()) * Pow::pow(&params.eps, (j * p.q()) as i32);
    for (i, f) in families.iter().enumerate() {
        let ok = rat(f.len()) > floor;
        holds = holds.and(Holds::from_bool(ok));
        report_details.push((format!("i_{}", i + 1), Value::int(f.len())));
        if j <= p.r() {
            if f.is_empty() {
                holds = holds.and(Holds::False);
                continue;
            }
            let cv = pi_condition_ii_value(f, p, j, params)?;
            holds = holds.and(Holds::from_bool(cv.ratio < BigRational::one()));
            if cv.ratio > worst {
                worst = cv.ratio.clone();
            }
            report_details.push((format!("ii_{}", i + 1), Value::rational(cv.ratio)));
        }
    }
    let head = p.head(j);
    let mut witness = None;
    'scan: for a in 0..3 {
        for b in a + 1..3 {
            for u in families[a].sets() {
                for w in families[b].sets() {
                    if !u.intersection(w).intersection(&head).is_empty() {
                        witness = Some((a, *u, b, *w));
                        break 'scan;
                    }
                }
            }
        }
    }
    let mut r = VerdictReport::new(CLAIM_PI, holds, Value::rational(worst), Value::rational(BigRational::one()))
        .with_detail("size_floor", Value::rational(floor));
    for (k, v) in report_details {
        r = r.with_detail(k, v);
    }
    if let Some((a, u, b, w)) = witness {
        r.holds = r.holds.and(Holds::False);
        r = r
            .with_witness(Witness::Elements(u.elements().into_iter().chain(w.elements()).collect()))
            .with_note(format!("iii) fails: {u} in F_{} and {w} in F_{} share an element of Z_1..Z_{}", a + 1, b + 1, j - 1));
    }
    if j > p.r() {
        r = r.with_note("ii) applies only for j <= r");
    }
    Ok(r)
}

/// The three step-one conditions for a candidate `S`, each exact.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOneValues {
    /// Sum in condition 1); holds when `<= |F_i[S]|^2`.
    pub sum1: BigRational,
    /// Sum in condition 2); holds when `<= |F_i[S]|^2`.
    pub sum2: BigRational,
    pub restricted: u64,
    /// `|F_i| b^{-|v|} / 3`.
    pub floor3: BigRational,
    pub holds: [bool; 3],
}

/// Evaluate conditions 1)–3) for `S` with `j`th cardinality vector `v`;
/// condition 1) sums over vectors of norm above `beta`. Terms with
/// `u_p > q - v_p` are omitted: `F_i[S + T]` has no members for them once
/// members meet each block in `q` elements.
pub fn step1_values(
    fi: &SetFamily,
    p: &BlockPartition,
    j: u32,
    s: &ElementSet,
    v: &CardinalityVector,
    b: &BigRational,
    beta: u32,
) -> Result<StepOneValues> {
    check_level(j, p.r())?;
    v.validate(p)?;
    if v.start() != j || p.vector_of(j, s).as_ref() != Some(v) {
        return Err(Error::precondition("S in S(v, ∅)", format!("S = {s}, v = {v}")));
    }
    if !b.is_positive() {
        return Err(Error::InvalidArgument(format!("b must be positive, got {b}")));
    }
    let restricted_family = fi.restrict(s);
    let restricted = restricted_family.len() as u64;
    let b8 = b / rat(8);
    let (mut sum1, mut sum2) = (BigRational::zero(), BigRational::zero());
    let region = p.tail(j).difference(s);
    for (t, c) in restricted_counts(&restricted_family, &region) {
        let Some(u) = p.vector_of(j, &t) else { continue };
        if u.is_zero() || u.entries().iter().zip(v.entries()).any(|(&a, &w)| a + w > p.q()) {
            continue;
        }
        let denom: BigRational = u.entries().iter().zip(v.entries()).map(|(&a, &w)| binom_rat(p.q() - w, a)).product();
        let term = rat(c * c) / denom;
        let norm = u.norm() as i32;
        if u.norm() > beta {
            sum1 += &term * Pow::pow(b, norm);
        }
        if u.has_zero_tail() {
            sum2 += &term * Pow::pow(&b8, norm);
        }
    }
    let sq = rat(restricted * restricted);
    let floor3 = rat(fi.len()) / (rat(3) * Pow::pow(b, v.norm() as i32));
    let holds = [sum1 <= sq, sum2 <= sq, rat(restricted) >= floor3];
    Ok(StepOneValues { sum1, sum2, restricted, floor3, holds })
}

/// Report form of [`step1_values`].
pub fn step1_conditions_check(
    fi: &SetFamily,
    p: &BlockPartition,
    j: u32,
    s: &ElementSet,
    v: &CardinalityVector,
    b: &BigRational,
    beta: u32,
) -> Result<VerdictReport> {
    let sv = step1_values(fi, p, j, s, v, b, beta)?;
    let holds = Holds::from_bool(sv.holds.iter().all(|&h| h));
    let sq = rat(sv.restricted * sv.restricted);
    Ok(VerdictReport::new(CLAIM_STEP1, holds, Value::int(sv.restricted), Value::rational(sv.floor3.clone()))
        .with_witness(Witness::Elements(s.elements()))
        .with_detail("restricted_squared", Value::rational(sq))
        .with_detail("sum_1", Value::rational(sv.sum1))
        .with_detail("holds_1", Value::int(sv.holds[0] as u8))
        .with_detail("sum_2", Value::rational(sv.sum2))
        .with_detail("holds_2", Value::int(sv.holds[1] as u8))
        .with_detail("holds_3", Value::int(sv.holds[2] as u8)))
}

/// `sum_{S in S(v, ∅)} |F_i[S]|^2 b^{|v|} / prod_p C(q, v_p)` compared with `|F_i|^2`.
pub fn entry_sum(fi: &SetFamily, p: &BlockPartition, v: &CardinalityVector, b: &BigRational) -> Result<BigRational> {
    v.validate(p)?;
    let target = v.clone();
    Ok(weighted_square_sum(fi, p, v.start(), b, |w| *w == target))
}

/// Result of [`toy_witness_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct ToyWitness {
    pub v: CardinalityVector,
    pub entry_ratio: BigRational,
    pub s: ElementSet,
    pub values: StepOneValues,
}

/// Brute-force first step at level `j`: the largest `v` with zero tail whose
/// entry sum reaches `|F|^2`, then the first `S in S(v, ∅)` (lexicographic)
/// meeting conditions 1)–3), with `b = (1 - 1/r) b_j`. Examining more than
/// `budget` candidate sets is an error; `Ok(None)` means no `S` exists for
/// that `v`.
pub fn toy_witness_search(f: &SetFamily, p: &BlockPartition, params: &ConstructionParams, j: u32, budget: u64) -> Result<Option<ToyWitness>> {
    check_level(j, p.r())?;
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "empty family"));
    }
    p.check_family(f)?;
    let b = params.step_b(j)?;
    let sq = rat(f.len()) * rat(f.len());
    let mut chosen = None;
    for v in enumerate_vectors(j, p.q(), p.r(), VectorFilter::ZeroTail)?.into_iter().rev() {
        let total = entry_sum(f, p, &v, &b)?;
        if total >= sq {
            chosen = Some((v, total / &sq));
            break;
        }
    }
    let (v, entry_ratio) = chosen.ok_or_else(|| Error::Consistency("the zero vector must satisfy the entry inequality".into()))?;
    let mut examined = 0u64;
    for s in sets_with_vector(p, &v, &ElementSet::EMPTY)? {
        examined += 1;
        if examined > budget {
            return Err(Error::BudgetExceeded { what: "step-one candidate sets".into(), budget });
        }
        let values = step1_values(f, p, j, &s, &v, &b, params.beta)?;
        if values.holds.iter().all(|&h| h) {
            return Ok(Some(ToyWitness { v, entry_ratio, s, values }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn toy_partition() -> BlockPartition {
        BlockPartition::from_lists(4, 2, &[&[1, 2], &[3, 4]]).unwrap()
    }

    #[test]
    fn vector_enumeration() {
        assert_eq!(enumerate_vectors(1, 2, 2, VectorFilter::All).unwrap().len(), 9);
        assert_eq!(enumerate_vectors(1, 2, 2, VectorFilter::Beta(1)).unwrap().len(), 6);
        let z = enumerate_vectors(1, 2, 2, VectorFilter::ZeroTail).unwrap();
        let e: Vec<Vec<u32>> = z.iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
        for (j, q, rr) in [(1, 2, 2), (1, 3, 4), (2, 2, 4), (1, 1, 5)] {
            assert!(stars_and_bars_check(j, q, rr).unwrap());
        }
        assert!(enumerate_vectors(3, 2, 2, VectorFilter::All).is_err());
    }

    #[test]
    fn sets_for_vectors() {
        let p = toy_partition();
        let v = CardinalityVector::new(1, vec![1, 0]);
        assert_eq!(sets_with_vector(&p, &v, &ElementSet::EMPTY).unwrap(), vec![ElementSet::of(&[1]), ElementSet::of(&[2])]);
        let v11 = CardinalityVector::new(1, vec![1, 1]);
        let got = sets_with_vector(&p, &v11, &ElementSet::EMPTY).unwrap();
        let want: Vec<ElementSet> = [[1, 3], [1, 4], [2, 3], [2, 4]].iter().map(|s| ElementSet::of(s)).collect();
        assert_eq!(got, want);
        assert_eq!(sets_with_vector(&p, &v, &ElementSet::of(&[1])).unwrap(), vec![ElementSet::of(&[2])]);
    }

    #[test]
    fn condition_ii_toy() {
        let p = toy_partition();
        let params = ConstructionParams::direct(r(1, 2), 2, 2, 2, 1, r(4, 1)).unwrap().with_constant_b(r(4, 1));
        let f = SetFamily::from_lists(4, 2, &[&[1, 3], &[2, 4]]).unwrap();
        let cv = pi_condition_ii_value(&f, &p, 1, &params).unwrap();
        assert_eq!((cv.sum, cv.ratio), (r(8, 1), r(2, 1)));
        // the toy members meet each block once, so the validating checks refuse it
        assert!(pi_check([&f, &f, &f], &p, 1, &params, &BigUint::from(2u32)).is_err());
        let high = ConstructionParams { beta: 2, ..params.clone() };
        assert_eq!(pi_condition_ii_value(&f, &p, 1, &high).unwrap().sum, BigRational::zero());
    }

    #[test]
    fn step1_corner_cases() {
        let p = BlockPartition::from_lists(8, 2, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]).unwrap();
        let f = SetFamily::from_lists(8, 4, &[&[1, 2, 5, 6], &[1, 3, 5, 7], &[2, 4, 6, 8]]).unwrap();
        let zero = CardinalityVector::zero(1, 2);
        let sv = step1_values(&f, &p, 1, &ElementSet::EMPTY, &zero, &r(2, 1), 1).unwrap();
        assert!(sv.holds[2]);
        let v = CardinalityVector::new(1, vec![2, 0]);
        let sv = step1_values(&f, &p, 1, &ElementSet::of(&[3, 4]), &v, &r(2, 1), 1).unwrap();
        assert_eq!(sv.restricted, 0);
        assert_eq!(sv.holds, [true, true, false]);
        assert!(step1_values(&f, &p, 1, &ElementSet::of(&[3, 5]), &v, &r(2, 1), 1).is_err());
    }

    #[test]
    fn pi_three_families() {
        let p = BlockPartition::from_lists(8, 2, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]).unwrap();
        let params = ConstructionParams::direct(r(1, 2), 4, 2, 2, 4, r(2, 1)).unwrap();
        let f1 = SetFamily::from_lists(8, 4, &[&[1, 2, 5, 6]]).unwrap();
        let f2 = SetFamily::from_lists(8, 4, &[&[3, 4, 5, 6]]).unwrap();

        let rep = pi_check([&f1, &f2, &f1], &p, 2, &params, &BigUint::from(1u32)).unwrap();
        assert_eq!(rep.holds, Holds::False);
        assert!(rep.witness.is_some());
        let rep = pi_check([&f1, &f2, &f2], &p, 1, &params, &BigUint::from(1u32)).unwrap();
        assert!(rep.witness.is_none());
        // blocks wide enough for three members with disjoint Z_1 parts
        let wide = BlockPartition::from_lists(12, 2, &[&[1, 2, 3, 4, 5, 6], &[7, 8, 9, 10, 11, 12]]).unwrap();
        let g1 = SetFamily::from_lists(12, 4, &[&[1, 2, 7, 8]]).unwrap();
        let g2 = SetFamily::from_lists(12, 4, &[&[3, 4, 7, 8]]).unwrap();
        let g3 = SetFamily::from_lists(12, 4, &[&[5, 6, 9, 10]]).unwrap();
        let rep = pi_check([&g1, &g2, &g3], &wide, 2, &params, &BigUint::from(1u32)).unwrap();
        assert!(rep.witness.is_none());
    }

    #[test]
    fn toy_search() {
        let p = BlockPartition::from_lists(8, 2, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]).unwrap();
        let params = ConstructionParams::direct(r(1, 2), 4, 2, 2, 2, r(3, 1)).unwrap();
        let star = SetFamily::from_lists(8, 4, &[&[1, 2, 5, 6], &[1, 2, 5, 7], &[1, 2, 6, 8], &[1, 2, 7, 8]]).unwrap();
        let w = toy_witness_search(&star, &p, &params, 1, 1000).unwrap().unwrap();
        assert!(w.v.norm() > 0);
        assert_eq!(w.s, ElementSet::of(&[1, 2]));
        assert!(toy_witness_search(&star, &p, &params, 1, 0).is_err());
    }

    #[test]
    fn constants() {
        let c = derived_constants(&r(1, 2), 16).unwrap();
        assert_eq!((c.q, c.r), (8, 2));
        assert_eq!(c.beta, Some(BigUint::from(32u32)));
        assert_eq!(c.c_loglog[0], r(6, 1));
    }
}
