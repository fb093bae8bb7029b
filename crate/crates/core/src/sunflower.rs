//! Exact sunflower detection: `k` members whose pairwise intersections all
//! equal one common core.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exactmath::factorial;
use crate::family::{ElementSet, SetFamily};
use crate::verdict::{Holds, Value, VerdictReport, Witness};

pub const CLAIM_SUNFLOWER_FREE: &str = "sunflower-free";
pub const CLAIM_SUNFLOWER: &str = "sunflower";

/// Default node budget for [`find_sunflower`].
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sunflower {
    pub core: ElementSet,
    /// Indices into the family's member list, ascending.
    pub petals: Vec<usize>,
}

impl Sunflower {
    /// Re-check the definition against `f`.
    pub fn is_valid_in(&self, f: &SetFamily) -> bool {
        let sets = f.sets();
        if self.petals.iter().any(|&i| i >= sets.len()) {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        if !self.petals.iter().all(|i| seen.insert(*i)) {
            return false;
        }
        for (a, &i) in self.petals.iter().enumerate() {
            for &j in &self.petals[a + 1..] {
                if sets[i].intersection(&sets[j]) != self.core {
                    return false;
                }
            }
        }
        true
    }

    /// The first `k` petals, still a sunflower with the same core.
    pub fn truncated(&self, k: usize) -> Sunflower {
        Sunflower { core: self.core, petals: self.petals[..k.min(self.petals.len())].to_vec() }
    }
}

struct Search<'a> {
    sets: &'a [ElementSet],
    k: usize,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Pick `need` pairwise-disjoint reduced sets from `cands[from..]`, none meeting `used`.
    fn pack(&mut self, cands: &[(usize, ElementSet)], from: usize, used: ElementSet, chosen: &mut Vec<usize>) -> Result<bool> {
        if chosen.len() == self.k {
            return Ok(true);
        }
        let need = self.k - chosen.len();
        for idx in from..cands.len() {
            if cands.len() - idx < need {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { what: "sunflower search nodes".into(), budget: self.budget });
            }
            let (i, r) = cands[idx];
            if !r.is_disjoint(&used) {
                continue;
            }
            chosen.push(i);
            if self.pack(cands, idx + 1, used.union(&r), chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Candidate cores: every pairwise intersection plus the empty set, by size
/// then lexicographically.
pub fn candidate_cores(f: &SetFamily) -> Vec<ElementSet> {
    let sets = f.sets();
    let mut cores = std::collections::BTreeSet::new();
    cores.insert((0u32, ElementSet::EMPTY));
    for (a, u) in sets.iter().enumerate() {
        for v in &sets[a + 1..] {
            let c = u.intersection(v);
            cores.insert((c.len(), c));
        }
    }
    cores.into_iter().map(|(_, c)| c).collect()
}

/// Find a `k`-sunflower, exploring at most `budget` search nodes.
/// Exhausting the budget is an error, never a silent `None`.
pub fn find_sunflower(f: &SetFamily, k: usize, budget: u64) -> Result<Option<Sunflower>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let sets = f.sets();
    if sets.len() < k {
        return Ok(None);
    }
    let mut search = Search { sets, k, nodes: 0, budget };
    for core in candidate_cores(f) {
        let cands: Vec<(usize, ElementSet)> =
            search.sets.iter().enumerate().filter(|(_, u)| core.is_subset(u)).map(|(i, u)| (i, u.difference(&core))).collect();
        if cands.len() < k {
            continue;
        }
        let mut chosen = Vec::with_capacity(k);
        if search.pack(&cands, 0, ElementSet::EMPTY, &mut chosen)? {
            chosen.sort_unstable();
            let sf = Sunflower { core, petals: chosen };
            if !sf.is_valid_in(f) {
                return Err(Error::Consistency(format!("invalid sunflower witness with core {core}")));
            }
            return Ok(Some(sf));
        }
    }
    Ok(None)
}

/// Exhaustive verdict that `F` has no `k`-sunflower.
pub fn sunflower_free_check(f: &SetFamily, k: usize) -> Result<VerdictReport> {
    let found = find_sunflower(f, k, u64::MAX)?;
    let holds = Holds::from_bool(found.is_none());
    let mut r = VerdictReport::new(CLAIM_SUNFLOWER_FREE, holds, Value::int(f.len()), Value::int(k));
    if let Some(sf) = found {
        r = r
            .with_witness(Witness::Elements(sf.petals.iter().flat_map(|&i| f.sets()[i].elements()).collect()))
            .with_detail("core", Value::int(sf.core.len()))
            .with_note(format!("core {} petals {}", sf.core, sf.petals.iter().map(|&i| f.sets()[i].to_string()).collect::<Vec<_>>().join(" ")));
    }
    Ok(r)
}

/// Search for a `k`-sunflower and report it. Finding one holds; finding none
/// is vacuous up to [`erdos_rado_threshold`] and a failure above it.
pub fn sunflower_report(f: &SetFamily, k: usize, budget: u64) -> Result<VerdictReport> {
    let found = find_sunflower(f, k, budget)?;
    let threshold = if f.m() >= 1 { erdos_rado_threshold(f.m(), k as u32)? } else { BigUint::from(1u32) };
    let above = BigUint::from(f.len()) > threshold;
    let holds = match (&found, above) {
        (Some(_), _) => Holds::True,
        (None, false) => Holds::Vacuous,
        (None, true) => Holds::False,
    };
    let mut r = VerdictReport::new(CLAIM_SUNFLOWER, holds, Value::int(f.len()), Value::uint(&threshold)).with_detail("k", Value::int(k));
    match found {
        Some(sf) => {
            let petals = sf.petals.iter().map(|&i| f.sets()[i].elements()).collect();
            r = r.with_witness(Witness::Sunflower { core: sf.core.elements(), petals });
        }
        None if above => r = r.with_note("no sunflower above the forcing threshold"),
        None => r = r.with_note("no sunflower; the family is at most the forcing threshold"),
    }
    Ok(r)
}

/// `m! (k-1)^m`: more members than this force a `k`-sunflower.
pub fn erdos_rado_threshold(m: u32, k: u32) -> Result<BigUint> {
    if m < 1 || k < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and k >= 2, got m = {m}, k = {k}")));
    }
    Ok(factorial(m as u64) * BigUint::from(k - 1).pow(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, m: u32, lists: &[&[u32]]) -> SetFamily {
        SetFamily::from_lists(n, m, lists).unwrap()
    }

    #[test]
    fn examples() {
        let f = fam(3, 1, &[&[1], &[2], &[3]]);
        let sf = find_sunflower(&f, 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((sf.core, sf.petals.len()), (ElementSet::EMPTY, 3));
        let f = fam(4, 2, &[&[1, 2], &[1, 3], &[1, 4]]);
        assert_eq!(find_sunflower(&f, 3, DEFAULT_BUDGET).unwrap().unwrap().core, ElementSet::of(&[1]));
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert!(find_sunflower(&tri, 3, DEFAULT_BUDGET).unwrap().is_none());
        assert!(find_sunflower(&tri, 2, DEFAULT_BUDGET).unwrap().is_some());
        assert_eq!(sunflower_free_check(&tri, 3).unwrap().holds, Holds::True);
        let tri5 = fam(5, 2, &[&[1, 2], &[2, 3], &[1, 3], &[4, 5]]);
        // {1,2} and {4,5} are disjoint, but no third set misses both
        assert_eq!(sunflower_free_check(&tri5, 3).unwrap().holds, Holds::True);
        assert_eq!(sunflower_free_check(&fam(3, 2, &[&[1, 2]]), 2).unwrap().holds, Holds::True);
        assert!(find_sunflower(&tri, 1, 10).is_err());
    }

    #[test]
    fn reports() {
        let f = fam(3, 1, &[&[1], &[2], &[3]]);
        let r = sunflower_report(&f, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.holds, Holds::True);
        assert_eq!(r.witness, Some(Witness::Sunflower { core: vec![], petals: vec![vec![1], vec![2], vec![3]] }));
        let tri = fam(3, 2, &[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(sunflower_report(&tri, 3, DEFAULT_BUDGET).unwrap().holds, Holds::Vacuous);
    }

    #[test]
    fn thresholds() {
        assert_eq!(erdos_rado_threshold(2, 3).unwrap(), BigUint::from(8u32));
        assert_eq!(erdos_rado_threshold(1, 3).unwrap(), BigUint::from(2u32));
        assert_eq!(erdos_rado_threshold(3, 3).unwrap(), BigUint::from(48u32));
    }

    #[test]
    fn budget_is_reported() {
        let f = SetFamily::full(8, 2).unwrap();
        match find_sunflower(&f, 4, 1) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
