//! Seeded family generators. A single `u64` seed drives a ChaCha8 stream, so
//! a seed reproduces the same family on every platform.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::choose;
use crate::family::{k_subsets, ElementSet, SetFamily, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Distinct uniformly random `m`-sets.
    Uniform,
    /// Random `m`-sets through one random element.
    Star,
    /// Sets drawn mostly from a random cluster of `min(n, 2m)` elements.
    Clustered,
}

impl FromStr for Distribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "star" => Ok(Distribution::Star),
            "clustered" => Ok(Distribution::Clustered),
            other => Err(Error::InvalidArgument(format!("unknown distribution `{other}` (uniform|star|clustered)"))),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random `k`-subset of `pool`.
pub fn random_subset<R: Rng>(rng: &mut R, pool: &[u32], k: u32) -> ElementSet {
    let picks = index::sample(rng, pool.len(), k as usize);
    ElementSet::from_elements(picks.into_iter().map(|i| pool[i])).expect("pool elements are valid ids")
}

/// Draw `count` distinct sets from `draw`; fall back to exhaustive sampling
/// when the candidate space is small.
fn collect_distinct<R: Rng, D: FnMut(&mut R) -> ElementSet>(rng: &mut R, count: usize, space: &[ElementSet], mut draw: D) -> Result<Vec<ElementSet>> {
    if !space.is_empty() {
        if count > space.len() {
            return Err(Error::InvalidArgument(format!("only {} candidate sets, {count} requested", space.len())));
        }
        return Ok(index::sample(rng, space.len(), count).into_iter().map(|i| space[i]).collect());
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count + 1000 {
            return Err(Error::InvalidArgument(format!("could not draw {count} distinct sets")));
        }
        let s = draw(rng);
        if seen.insert(s) {
            out.push(s);
        }
    }
    Ok(out)
}

const ENUMERATE_LIMIT: u64 = 1 << 16;

fn small_space(n: u32, m: u32, keep: impl Fn(&ElementSet) -> bool) -> Vec<ElementSet> {
    match u64::try_from(choose(n as u64, m as u64)) {
        Ok(c) if c <= ENUMERATE_LIMIT => k_subsets(n, m).filter(keep).collect(),
        _ => Vec::new(),
    }
}

/// Random `m`-uniform family with `count` members.
pub fn generate<R: Rng>(rng: &mut R, dist: Distribution, n: u32, m: u32, count: usize) -> Result<SetFamily> {
    let universe = Universe::new(n)?;
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let all: Vec<u32> = (1..=n).collect();
    let sets = match dist {
        Distribution::Uniform => {
            let space = small_space(n, m, |_| true);
            collect_distinct(rng, count, &space, |r| random_subset(r, &all, m))?
        }
        Distribution::Star => {
            let center = rng.gen_range(1..=n);
            let rest: Vec<u32> = all.iter().copied().filter(|&e| e != center).collect();
            let space = small_space(n, m, |s| s.contains(center));
            collect_distinct(rng, count, &space, |r| random_subset(r, &rest, m - 1).with(center))?
        }
        Distribution::Clustered => {
            let h = (2 * m).min(n);
            let cluster = random_subset(rng, &all, h);
            let inside = cluster.elements();
            let outside: Vec<u32> = all.iter().copied().filter(|e| !cluster.contains(*e)).collect();
            let max_out = (m / 2).min(outside.len() as u32);
            collect_distinct(rng, count, &[], |r| {
                let t = r.gen_range(0..=max_out);
                random_subset(r, &inside, m - t).union(&random_subset(r, &outside, t))
            })?
        }
    };
    SetFamily::new(universe, m, sets)
}

/// Random subfamily of the full `m`-uniform family on `n` elements keeping
/// each member with probability `p`.
pub fn bernoulli_family<R: Rng>(rng: &mut R, n: u32, m: u32, p: f64) -> Result<SetFamily> {
    let sets = k_subsets(n, m).filter(|_| rng.gen_bool(p)).collect();
    SetFamily::new(Universe::new(n)?, m, sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce() {
        for dist in [Distribution::Uniform, Distribution::Star, Distribution::Clustered] {
            let a = generate(&mut rng_from_seed(9), dist, 12, 3, 10).unwrap();
            let b = generate(&mut rng_from_seed(9), dist, 12, 3, 10).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.len(), 10);
        }
    }

    #[test]
    fn star_shares_an_element() {
        let f = generate(&mut rng_from_seed(1), Distribution::Star, 9, 3, 12).unwrap();
        let common = f.sets().iter().fold(ElementSet::full(9), |a, s| a.intersection(s));
        assert!(!common.is_empty());
    }

    #[test]
    fn large_universe_and_limits() {
        let f = generate(&mut rng_from_seed(3), Distribution::Uniform, 100, 5, 50).unwrap();
        assert_eq!(f.len(), 50);
        assert!(generate(&mut rng_from_seed(3), Distribution::Uniform, 4, 2, 7).is_err());
        assert!("nope".parse::<Distribution>().is_err());
    }
}
