//! Extension generators: sets `T` whose restricted family `F[T]` extends to
//! almost every `l`-set through `T`.
//!
//! All counting for `F[T]` happens in the universe `X - T` on the residual
//! `(m - |T|)`-uniform family `{U - T : U in F[T]}` at target size `l - |T|`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{choose, Interval};
use crate::extension::ext_count;
use crate::family::{submasks, ElementSet, SetFamily};
use crate::gamma::{gamma_unit_check, scaled_b, Clause, PowerTable};
use crate::verdict::{Holds, Value, VerdictReport, Witness};

pub const CLAIM_GENERATOR: &str = "ext-generator";
pub const CLAIM_CORE: &str = "gamma-core";
pub const CLAIM_EGT: &str = "theorem-1.2";

/// Candidate sets examined by the fallback search in [`egt_find`].
pub const SEARCH_BUDGET: usize = 100_000;

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn rpow(b: &BigRational, k: u32) -> BigRational {
    Pow::pow(b, k as i32)
}

/// `C(n - |T|, l - |T|) (1 - e^{-lambda})`.
pub fn generator_threshold(n: u32, t_len: u32, l: u32, lambda: &BigRational, prec: u32) -> Interval {
    let e = Interval::from_rational(&-lambda.clone(), prec).exp();
    let total = Interval::from_biguint(&choose((n - t_len) as u64, (l - t_len) as u64), prec);
    &total * &(&Interval::from_int(1, prec) - &e)
}

/// `|Ext(F[T], l)|` counted on the residual family in `X - T`.
pub fn residual_ext_count(f: &SetFamily, t: &ElementSet, l: u32) -> Result<u64> {
    let r = f.residual(t);
    ext_count(&r, l - t.len())
}

/// Does `T` generate: `|Ext(F[T], l)| >= C(n-|T|, l-|T|)(1 - e^{-lambda})`?
pub fn is_extension_generator(f: &SetFamily, t: &ElementSet, l: u32, lambda: &BigRational, prec: u32) -> Result<VerdictReport> {
    if !t.is_subset(&f.universe().full_set()) {
        return Err(Error::precondition("T inside X", format!("T = {t}")));
    }
    if t.len() > f.m() {
        return Err(Error::precondition("|T| <= m", format!("|T| = {}, m = {}", t.len(), f.m())));
    }
    if l > f.n() || l < f.m() {
        return Err(Error::precondition("m <= l <= n", format!("l = {l}")));
    }
    let count = residual_ext_count(f, t, l)?;
    let threshold = generator_threshold(f.n(), t.len(), l, lambda, prec);
    let holds = Holds::from_decision(threshold.le(&Interval::from_int(count, prec)));
    Ok(VerdictReport::new(CLAIM_GENERATOR, holds, Value::int(count), Value::Interval(threshold))
        .with_witness(Witness::Elements(t.elements())))
}

/// Output of [`gamma_core_extract`].
#[derive(Debug, Clone)]
pub struct GammaCore {
    pub t: ElementSet,
    /// `F[T]` in the original universe.
    pub restricted: SetFamily,
    /// `{U - T : U in F[T]}` in `X - T`, renumbered.
    pub residual: SetFamily,
    /// `|T| = m`: the core is a whole member.
    pub degenerate: bool,
    /// The residual condition, re-verified independently.
    pub residual_check: Holds,
    /// `n^{|T|} |F| <= (b m)^{|T|} C(n, m)`, which for `n > b m` is
    /// `|T| <= kappa(F) / ln(n / (b m))`.
    pub bound_holds: bool,
    /// The bound read as `|T| <= kappa(F) / ln(b m / n)` for `b m > n`;
    /// `None` when that reading does not apply.
    pub flipped_bound_holds: Option<bool>,
}

/// Grow `T` from the empty set: while `F[T]` violates the condition in
/// `X - T`, adjoin the smallest (then lexicographically first) violator `S`,
/// i.e. `|F[T + S]| > |F[T]| b^{-|S|}`. Each step keeps
/// `|F[T]| >= |F| b^{-|T|}`, which yields the size bound on `T`.
pub fn gamma_core_extract(f: &SetFamily, b: &BigRational) -> Result<GammaCore> {
    if f.is_empty() {
        return Err(Error::precondition("|F| >= 1", "empty family"));
    }
    if b <= &BigRational::one() {
        return Err(Error::precondition("b > 1", format!("b = {b}")));
    }
    let total = rat(f.len());
    let table = PowerTable::new(b, f.m());
    let mut t = ElementSet::EMPTY;
    let mut restricted = f.clone();
    let mut subs: Vec<ElementSet> = Vec::new();
    loop {
        subs.clear();
        for u in restricted.sets() {
            subs.extend(submasks(u.difference(&t)).filter(|s| !s.is_empty()));
        }
        subs.sort_unstable_by_key(|s| s.bits());
        let here = restricted.len() as u64;
        let mut pick: Option<ElementSet> = None;
        for run in subs.chunk_by(|a, c| a == c) {
            let s = run[0];
            if pick.is_some_and(|p| (p.len(), p) <= (s.len(), s)) {
                continue;
            }
            if table.exceeds(run.len() as u64, s.len(), here) {
                pick = Some(s);
            }
        }
        match pick {
            Some(s) => {
                t = t.union(&s);
                restricted = f.restrict(&t);
            }
            None => break,
        }
    }
    let residual = f.residual(&t);
    let residual_check = if residual.m() == 0 || residual.is_empty() {
        Holds::Vacuous
    } else {
        gamma_unit_check(&residual, b)?.holds
    };
    let (n, m) = (f.n(), f.m());
    let j = t.len();
    let cnm = rat(choose(n as u64, m as u64));
    let bm = b * rat(m);
    let bound_holds = rpow(&rat(n), j) * &total <= rpow(&bm, j) * &cnm;
    let flipped_bound_holds = if bm > rat(n) { Some(rpow(&bm, j) * &total <= rpow(&rat(n), j) * &cnm) } else { None };
    Ok(GammaCore { t, degenerate: j == m, restricted, residual, residual_check, bound_holds, flipped_bound_holds })
}

/// Report form of [`gamma_core_extract`].
pub fn gamma_core_report(f: &SetFamily, b: &BigRational) -> Result<VerdictReport> {
    let core = gamma_core_extract(f, b)?;
    let holds = core.residual_check.and(Holds::from_bool(core.bound_holds));
    let mut r = VerdictReport::new(CLAIM_CORE, holds, Value::int(core.t.len()), Value::int(core.restricted.len()))
        .with_witness(Witness::Elements(core.t.elements()));
    if core.degenerate {
        r = r.with_note("degenerate: T is a whole member");
    }
    if core.flipped_bound_holds == Some(false) {
        r = r.with_note("the reading |T| <= kappa / ln(bm/n) fails here");
    }
    Ok(r)
}

/// `floor(l sqrt(eps) / lambda)`: the largest `k >= 0` with `(k lambda)^2 <= l^2 eps`.
pub fn base_level(l: u32, lambda: &BigRational, eps: &BigRational) -> u32 {
    let cap = rat(l) * rat(l) * eps;
    let mut k = 0u32;
    while k < l && {
        let next = rat(k + 1) * lambda;
        &next * &next <= cap
    } {
        k += 1;
    }
    k
}

fn int_root(v: &BigInt, k: u32) -> Option<BigInt> {
    let r = v.nth_root(k);
    if Pow::pow(&r, k) == *v { Some(r) } else { None }
}

/// `eps^{-1/4}`: exact when `eps` is a fourth power of a rational, otherwise
/// rounded up to a multiple of `2^-32` (second component `false`).
pub fn gamma_from_eps(eps: &BigRational) -> (BigRational, bool) {
    if let (Some(p), Some(q)) = (int_root(eps.numer(), 4), int_root(eps.denom(), 4)) {
        return (BigRational::new(q, p), true);
    }
    // smallest k with k^4 eps >= 2^128, i.e. k >= 2^32 eps^{-1/4}
    let target = rat(BigInt::one() << 128u32);
    let fits = |k: &BigInt| rat(Pow::pow(k, 4u32)) * eps >= target;
    let mut hi = BigInt::one() << 32u32;
    while !fits(&hi) {
        hi <<= 1u32;
    }
    let mut lo = BigInt::zero();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        if fits(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (BigRational::new(hi, BigInt::one() << 32u32), false)
}

/// How [`egt_find`] obtained its set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Core extraction at `b = 14 gamma m n / l0` satisfied every clause.
    Extraction,
    /// Extraction missed a clause; a size-ordered search over sets within the
    /// cardinality bound found a generator.
    Search,
    /// Neither produced a set meeting every clause; the extracted set is returned.
    Unresolved,
}

/// Certificate returned by [`egt_find`].
#[derive(Debug, Clone)]
pub struct GeneratorCertificate {
    pub t: ElementSet,
    pub l: u32,
    pub lambda: BigRational,
    pub achieved_count: BigUint,
    pub required_count: Interval,
    pub generator: Holds,
    /// `|T| <= kappa(F) / ln(eps l / (m^2 lambda))`, exact.
    pub cardinality_bound: bool,
    pub l0: u32,
    pub gamma: BigRational,
    pub gamma_exact: bool,
    pub b: Option<BigRational>,
    pub degenerate: bool,
    pub route: Route,
    /// Hypotheses of the instantiation and whether they hold at this scale.
    pub clauses: Vec<Clause>,
}

impl GeneratorCertificate {
    pub fn to_report(&self) -> VerdictReport {
        let holds = self.generator.and(Holds::from_bool(self.cardinality_bound));
        let mut r = VerdictReport::new(CLAIM_EGT, holds, Value::uint(&self.achieved_count), Value::Interval(self.required_count.clone()))
            .with_witness(Witness::Elements(self.t.elements()))
            .with_detail("l0", Value::int(self.l0))
            .with_detail("gamma", Value::rational(self.gamma.clone()));
        if let Some(b) = &self.b {
            r = r.with_detail("b", Value::rational(b.clone()));
        }
        r = r.with_note(format!("route: {:?}", self.route));
        if !self.gamma_exact {
            r = r.with_note("gamma = eps^{-1/4} rounded up");
        }
        if self.degenerate {
            r = r.with_note("degenerate: T is a whole member");
        }
        for c in self.clauses.iter().filter(|c| !c.satisfied) {
            r = r.with_note(format!("infeasible at this scale: {} ({})", c.name, c.detail));
        }
        r
    }
}

/// Largest `j` with `ratio^j <= C(n,m)/|F|`, for `ratio > 1`.
fn max_core_size(ratio: &BigRational, f: &SetFamily) -> u32 {
    let cap = rat(choose(f.n() as u64, f.m() as u64)) / rat(f.len());
    let mut j = 0u32;
    while j < f.m() && rpow(ratio, j + 1) <= cap {
        j += 1;
    }
    j
}

/// Find an `(l, lambda)`-extension generator of `F` of size at most
/// `kappa(F) / ln(eps l / (m^2 lambda))`, using `l0 = floor(l sqrt(eps)/lambda)`,
/// `gamma = eps^{-1/4}` and `b = 14 gamma m n / l0`.
pub fn egt_find(f: &SetFamily, l: u32, lambda: &BigRational, eps: &BigRational, prec: u32) -> Result<GeneratorCertificate> {
    if f.is_empty() {
        return Err(Error::precondition("F nonempty", "empty family"));
    }
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::precondition("0 < eps < 1", format!("eps = {eps}")));
    }
    let (n, m) = (f.n(), f.m());
    if l < m || l > n {
        return Err(Error::precondition("m <= l <= n", format!("l = {l}")));
    }
    let ratio = eps * rat(l) / (rat(m * m) * lambda);
    if lambda <= &BigRational::one() || ratio <= BigRational::one() {
        return Err(Error::precondition("1 < lambda < eps l / m^2", format!("lambda = {lambda}, eps l / m^2 = {}", eps * rat(l) / rat(m * m))));
    }
    let l0 = base_level(l, lambda, eps);
    let (gamma, gamma_exact) = gamma_from_eps(eps);
    let mut clauses = Vec::new();
    let b = if l0 >= 1 { Some(scaled_b(n, m, l0, &gamma)) } else { None };
    clauses.push(Clause {
        name: "l0 >= m".into(),
        satisfied: l0 >= m,
        detail: format!("l0 = {l0}, m = {m}"),
    });
    let cap = {
        let a = rat(l0) / rat(m * m);
        let c = rat(choose((n - m.min(n)) as u64, l0.saturating_sub(m) as u64));
        if a < c { a } else { c }
    };
    clauses.push(Clause {
        name: "gamma < min(l0/m^2, C(n-m, l0-m))".into(),
        satisfied: gamma < cap,
        detail: format!("gamma = {gamma}, min = {cap}"),
    });
    clauses.push(Clause { name: "n > 1/eps".into(), satisfied: rat(n) * eps > BigRational::one(), detail: format!("n = {n}") });

    let bound_j = max_core_size(&ratio, f);
    let within_bound = |t: &ElementSet| t.len() <= bound_j;
    let required = |t: &ElementSet| generator_threshold(n, t.len(), l, lambda, prec);
    let evaluate = |t: &ElementSet| -> Result<(u64, Holds)> {
        let count = residual_ext_count(f, t, l)?;
        let h = Holds::from_decision(required(t).le(&Interval::from_int(count, prec)));
        Ok((count, h))
    };

    let extracted = match &b {
        Some(b) if b > &BigRational::one() => gamma_core_extract(f, b)?.t,
        _ => ElementSet::EMPTY,
    };
    let (count, gen) = evaluate(&extracted)?;
    let mut chosen = (extracted, count, gen, Route::Extraction);
    if !(gen.passed() && within_bound(&extracted)) {
        chosen.3 = Route::Unresolved;
        let mut cands: Vec<ElementSet> = vec![ElementSet::EMPTY];
        let mut seen = std::collections::HashSet::new();
        for u in f.sets() {
            for s in submasks(*u) {
                if !s.is_empty() && s.len() <= bound_j && seen.insert(s) {
                    cands.push(s);
                }
            }
            if cands.len() > SEARCH_BUDGET {
                break;
            }
        }
        cands.sort_by(|a, c| a.len().cmp(&c.len()).then(a.cmp(c)));
        cands.truncate(SEARCH_BUDGET);
        for t in cands {
            let (count, gen) = evaluate(&t)?;
            if gen == Holds::True {
                chosen = (t, count, gen, Route::Search);
                break;
            }
        }
    }
    let (t, count, generator, route) = chosen;
    Ok(GeneratorCertificate {
        t,
        l,
        lambda: lambda.clone(),
        achieved_count: BigUint::from(count),
        required_count: required(&t),
        generator,
        cardinality_bound: within_bound(&t),
        l0,
        gamma,
        gamma_exact,
        b,
        degenerate: t.len() == m,
        route,
        clauses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::DEFAULT_PRECISION as P;
    use crate::family::k_subsets;

    fn r(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn star(n: u32, m: u32, core: &[u32]) -> SetFamily {
        let c = ElementSet::of(core);
        SetFamily::full(n, m).unwrap().filter(|s| c.is_subset(s))
    }

    #[test]
    fn generator_examples() {
        let f = star(6, 3, &[1]);
        let t = ElementSet::of(&[1]);
        for l in 3..=6 {
            assert_eq!(is_extension_generator(&f, &t, l, &r(2, 1), P).unwrap().holds, Holds::True);
        }
        let g = SetFamily::from_lists(6, 2, &[&[1, 2], &[1, 3]]).unwrap();
        let rep = is_extension_generator(&g, &ElementSet::EMPTY, 3, &r(1, 1), P).unwrap();
        assert_eq!(rep.lhs, Value::int(ext_count(&g, 3).unwrap()));
        let rep = is_extension_generator(&g, &ElementSet::of(&[1]), 3, &r(1, 1), P).unwrap();
        // residual {{1},{2}} in 5 elements, 2-sets meeting {1,2}: 10 - 3 = 7 >= 10(1 - 1/e)
        assert_eq!(rep.lhs, Value::int(7));
        assert_eq!(rep.holds, Holds::True);
    }

    #[test]
    fn extraction_examples() {
        let f = star(6, 3, &[1]);
        let core = gamma_core_extract(&f, &r(2, 1)).unwrap();
        assert_eq!(core.t, ElementSet::of(&[1]));
        assert_eq!(core.residual_check, Holds::True);

        let single = SetFamily::from_lists(6, 3, &[&[2, 4, 5]]).unwrap();
        let core = gamma_core_extract(&single, &r(2, 1)).unwrap();
        assert_eq!(core.t, ElementSet::of(&[2, 4, 5]));
        assert!(core.degenerate);

        let full = SetFamily::full(6, 2).unwrap();
        let core = gamma_core_extract(&full, &r(1000, 1)).unwrap();
        assert!(core.degenerate);
        let core = gamma_core_extract(&full, &r(11, 10)).unwrap();
        assert_eq!(core.t, ElementSet::EMPTY);
    }

    #[test]
    fn extraction_residual_condition_on_small_families() {
        for mask in 1u32..(1 << 10) {
            let sets: Vec<ElementSet> = k_subsets(5, 2).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
            let f = SetFamily::new(crate::family::Universe::new(5).unwrap(), 2, sets).unwrap();
            for b in [r(6, 5), r(2, 1), r(3, 1)] {
                let core = gamma_core_extract(&f, &b).unwrap();
                assert!(core.residual_check.passed());
                assert!(core.bound_holds);
            }
        }
    }

    #[test]
    fn levels_and_gamma() {
        assert_eq!(base_level(6, &r(6, 5), &r(130321, 160000)), 4);
        assert_eq!(gamma_from_eps(&r(1, 16)), (r(2, 1), true));
        let (g, exact) = gamma_from_eps(&r(1, 2));
        assert!(!exact);
        let f = g.numer().to_string().parse::<f64>().unwrap() / g.denom().to_string().parse::<f64>().unwrap();
        assert!((f - 2f64.powf(0.25)).abs() < 1e-9);
        assert!(Pow::pow(&g, 4i32) * r(1, 2) >= BigRational::one());
    }

    #[test]
    fn egt_find_examples() {
        let eps = r(130321, 160000);
        let full = SetFamily::full(10, 2).unwrap();
        let cert = egt_find(&full, 6, &r(6, 5), &eps, P).unwrap();
        assert_eq!(cert.t, ElementSet::EMPTY);
        assert_eq!(cert.generator, Holds::True);
        assert!(cert.cardinality_bound);

        let s = star(10, 2, &[1]);
        let cert = egt_find(&s, 6, &r(6, 5), &eps, P).unwrap();
        assert_eq!(cert.generator, Holds::True);
        assert!(cert.cardinality_bound);
        assert!(cert.t.contains(1));

        assert!(egt_find(&full, 6, &r(1, 1), &eps, P).is_err());
        assert!(egt_find(&full, 6, &r(2, 1), &eps, P).is_err());
    }
}
