//! Exact binomials, the function `s(t)`, and rigorous interval checks of the
//! Stirling-type binomial estimates.

pub mod binom;
pub mod float;
pub mod interval;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use binom::{binom, choose, choose_or_zero, choose_u128, factorial, BinomTable};
pub use float::{BigFloat, Round};
pub use interval::{Interval, DEFAULT_PRECISION};

use crate::error::{Error, Result};
use crate::verdict::{Holds, Value, VerdictReport};

pub const CLAIM_STIRLING: &str = "lemma-a.1";
pub const CLAIM_STIRLING_SHIFT: &str = "lemma-a.2";
pub const CLAIM_BINOM_UPPER: &str = "eq-2.3";

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn check_unit_open(t: &BigRational) -> Result<()> {
    if t <= &BigRational::zero() || t >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!("s(t) requires 0 < t < 1, got {t}")));
    }
    Ok(())
}

/// `s(t) = 1 - (1 - 1/t) ln(1 - t)` for rational `t` in `(0, 1)`.
pub fn s_closed(t: &BigRational, prec: u32) -> Result<Interval> {
    check_unit_open(t)?;
    let one = BigRational::one();
    let log = Interval::from_rational(&(&one - t), prec).ln();
    let coeff = Interval::from_rational(&((t - &one) / t), prec);
    Ok(&Interval::from_int(1, prec) - &(&coeff * &log))
}

/// Truncated series for `s(t)` with a rigorous tail bound.
#[derive(Debug, Clone)]
pub struct SeriesEnclosure {
    /// `sum_{j=1}^{terms} t^j / (j(j+1))`, exactly.
    pub partial: BigRational,
    /// Upper bound `t^(terms+1) / ((terms+1)(1-t))` on the omitted terms.
    pub tail_bound: BigRational,
    /// `[partial, partial + tail_bound]`, outward rounded.
    pub enclosure: Interval,
}

pub fn s_series(t: &BigRational, terms: u32, prec: u32) -> Result<SeriesEnclosure> {
    check_unit_open(t)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("s_series needs at least one term".into()));
    }
    let mut partial = BigRational::zero();
    let mut power = BigRational::one();
    for j in 1..=terms as i64 {
        power = &power * t;
        partial += &power / BigRational::from_integer(BigInt::from(j * (j + 1)));
    }
    let n1 = BigRational::from_integer(BigInt::from(terms as i64 + 1));
    let tail_bound = &power * t / (n1 * (BigRational::one() - t));
    let lo = Interval::from_rational(&partial, prec);
    let hi = Interval::from_rational(&(&partial + &tail_bound), prec);
    let enclosure = lo.hull(&hi);
    Ok(SeriesEnclosure { partial, tail_bound, enclosure })
}

fn ln_ratio(p: i64, q: i64, prec: u32) -> Interval {
    Interval::from_rational(&ratio(p, q), prec).ln()
}

fn ln_binom(x: i64, y: i64, prec: u32) -> Interval {
    Interval::from_biguint(&choose_or_zero(x, y), prec).ln()
}

/// Decide `lo < z < hi` where `lo`, `hi` are exact rationals.
fn strictly_between(lower: &BigRational, z: &Interval, upper: &BigRational, prec: u32) -> Holds {
    let below = Interval::from_rational(lower, prec).lt(z);
    let above = z.lt(&Interval::from_rational(upper, prec));
    Holds::from_decision(below).and(Holds::from_decision(above))
}

fn widen_note(r: VerdictReport) -> VerdictReport {
    if r.holds == Holds::Inconclusive {
        r.with_note("inconclusive: widen precision")
    } else {
        r
    }
}

/// Two-sided Stirling estimate of `ln C(x, y)` for `0 < y < x`.
///
/// Checks `1/(12x+1) - 1/(12y) - 1/(12(x-y)) < z < 1/(12x) - 1/(12y+1) - 1/(12(x-y)+1)`
/// where `z = ln C(x,y) - y[ln(x/y) + 1 - s(y/x)] - ln(x / (2 pi y (x-y))) / 2`.
pub fn lemma_asymptotic_check(x: i64, y: i64, prec: u32) -> Result<VerdictReport> {
    if y <= 0 || y >= x {
        return Err(Error::precondition("0 < y < x", format!("x = {x}, y = {y}")));
    }
    let one = Interval::from_int(1, prec);
    let s = s_closed(&ratio(y, x), prec)?;
    let bracket = &(&ln_ratio(x, y, prec) + &one) - &s;
    let denom = &Interval::pi(prec).mul_pow2(1) * &Interval::from_int(y * (x - y), prec);
    let log_term = (&Interval::from_int(x, prec) / &denom).ln().mul_pow2(-1);
    let z = &(&ln_binom(x, y, prec) - &(&Interval::from_int(y, prec) * &bracket)) - &log_term;

    let lower = ratio(1, 12 * x + 1) - ratio(1, 12 * y) - ratio(1, 12 * (x - y));
    let upper = ratio(1, 12 * x) - ratio(1, 12 * y + 1) - ratio(1, 12 * (x - y) + 1);
    let holds = strictly_between(&lower, &z, &upper, prec);
    let r = VerdictReport::new(CLAIM_STIRLING, holds, Value::Interval(z.clone()), Value::rational(upper.clone()))
        .with_detail("lower", Value::rational(lower))
        .with_detail("z", Value::Interval(z))
        .with_detail("upper", Value::rational(upper));
    Ok(widen_note(r))
}

/// Shifted estimate: for `x >= 3y > 0` and `0 <= j < y`,
/// `|ln C(x,y) - ln C(x-y, y-j) - j(ln(x/y)+1) - (y-j+1/2) ln(1-j/y)|`
/// is below `(3y/2x)(j + 2y ln 2) + 1/4 + ln(3/2)/2`.
pub fn lemma_asymptotic1_check(x: i64, y: i64, j: i64, prec: u32) -> Result<VerdictReport> {
    if y <= 0 || x < 3 * y {
        return Err(Error::precondition("x >= 3y > 0", format!("x = {x}, y = {y}")));
    }
    if j < 0 || j >= y {
        return Err(Error::precondition("0 <= j < y", format!("j = {j}, y = {y}")));
    }
    let one = Interval::from_int(1, prec);
    let jj = Interval::from_int(j, prec);
    let mut inner = &ln_binom(x, y, prec) - &ln_binom(x - y, y - j, prec);
    inner = &inner - &(&jj * &(&ln_ratio(x, y, prec) + &one));
    let weight = Interval::from_rational(&(ratio(y - j, 1) + ratio(1, 2)), prec);
    inner = &inner - &(&weight * &ln_ratio(y - j, y, prec));
    let lhs = inner.abs();

    let ln2 = Interval::ln2(prec);
    let scaled = &jj + &(&Interval::from_int(2 * y, prec) * &ln2);
    let rhs = &(&Interval::from_rational(&ratio(3 * y, 2 * x), prec) * &scaled)
        + &(&Interval::from_ratio(1, 4, prec) + &ln_ratio(3, 2, prec).mul_pow2(-1));
    let holds = Holds::from_decision(lhs.lt(&rhs));
    let r = VerdictReport::new(CLAIM_STIRLING_SHIFT, holds, Value::Interval(lhs), Value::Interval(rhs));
    Ok(widen_note(r))
}

/// `C(x, y) < (e x / y)^y` for `x, y >= 1`, decided on logarithms.
pub fn binom_upper_check(x: i64, y: i64, prec: u32) -> Result<VerdictReport> {
    if x < 1 || y < 1 {
        return Err(Error::precondition("x, y >= 1", format!("x = {x}, y = {y}")));
    }
    let exact = choose_or_zero(x, y);
    if exact.is_zero() {
        // y > x: the left side vanishes while the right side is positive.
        return Ok(VerdictReport::new(CLAIM_BINOM_UPPER, Holds::True, Value::int(0), Value::Absent)
            .with_note("binomial vanishes"));
    }
    let lhs = Interval::from_biguint(&exact, prec).ln();
    let rhs = &Interval::from_int(y, prec) * &(&ln_ratio(x, y, prec) + &Interval::from_int(1, prec));
    let holds = Holds::from_decision(lhs.lt(&rhs));
    let r = VerdictReport::new(CLAIM_BINOM_UPPER, holds, Value::Interval(lhs), Value::Interval(rhs))
        .with_detail("binomial", Value::uint(&exact))
        .with_note("both sides as natural logarithms");
    Ok(widen_note(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = DEFAULT_PRECISION;

    #[test]
    fn s_at_one_half_is_one_minus_ln2() {
        let s = s_closed(&ratio(1, 2), P).unwrap();
        let want = &Interval::from_int(1, P) - &Interval::ln2(P);
        assert!(s.intersects(&want));
        assert!((s.midpoint_f64() - 0.306_852_819_440_054_7).abs() < 1e-15);
    }

    #[test]
    fn s_decreases_to_zero() {
        let mut prev: Option<Interval> = None;
        for k in 1..=6u32 {
            let t = BigRational::new(1.into(), BigInt::from(10u32).pow(k));
            let s = s_closed(&t, P).unwrap();
            assert!(s.is_positive());
            if let Some(p) = prev {
                assert_eq!(s.lt(&p), Some(true));
            }
            prev = Some(s);
        }
    }

    #[test]
    fn series_matches_closed_form() {
        let t = ratio(1, 3);
        let series = s_series(&t, 200, P).unwrap();
        let closed = s_closed(&t, P).unwrap();
        assert!(series.enclosure.intersects(&closed));
        let diff = (&series.enclosure - &closed).abs();
        let tol = Interval::point(BigFloat::from_parts(BigInt::one(), -100), P);
        assert_eq!(diff.lt(&tol), Some(true));
    }

    #[test]
    fn series_first_term_and_tail() {
        let e = s_series(&ratio(1, 2), 1, P).unwrap();
        assert_eq!(e.partial, ratio(1, 4));
        assert_eq!(e.tail_bound, ratio(1, 4));
        let e = s_series(&ratio(1, 2), 100, P).unwrap();
        assert!(e.enclosure.intersects(&s_closed(&ratio(1, 2), P).unwrap()));
        let e = s_series(&ratio(9, 10), 500, P).unwrap();
        let tol = Interval::point(BigFloat::from_parts(BigInt::one(), -50), P);
        assert_eq!(e.enclosure.width().cmp(tol.lo()), std::cmp::Ordering::Less);
    }

    #[test]
    fn s_rejects_out_of_range() {
        assert!(s_closed(&ratio(0, 1), P).is_err());
        assert!(s_closed(&ratio(1, 1), P).is_err());
        assert!(s_series(&ratio(3, 2), 4, P).is_err());
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(lemma_asymptotic_check(10, 3, P).unwrap().holds, Holds::True);
        assert_eq!(lemma_asymptotic_check(200, 1, P).unwrap().holds, Holds::True);
        assert!(lemma_asymptotic_check(3, 3, P).is_err());
        let r = lemma_asymptotic_check(10, 3, P).unwrap();
        assert!(r.detail("lower").is_some() && r.detail("z").is_some() && r.detail("upper").is_some());
    }

    #[test]
    fn shifted_examples() {
        assert_eq!(lemma_asymptotic1_check(30, 10, 0, P).unwrap().holds, Holds::True);
        assert_eq!(lemma_asymptotic1_check(9, 3, 2, P).unwrap().holds, Holds::True);
        assert!(lemma_asymptotic1_check(8, 3, 1, P).is_err());
    }

    #[test]
    fn binom_upper_examples() {
        for (x, y) in [(4, 2), (1, 1), (100, 50)] {
            assert_eq!(binom_upper_check(x, y, P).unwrap().holds, Holds::True, "({x},{y})");
        }
    }
}
