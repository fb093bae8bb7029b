//! Closed intervals with [`BigFloat`] endpoints.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint up,
//! so the true real value is always enclosed. Transcendental functions add a
//! rigorous series tail bound before rounding.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::float::{BigFloat, Round};

/// Default working precision in mantissa bits.
pub const DEFAULT_PRECISION: u32 = 128;

const GUARD_BITS: u32 = 32;

/// A closed interval `[lo, hi]` that encloses a real number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: u32,
}

impl Interval {
    pub fn point(v: BigFloat, prec: u32) -> Self {
        Interval { lo: v.round(prec, Round::Down), hi: v.round(prec, Round::Up), prec }
    }

    pub fn from_bounds(lo: BigFloat, hi: BigFloat, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo: lo.round(prec, Round::Down), hi: hi.round(prec, Round::Up), prec }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self::point(BigFloat::from_int(v), prec)
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        Self::from_int(BigInt::from(v.clone()), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: BigFloat::from_rational(q, prec, Round::Down),
            hi: BigFloat::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-round to a (usually lower) precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        Interval { lo: self.lo.round(prec, Round::Down), hi: self.hi.round(prec, Round::Up), prec }
    }

    pub fn width(&self) -> BigFloat {
        self.hi.sub(&self.lo, self.prec, Round::Up)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Decided `self < other`: `Some(true)`/`Some(false)` when the intervals
    /// settle it, `None` when they overlap.
    pub fn lt(&self, other: &Interval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Decided `self <= other`.
    pub fn le(&self, other: &Interval) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    fn p(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn recip(&self) -> Interval {
        Interval::from_int(1, self.prec) / self
    }

    pub fn square(&self) -> Interval {
        let p = self.prec;
        if self.lo.signum() >= 0 {
            Interval { lo: self.lo.mul(&self.lo, p, Round::Down), hi: self.hi.mul(&self.hi, p, Round::Up), prec: p }
        } else if self.hi.signum() <= 0 {
            Interval { lo: self.hi.mul(&self.hi, p, Round::Down), hi: self.lo.mul(&self.lo, p, Round::Up), prec: p }
        } else {
            let a = self.lo.mul(&self.lo, p, Round::Up);
            let b = self.hi.mul(&self.hi, p, Round::Up);
            Interval { lo: BigFloat::zero(), hi: a.max(b), prec: p }
        }
    }

    pub fn powi(&self, n: u32) -> Interval {
        if n % 2 == 0 && self.lo.signum() < 0 {
            return self.abs().powi(n);
        }
        let mut result = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = if base.lo.signum() >= 0 { base.square() } else { &base * &base };
            }
        }
        result
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            Interval { lo: BigFloat::zero(), hi: self.lo.abs().max(self.hi.abs()), prec: self.prec }
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.p(other),
        }
    }

    /// Natural logarithm; the interval must be strictly positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.signum() > 0, "ln of non-positive interval");
        let w = self.prec + GUARD_BITS;
        let lo = ln_point(&self.lo, w).lo;
        let hi = if self.hi == self.lo { ln_point(&self.lo, w).hi } else { ln_point(&self.hi, w).hi };
        Interval::from_bounds(lo, hi, self.prec)
    }

    pub fn exp(&self) -> Interval {
        let lo = exp_point(&self.lo, self.prec).lo;
        let hi = if self.hi == self.lo { exp_point(&self.lo, self.prec).hi } else { exp_point(&self.hi, self.prec).hi };
        Interval::from_bounds(lo, hi, self.prec)
    }

    pub fn pi(prec: u32) -> Interval {
        cached(Constant::Pi, prec)
    }

    pub fn ln2(prec: u32) -> Interval {
        cached(Constant::Ln2, prec)
    }

    /// `e` itself.
    pub fn e(prec: u32) -> Interval {
        Interval::from_int(1, prec).exp()
    }

    pub fn to_decimal_pair(&self, digits: u32) -> (String, String) {
        (self.lo.to_decimal(digits, Round::Down), self.hi.to_decimal(digits, Round::Up))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(20);
        write!(f, "[{lo}, {hi}]")
    }
}

#[derive(Serialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (lo, hi) = self.to_decimal_pair(30);
        IntervalRepr { lo, hi }.serialize(serializer)
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let p = self.p(rhs);
        Interval { lo: self.lo.add(&rhs.lo, p, Round::Down), hi: self.hi.add(&rhs.hi, p, Round::Up), prec: p }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let p = self.p(rhs);
        Interval { lo: self.lo.sub(&rhs.hi, p, Round::Down), hi: self.hi.sub(&rhs.lo, p, Round::Up), prec: p }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.p(rhs);
        if self.lo.signum() >= 0 && rhs.lo.signum() >= 0 {
            return Interval { lo: self.lo.mul(&rhs.lo, p, Round::Down), hi: self.hi.mul(&rhs.hi, p, Round::Up), prec: p };
        }
        let pairs = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let lo = pairs.iter().map(|(a, b)| a.mul(b, p, Round::Down)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.mul(b, p, Round::Up)).max().unwrap();
        Interval { lo, hi, prec: p }
    }
}

impl Div for &Interval {
    type Output = Interval;
    fn div(self, rhs: &Interval) -> Interval {
        assert!(!rhs.contains_zero(), "interval division by an interval containing zero");
        let p = self.p(rhs);
        let pairs = [(&self.lo, &rhs.lo), (&self.lo, &rhs.hi), (&self.hi, &rhs.lo), (&self.hi, &rhs.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div(b, p, Round::Down)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.div(b, p, Round::Up)).max().unwrap();
        Interval { lo, hi, prec: p }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Pi,
    Ln2,
}

thread_local! {
    static CONSTANTS: RefCell<HashMap<(Constant, u32), Interval>> = RefCell::new(HashMap::new());
}

fn cached(c: Constant, prec: u32) -> Interval {
    if let Some(v) = CONSTANTS.with(|m| m.borrow().get(&(c, prec)).cloned()) {
        return v;
    }
    let w = prec + GUARD_BITS;
    let v = match c {
        Constant::Pi => {
            // 16 atan(1/5) - 4 atan(1/239)
            let a = atan_inv(5, w).mul_pow2(4);
            let b = atan_inv(239, w).mul_pow2(2);
            (&a - &b).with_precision(prec)
        }
        Constant::Ln2 => {
            // 2 atanh(1/3)
            let z = Interval::from_ratio(1, 3, w);
            atanh_series(&z).mul_pow2(1).with_precision(prec)
        }
    };
    CONSTANTS.with(|m| m.borrow_mut().insert((c, prec), v.clone()));
    v
}

fn two_pow_neg(k: u32, prec: u32) -> Interval {
    Interval::point(BigFloat::from_parts(BigInt::one(), -(k as i64)), prec)
}

/// `atan(1/x)` for integer `x >= 2` by the alternating series.
fn atan_inv(x: u64, w: u32) -> Interval {
    let xi = Interval::from_int(x, w);
    let x2 = xi.square();
    let mut power = xi.recip(); // 1/x^(2i+1)
    let mut sum = Interval::from_int(0, w);
    let eps = two_pow_neg(w + 2, w);
    let mut i: u64 = 0;
    loop {
        let term = &power / &Interval::from_int(2 * i + 1, w);
        if i % 2 == 0 {
            sum = &sum + &term;
        } else {
            sum = &sum - &term;
        }
        power = &power / &x2;
        i += 1;
        let next = &power / &Interval::from_int(2 * i + 1, w);
        if next.hi() < eps.lo() {
            // alternating with decreasing terms: the tail lies between 0 and
            // the next term, with the next term's sign
            let zero = BigFloat::zero();
            let tail = if i % 2 == 0 {
                Interval::from_bounds(zero, next.hi().clone(), w)
            } else {
                Interval::from_bounds(next.hi().neg(), zero, w)
            };
            return &sum + &tail;
        }
    }
}

/// `atanh(z)` for an interval with `|z| <= 1/3`.
fn atanh_series(z: &Interval) -> Interval {
    let w = z.precision();
    let z2 = z.square();
    let mut power = z.clone();
    let mut sum = Interval::from_int(0, w);
    let mut k: u64 = 1;
    let zabs_hi = z.lo().abs().max(z.hi().abs());
    let zabs = Interval::point(zabs_hi, w);
    let one_minus = &Interval::from_int(1, w) - &zabs.square();
    let eps = two_pow_neg(w + 2, w);
    let mut abs_power = zabs.clone();
    loop {
        sum = &sum + &(&power / &Interval::from_int(k, w));
        power = &power * &z2;
        abs_power = &abs_power * &zabs.square();
        k += 2;
        if abs_power.hi() < eps.lo() || z.lo().is_zero() && z.hi().is_zero() {
            // |tail| <= |z|^k / (k (1 - z^2))
            let bound = &abs_power / &(&Interval::from_int(k, w) * &one_minus);
            let b = bound.hi().clone();
            return &sum + &Interval::from_bounds(b.neg(), b, w);
        }
    }
}

/// Enclosure of `ln(v)` for a positive dyadic `v`, at precision `w`.
///
/// Writes `v = y 2^k` with `y` in `[3/4, 3/2)` and sums
/// `ln y = 2 atanh(z)`, `z = (y-1)/(y+1)`, `|z| <= 1/5`, in fixed point
/// with `W` fractional bits. Every truncation is off by less than one unit;
/// with `|z|^2 <= 1/25` the running power stays within 2 units and each
/// term within 3, and the truncated tail adds at most 3 more, so
/// `4 (terms + 2)` units bound the total error.
fn ln_point(v: &BigFloat, w: u32) -> Interval {
    let mut k = v.magnitude() - 1;
    let mut y = v.mul_pow2(-k);
    let three_halves = BigFloat::from_parts(BigInt::from(3), -1);
    if y >= three_halves {
        k += 1;
        y = y.mul_pow2(-1);
    }
    let wide = w + 16;
    // y = a / 2^e exactly
    let (a, e) = if y.exponent() >= 0 {
        (y.mantissa() << (y.exponent() as u64), 0u64)
    } else {
        (y.mantissa().clone(), (-y.exponent()) as u64)
    };
    let unit = BigInt::one() << e;
    let num = &a - &unit;
    let den = &a + &unit;
    let z = (num << wide as u64) / den;
    let z2 = (&z * &z) >> wide as u64;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    let mut d: u64 = 1;
    while !power.is_zero() {
        sum += &power / BigInt::from(d);
        terms += 1;
        power = &power * &z2;
        // truncate toward zero, like the division above
        power = if power.sign() == num_bigint::Sign::Minus { -((-power) >> wide as u64) } else { power >> wide as u64 };
        d += 2;
    }
    let err = BigInt::from(4 * (terms + 2));
    let lo = BigFloat::from_parts((&sum - &err) << 1u32, -(wide as i64));
    let hi = BigFloat::from_parts((&sum + &err) << 1u32, -(wide as i64));
    let ln_y = Interval::from_bounds(lo, hi, w + 8);
    let ln2 = Interval::ln2(w + 8);
    (&ln_y + &(&ln2 * &Interval::from_int(k, w + 8))).with_precision(w)
}

/// Enclosure of `exp(v)` at precision `prec`.
fn exp_point(v: &BigFloat, prec: u32) -> Interval {
    if v.is_zero() {
        return Interval::from_int(1, prec);
    }
    // r = v / 2^s with |r| < 2^-10, then square s times
    let s = (v.magnitude() + 10).max(0) as u32;
    let w = prec + GUARD_BITS + s + 8;
    let r = Interval::point(v.mul_pow2(-(s as i64)), w);
    let rabs = Interval::point(v.abs().mul_pow2(-(s as i64)), w);
    let eps = two_pow_neg(w + 2, w);
    let mut sum = Interval::from_int(1, w);
    let mut term = Interval::from_int(1, w);
    let mut abs_term = Interval::from_int(1, w);
    let mut i: u64 = 1;
    loop {
        term = &(&term * &r) / &Interval::from_int(i, w);
        abs_term = &(&abs_term * &rabs) / &Interval::from_int(i, w);
        sum = &sum + &term;
        i += 1;
        if abs_term.hi() < eps.lo() {
            // remaining terms sum to at most 2 |r|^i / i! since |r| < 1/2
            let next = &(&abs_term * &rabs) / &Interval::from_int(i, w);
            let b = next.hi().mul_pow2(1);
            sum = &sum + &Interval::from_bounds(b.neg(), b, w);
            break;
        }
    }
    for _ in 0..s {
        sum = sum.square();
    }
    sum.with_precision(prec)
}

impl Zero for Interval {
    fn zero() -> Self {
        Interval::from_int(0, DEFAULT_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn assert_contains(iv: &Interval, approx: f64, tol: f64) {
        assert!(iv.lo().to_f64() <= approx + tol && approx - tol <= iv.hi().to_f64(), "{iv} vs {approx}");
    }

    fn narrow(iv: &Interval, bits: i64) {
        let w = iv.width();
        assert!(w.is_zero() || w.magnitude() < -bits, "interval too wide: {iv}");
    }

    #[test]
    fn pi_and_ln2() {
        let pi = Interval::pi(P);
        assert_contains(&pi, std::f64::consts::PI, 1e-15);
        narrow(&pi, 120);
        let ln2 = Interval::ln2(P);
        assert_contains(&ln2, std::f64::consts::LN_2, 1e-15);
        narrow(&ln2, 120);
    }

    #[test]
    fn ln_of_known_values() {
        let ten = Interval::from_int(10, P).ln();
        assert_contains(&ten, 10f64.ln(), 1e-14);
        narrow(&ten, 118);
        let small = Interval::from_ratio(1, 1000, P).ln();
        assert_contains(&small, (0.001f64).ln(), 1e-13);
        assert_eq!(Interval::from_int(1, P).ln().contains_zero(), true);
    }

    #[test]
    fn exp_of_known_values() {
        let e = Interval::e(P);
        assert_contains(&e, std::f64::consts::E, 1e-15);
        narrow(&e, 120);
        let big = Interval::from_int(50, P).exp();
        assert_contains(&big, 50f64.exp(), 50f64.exp() * 1e-14);
        let neg = Interval::from_int(-30, P).exp();
        assert_contains(&neg, (-30f64).exp(), 1e-25);
    }

    #[test]
    fn exp_ln_round_trip_encloses_input() {
        for (n, d) in [(7i64, 3i64), (1, 9), (1000, 7), (3, 2)] {
            let x = Interval::from_ratio(n, d, P);
            let back = x.ln().exp();
            assert!(back.contains_rational(&BigRational::new(n.into(), d.into())));
            narrow(&back, 100);
        }
    }

    #[test]
    fn comparisons_are_three_valued() {
        let a = Interval::from_ratio(1, 3, P);
        let b = Interval::from_ratio(1, 2, P);
        assert_eq!(a.lt(&b), Some(true));
        assert_eq!(b.lt(&a), Some(false));
        assert_eq!(a.lt(&a), None);
        assert_eq!(Interval::from_int(2, P).le(&Interval::from_int(2, P)), Some(true));
    }

    #[test]
    fn mixed_sign_multiplication() {
        let a = Interval::from_bounds(BigFloat::from_int(-2), BigFloat::from_int(3), P);
        let b = Interval::from_bounds(BigFloat::from_int(-5), BigFloat::from_int(1), P);
        let c = &a * &b;
        assert_eq!(c.lo(), &BigFloat::from_int(-15));
        assert_eq!(c.hi(), &BigFloat::from_int(10));
        assert_eq!(a.powi(2).lo(), &BigFloat::from_int(0));
    }
}
