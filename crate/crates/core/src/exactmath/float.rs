//! Binary floating point with arbitrary-size mantissa and explicit rounding
//! direction. Only the operations needed by [`Interval`](super::Interval)
//! are provided; every result is rounded in the requested direction so that
//! interval endpoints stay outward-rounded.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rounding direction for a single operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant * 2^exp`. Zero is always stored as `mant = 0, exp = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    // BigInt >> rounds toward -inf
    match dir {
        Round::Down => m >> k,
        Round::Up => -((-m) >> k),
    }
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::normalized(v.into(), 0)
    }

    /// Exact dyadic `mant * 2^exp`.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        Self::normalized(mant, exp)
    }

    fn normalized(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            BigFloat { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            BigFloat { mant, exp }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`.
    /// Zero returns `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.mant.bits() as i64 + self.exp
    }

    /// Round to at most `prec` mantissa bits.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        Self::normalized(shr_round(&self.mant, k, dir), self.exp + k as i64)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Self, prec: u32, dir: Round) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        // When the exponents are far apart the exact sum would be huge; the
        // smaller operand then only matters as a sticky bit.
        let (big, small) = if self.magnitude() >= other.magnitude() {
            (self, other)
        } else {
            (other, self)
        };
        let gap = big.magnitude() - small.magnitude();
        if gap > prec as i64 + 4 {
            let shift = prec as i64 + 4 - big.mant.bits() as i64;
            let (m, e) = if shift > 0 {
                (&big.mant << shift as u64, big.exp - shift)
            } else {
                (big.mant.clone(), big.exp)
            };
            let nudged = if small.signum() > 0 { m * 2 + 1 } else { m * 2 - 1 };
            return Self::normalized(nudged, e - 1).round(prec, dir);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::normalized(a + b, e).round(prec, dir)
    }

    pub fn sub(&self, other: &Self, prec: u32, dir: Round) -> Self {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Self, prec: u32, dir: Round) -> Self {
        Self::normalized(&self.mant * &other.mant, self.exp + other.exp).round(prec, dir)
    }

    /// Division; `other` must be nonzero.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        let (q, r) = num.div_mod_floor(&other.mant);
        let q = if dir == Round::Up && !r.is_zero() { q + 1 } else { q };
        // div_mod_floor rounds toward -inf, which is Down already.
        Self::normalized(q, self.exp - other.exp - shift).round(prec, dir)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (n, d) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        Self::from_int(n).div(&Self::from_int(d), prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = bits.min(60);
        let m = &self.mant >> (bits - keep) as u64;
        let m: i64 = m.try_into().unwrap_or(0);
        let e = self.exp + bits - keep;
        (m as f64) * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    /// Decimal rendering with `digits` fractional digits, rounded in `dir`.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        let scaled = self.to_rational() * BigRational::from_integer(BigInt::from(10u32).pow(digits));
        let int = match dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        let neg = int.is_negative();
        let s = int.abs().to_string();
        let s = if s.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits as usize);
        let body = if digits == 0 { ip.to_string() } else { format!("{ip}.{fp}") };
        if neg { format!("-{body}") } else { body }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(v: i64) -> BigFloat {
        BigFloat::from_int(v)
    }

    #[test]
    fn division_brackets_one_third() {
        let lo = bf(1).div(&bf(3), 64, Round::Down);
        let hi = bf(1).div(&bf(3), 64, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third);
        assert!(hi.to_rational() > third);
        assert!(hi.to_rational() - lo.to_rational() < BigRational::new(1.into(), BigInt::one() << 62u32));
    }

    #[test]
    fn rounding_negative_values() {
        let x = BigFloat::from_int(-7); // 0b111
        assert_eq!(x.round(2, Round::Down), bf(-8));
        assert_eq!(x.round(2, Round::Up), bf(-6));
    }

    #[test]
    fn add_with_huge_gap_stays_directed() {
        let big = bf(1);
        let tiny = BigFloat::from_parts(BigInt::one(), -500);
        let up = big.add(&tiny, 53, Round::Up);
        let down = big.add(&tiny, 53, Round::Down);
        assert!(up > big);
        assert_eq!(down, big);
        let down_neg = big.add(&tiny.neg(), 53, Round::Down);
        assert!(down_neg < big);
    }

    #[test]
    fn decimal_rendering() {
        let x = BigFloat::from_parts(BigInt::from(5), -2); // 1.25
        assert_eq!(x.to_decimal(1, Round::Down), "1.2");
        assert_eq!(x.to_decimal(1, Round::Up), "1.3");
        assert_eq!(x.neg().to_decimal(3, Round::Down), "-1.250");
        assert_eq!(BigFloat::from_parts(BigInt::one(), -4).to_decimal(2, Round::Up), "0.07");
    }
}
