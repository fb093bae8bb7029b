use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Rows up to this `x` are memoized as a Pascal triangle; larger arguments
/// fall back to the multiplicative formula.
pub const TABLE_ROWS: u64 = 320;

/// Memoized exact binomial coefficients.
///
/// Rows are appended under a write lock, so concurrent readers only ever see
/// fully computed rows.
#[derive(Debug, Default)]
pub struct BinomTable {
    rows: RwLock<Vec<Vec<BigUint>>>,
}

impl BinomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: u64, y: u64) -> BigUint {
        if y > x {
            return BigUint::zero();
        }
        if x > TABLE_ROWS {
            return binom_multiplicative(x, y);
        }
        {
            let rows = self.rows.read().expect("binomial table poisoned");
            if let Some(row) = rows.get(x as usize) {
                return row[y as usize].clone();
            }
        }
        let mut rows = self.rows.write().expect("binomial table poisoned");
        while rows.len() <= x as usize {
            let next = match rows.last() {
                None => vec![BigUint::one()],
                Some(prev) => {
                    let mut row = Vec::with_capacity(prev.len() + 1);
                    row.push(BigUint::one());
                    for w in prev.windows(2) {
                        row.push(&w[0] + &w[1]);
                    }
                    row.push(BigUint::one());
                    row
                }
            };
            rows.push(next);
        }
        rows[x as usize][y as usize].clone()
    }
}

fn binom_multiplicative(x: u64, y: u64) -> BigUint {
    let y = y.min(x - y);
    let mut acc = BigUint::one();
    for i in 0..y {
        acc = acc * BigUint::from(x - i) / BigUint::from(i + 1);
    }
    acc
}

fn table() -> &'static BinomTable {
    static TABLE: OnceLock<BinomTable> = OnceLock::new();
    TABLE.get_or_init(BinomTable::new)
}

/// Exact `C(x, y)`, zero when `y < 0` or `y > x`. Negative `x` is rejected.
pub fn binom(x: i64, y: i64) -> Result<BigUint> {
    if x < 0 {
        return Err(Error::InvalidArgument(format!("binomial with negative x = {x}")));
    }
    if y < 0 || y > x {
        return Ok(BigUint::zero());
    }
    Ok(table().get(x as u64, y as u64))
}

/// `C(x, y)` for callers that already know `x >= 0`.
pub fn choose(x: u64, y: u64) -> BigUint {
    table().get(x, y)
}

/// Signed-argument variant of [`choose`] that returns zero outside the range,
/// including for negative `x`. Used for closed forms such as `C(n-2m+j, l-2m+j)`.
pub fn choose_or_zero(x: i64, y: i64) -> BigUint {
    if x < 0 || y < 0 || y > x {
        BigUint::zero()
    } else {
        table().get(x as u64, y as u64)
    }
}

fn small_table() -> &'static Vec<Vec<u128>> {
    static SMALL: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = vec![vec![1]];
        for x in 1..=127usize {
            let prev = &rows[x - 1];
            let mut row = vec![1u128; x + 1];
            for y in 1..x {
                row[y] = prev[y - 1] + prev[y];
            }
            rows.push(row);
        }
        rows
    })
}

/// `C(x, y)` as a machine integer for `x <= 127`; zero outside the range.
pub fn choose_u128(x: i64, y: i64) -> u128 {
    if x < 0 || y < 0 || y > x {
        return 0;
    }
    assert!(x <= 127, "choose_u128 supports x <= 127");
    small_table()[x as usize][y as usize]
}

/// `n!` exactly.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(binom(5, 2).unwrap(), BigUint::from(10u32));
        assert_eq!(binom(5, 7).unwrap(), BigUint::zero());
        assert_eq!(binom(5, -1).unwrap(), BigUint::zero());
        assert!(binom(-1, 0).is_err());
    }

    #[test]
    fn pascal_recurrence_up_to_64() {
        for x in 1..=64i64 {
            for y in 1..x {
                let lhs = binom(x, y).unwrap();
                let rhs = binom(x - 1, y - 1).unwrap() + binom(x - 1, y).unwrap();
                assert_eq!(lhs, rhs, "C({x},{y})");
            }
        }
    }

    #[test]
    fn table_and_formula_agree_past_the_boundary() {
        for y in [0u64, 1, 7, 150, 161, 330] {
            let x = TABLE_ROWS + 10;
            let via_formula = binom_multiplicative(x, y);
            let via_pascal = choose(x - 1, y.saturating_sub(1)) + choose(x - 1, y);
            if y > 0 {
                assert_eq!(via_formula, via_pascal);
            }
        }
        assert_eq!(choose_u128(127, 63).to_string(), choose(127, 63).to_string());
    }
}
