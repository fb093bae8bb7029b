//! Structured pass/fail results shared by every checker.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::exactmath::Interval;

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Holds {
    True,
    False,
    /// The claimed bound is trivially satisfied (e.g. a non-positive lower bound).
    Vacuous,
    /// Interval enclosures overlap; retry at higher precision.
    Inconclusive,
}

impl Holds {
    pub fn from_bool(b: bool) -> Self {
        if b { Holds::True } else { Holds::False }
    }

    pub fn from_decision(d: Option<bool>) -> Self {
        match d {
            Some(b) => Holds::from_bool(b),
            None => Holds::Inconclusive,
        }
    }

    /// True or vacuous.
    pub fn passed(self) -> bool {
        matches!(self, Holds::True | Holds::Vacuous)
    }

    /// Conjunction: any failure wins, then inconclusive, then true.
    pub fn and(self, other: Holds) -> Holds {
        use Holds::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (True, _) | (_, True) => True,
            (Vacuous, Vacuous) => Vacuous,
        }
    }
}

impl fmt::Display for Holds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Holds::True => "true",
            Holds::False => "false",
            Holds::Vacuous => "vacuous",
            Holds::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

impl Serialize for Holds {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Holds::True => s.serialize_bool(true),
            Holds::False => s.serialize_bool(false),
            Holds::Vacuous => s.serialize_str("vacuous"),
            Holds::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

/// One side of a checked relation.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Integer(BigInt),
    Rational(BigRational),
    Interval(Interval),
    PosInfinity,
    Absent,
}

impl Value {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Value::Integer(v.into())
    }

    pub fn uint(v: &BigUint) -> Self {
        Value::Integer(BigInt::from(v.clone()))
    }

    pub fn rational(q: BigRational) -> Self {
        if q.is_integer() { Value::Integer(q.to_integer()) } else { Value::Rational(q) }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(v) => write!(f, "{v}"),
            Value::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::Interval(iv) => write!(f, "{iv}"),
            Value::PosInfinity => f.write_str("+inf"),
            Value::Absent => f.write_str("-"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Interval(iv) => iv.serialize(s),
            Value::Absent => s.serialize_none(),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Evidence attached to a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Elements(Vec<u32>),
    Indices(Vec<usize>),
    Text(String),
    /// A sunflower: common core and the full member sets.
    Sunflower { core: Vec<u32>, petals: Vec<Vec<u32>> },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::Elements(v) => v.serialize(s),
            Witness::Indices(v) => v.serialize(s),
            Witness::Text(t) => s.serialize_str(t),
            Witness::Sunflower { core, petals } => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("core", core)?;
                map.serialize_entry("petals", petals)?;
                map.end()
            }
        }
    }
}

/// Result of checking one claim.
#[derive(Debug, Clone)]
pub struct VerdictReport {
    pub claim_id: String,
    pub holds: Holds,
    pub lhs: Value,
    pub rhs: Value,
    pub witness: Option<Witness>,
    /// Named intermediate quantities (bounds, counts) reported alongside.
    pub details: Vec<(String, Value)>,
    pub notes: Vec<String>,
    pub runtime_ms: Option<u128>,
}

impl VerdictReport {
    pub fn new(claim_id: impl Into<String>, holds: Holds, lhs: Value, rhs: Value) -> Self {
        VerdictReport { claim_id: claim_id.into(), holds, lhs, rhs, witness: None, details: Vec::new(), notes: Vec::new(), runtime_ms: None }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_detail(mut self, name: impl Into<String>, v: Value) -> Self {
        self.details.push((name.into(), v));
        self
    }

    pub fn detail(&self, name: &str) -> Option<&Value> {
        self.details.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<28} {:<12} lhs={} rhs={}", self.claim_id, self.holds, self.lhs, self.rhs)?;
        if let Some(w) = &self.witness {
            match w {
                Witness::Elements(v) => write!(f, " witness={v:?}")?,
                Witness::Indices(v) => write!(f, " witness=#{v:?}")?,
                Witness::Text(t) => write!(f, " witness={t}")?,
                Witness::Sunflower { core, petals } => write!(f, " core={core:?} petals={petals:?}")?,
            }
        }
        for n in &self.notes {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

impl Serialize for VerdictReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("claim_id", &self.claim_id)?;
        map.serialize_entry("holds", &self.holds)?;
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("rhs", &self.rhs)?;
        if let Some(w) = &self.witness {
            map.serialize_entry("witness", w)?;
        }
        if !self.details.is_empty() {
            let details: serde_json::Map<String, serde_json::Value> = self
                .details
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null)))
                .collect();
            map.serialize_entry("details", &details)?;
        }
        if !self.notes.is_empty() {
            map.serialize_entry("notes", &self.notes)?;
        }
        map.serialize_entry("runtime_ms", &self.runtime_ms.unwrap_or(0))?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_conjunction() {
        assert_eq!(Holds::True.and(Holds::Vacuous), Holds::True);
        assert_eq!(Holds::Vacuous.and(Holds::Vacuous), Holds::Vacuous);
        assert_eq!(Holds::True.and(Holds::Inconclusive), Holds::Inconclusive);
        assert_eq!(Holds::Inconclusive.and(Holds::False), Holds::False);
    }

    #[test]
    fn json_shape() {
        let r = VerdictReport::new("eq-1.1", Holds::Vacuous, Value::int(4), Value::rational(BigRational::new(3.into(), 2.into())))
            .with_witness(Witness::Elements(vec![1, 2]));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["claim_id"], "eq-1.1");
        assert_eq!(v["holds"], "vacuous");
        assert_eq!(v["lhs"], "4");
        assert_eq!(v["rhs"], "3/2");
        assert_eq!(v["witness"], serde_json::json!([1, 2]));
        assert!(v["runtime_ms"].is_number());
    }
}
