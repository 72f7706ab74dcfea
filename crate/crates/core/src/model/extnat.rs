use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A natural number or ∞, used for dimensions and codimensions that may be
/// infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub use ExtNat::{Fin, Inf};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            Inf => None,
        }
    }

    /// `self − rhs` when the result is a natural number; `∞ − n = ∞` for
    /// finite `n`, and `∞ − ∞` is undefined.
    pub fn checked_sub(self, rhs: ExtNat) -> Option<ExtNat> {
        match (self, rhs) {
            (Fin(a), Fin(b)) => a.checked_sub(b).map(Fin),
            (Inf, Fin(_)) => Some(Inf),
            _ => None,
        }
    }

    /// `self − rhs` as an index value.
    pub fn index_minus(self, rhs: ExtNat) -> ExtIndex {
        match (self, rhs) {
            (Fin(a), Fin(b)) => ExtIndex::Fin(a as i64 - b as i64),
            (Inf, Fin(_)) => ExtIndex::PosInf,
            (Fin(_), Inf) => ExtIndex::NegInf,
            (Inf, Inf) => ExtIndex::Undefined,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        Fin(n)
    }
}

impl From<usize> for ExtNat {
    fn from(n: usize) -> Self {
        Fin(n as u64)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => Ordering::Less,
            (Inf, Fin(_)) => Ordering::Greater,
            (Inf, Inf) => Ordering::Equal,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a + b),
            _ => Inf,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(Fin(0), Add::add)
    }
}

/// Scaling by a natural number; `0·∞ = 0`.
impl Mul<u64> for ExtNat {
    type Output = ExtNat;
    fn mul(self, k: u64) -> ExtNat {
        match self {
            Fin(a) => Fin(a * k),
            Inf if k == 0 => Fin(0),
            Inf => Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(n) => s.serialize_u64(*n),
            Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Fin(n)),
            Raw::S(s) if s == "inf" => Ok(Inf),
            Raw::S(s) => Err(serde::de::Error::custom(format!("invalid extended natural {s:?}"))),
        }
    }
}

/// Index value `α − β`: an integer, ±∞, or undefined when both sides are
/// infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtIndex {
    Fin(i64),
    PosInf,
    NegInf,
    Undefined,
}

impl ExtIndex {
    pub fn is_integer(self) -> bool {
        matches!(self, ExtIndex::Fin(_))
    }

    pub fn is_defined(self) -> bool {
        self != ExtIndex::Undefined
    }

    pub fn integer(self) -> Option<i64> {
        match self {
            ExtIndex::Fin(n) => Some(n),
            _ => None,
        }
    }

    pub fn neg(self) -> ExtIndex {
        match self {
            ExtIndex::Fin(n) => ExtIndex::Fin(-n),
            ExtIndex::PosInf => ExtIndex::NegInf,
            ExtIndex::NegInf => ExtIndex::PosInf,
            ExtIndex::Undefined => ExtIndex::Undefined,
        }
    }

    /// Sum of indices; `None` when mixing +∞ with −∞.
    pub fn checked_add(self, rhs: ExtIndex) -> Option<ExtIndex> {
        use ExtIndex::*;
        match (self, rhs) {
            (Undefined, _) | (_, Undefined) => Some(Undefined),
            (Fin(a), Fin(b)) => Some(Fin(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    pub fn scale(self, k: i64) -> ExtIndex {
        use ExtIndex::*;
        match self {
            Fin(n) => Fin(n * k),
            _ if k == 0 => Fin(0),
            PosInf | NegInf if k < 0 => self.neg(),
            other => other,
        }
    }

    /// `ind ≤ 0`, false when undefined.
    pub fn non_positive(self) -> bool {
        matches!(self, ExtIndex::NegInf) || matches!(self, ExtIndex::Fin(n) if n <= 0)
    }

    /// `ind ≥ 0`, false when undefined.
    pub fn non_negative(self) -> bool {
        matches!(self, ExtIndex::PosInf) || matches!(self, ExtIndex::Fin(n) if n >= 0)
    }
}

impl fmt::Display for ExtIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtIndex::Fin(n) => write!(f, "{n}"),
            ExtIndex::PosInf => write!(f, "inf"),
            ExtIndex::NegInf => write!(f, "-inf"),
            ExtIndex::Undefined => write!(f, "undef"),
        }
    }
}

impl Serialize for ExtIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtIndex::Fin(n) => s.serialize_i64(*n),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(i64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(ExtIndex::Fin(n)),
            Raw::S(s) => match s.as_str() {
                "inf" => Ok(ExtIndex::PosInf),
                "-inf" => Ok(ExtIndex::NegInf),
                "undef" => Ok(ExtIndex::Undefined),
                _ => Err(serde::de::Error::custom(format!("invalid index {s:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(Fin(3) + Inf, Inf);
        assert_eq!(Fin(3) + Fin(4), Fin(7));
        assert_eq!(Inf.checked_sub(Fin(2)), Some(Inf));
        assert_eq!(Inf.checked_sub(Inf), None);
        assert_eq!(Fin(1).checked_sub(Fin(2)), None);
        assert!(Fin(u64::MAX) < Inf);
    }

    #[test]
    fn index_arithmetic() {
        assert_eq!(Fin(0).index_minus(Fin(1)), ExtIndex::Fin(-1));
        assert_eq!(Fin(0).index_minus(Inf), ExtIndex::NegInf);
        assert_eq!(Inf.index_minus(Inf), ExtIndex::Undefined);
        assert_eq!(ExtIndex::PosInf.checked_add(ExtIndex::NegInf), None);
        assert_eq!(ExtIndex::Fin(2).checked_add(ExtIndex::NegInf), Some(ExtIndex::NegInf));
        assert_eq!(ExtIndex::NegInf.scale(3), ExtIndex::NegInf);
        assert!(ExtIndex::NegInf.non_positive() && !ExtIndex::Undefined.non_positive());
    }

    #[test]
    fn serde_forms() {
        assert_eq!(serde_json::to_string(&vec![Fin(2), Inf]).unwrap(), r#"[2,"inf"]"#);
        let idx: Vec<ExtIndex> = serde_json::from_str(r#"[-1,"inf","-inf","undef"]"#).unwrap();
        assert_eq!(idx, vec![ExtIndex::Fin(-1), ExtIndex::PosInf, ExtIndex::NegInf, ExtIndex::Undefined]);
    }
}
