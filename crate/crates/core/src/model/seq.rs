use std::fmt;

use serde::{Deserialize, Serialize};

use super::extnat::{ExtNat, Fin, Inf};

/// An infinite sequence of extended naturals that is affine from some point
/// on: `n ↦ prefix[n]` for `n < tail_start`, then
/// `n ↦ tail_base + tail_slope·(n − tail_start)`.
///
/// Values are kept canonical (the tail starts as early as possible), so
/// derived equality is equality of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSeq", into = "RawSeq")]
pub struct EvAffineSeq {
    prefix: Vec<ExtNat>,
    tail_base: ExtNat,
    tail_slope: u64,
}

#[derive(Serialize, Deserialize)]
struct RawSeq {
    prefix: Vec<ExtNat>,
    tail_start: usize,
    tail_base: ExtNat,
    tail_slope: u64,
}

impl TryFrom<RawSeq> for EvAffineSeq {
    type Error = String;
    fn try_from(r: RawSeq) -> Result<Self, String> {
        if r.prefix.len() != r.tail_start {
            return Err("prefix length must equal tail_start".into());
        }
        if r.tail_base == Inf && r.tail_slope != 0 {
            return Err("an infinite tail must have slope 0".into());
        }
        Ok(EvAffineSeq::new(r.prefix, r.tail_base, r.tail_slope))
    }
}

impl From<EvAffineSeq> for RawSeq {
    fn from(s: EvAffineSeq) -> Self {
        RawSeq { tail_start: s.prefix.len(), prefix: s.prefix, tail_base: s.tail_base, tail_slope: s.tail_slope }
    }
}

impl EvAffineSeq {
    pub fn new(prefix: Vec<ExtNat>, tail_base: ExtNat, tail_slope: u64) -> Self {
        let tail_slope = if tail_base == Inf { 0 } else { tail_slope };
        let mut s = Self { prefix, tail_base, tail_slope };
        s.normalize();
        s
    }

    pub fn constant(v: ExtNat) -> Self {
        Self::new(Vec::new(), v, 0)
    }

    /// `n ↦ base + slope·n`.
    pub fn affine(base: u64, slope: u64) -> Self {
        Self::new(Vec::new(), Fin(base), slope)
    }

    /// Sequence from a finite list of values followed by the constant last
    /// value.
    pub fn eventually_constant(values: Vec<ExtNat>) -> Self {
        let mut values = values;
        let last = values.pop().unwrap_or(Fin(0));
        Self::new(values, last, 0)
    }

    /// Builds a sequence from a function known to be affine for
    /// `n ≥ tail_start`.
    pub fn from_fn(tail_start: usize, f: impl Fn(usize) -> ExtNat) -> Self {
        let prefix = (0..tail_start).map(&f).collect();
        let base = f(tail_start);
        let slope = match (base, f(tail_start + 1)) {
            (Fin(a), Fin(b)) => b.checked_sub(a).expect("affine tail must be nondecreasing"),
            (Inf, Inf) => 0,
            _ => panic!("tail is not affine"),
        };
        Self::new(prefix, base, slope)
    }

    fn normalize(&mut self) {
        while let Some(&last) = self.prefix.last() {
            let extends = match (last, self.tail_base) {
                (Inf, Inf) => true,
                (Fin(v), Fin(b)) => v + self.tail_slope == b,
                _ => false,
            };
            if !extends {
                break;
            }
            self.prefix.pop();
            self.tail_base = last;
        }
    }

    pub fn tail_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn tail_base(&self) -> ExtNat {
        self.tail_base
    }

    pub fn tail_slope(&self) -> u64 {
        self.tail_slope
    }

    pub fn prefix(&self) -> &[ExtNat] {
        &self.prefix
    }

    pub fn get(&self, n: usize) -> ExtNat {
        match self.prefix.get(n) {
            Some(&v) => v,
            None => match self.tail_base {
                Fin(b) => Fin(b + self.tail_slope * (n - self.prefix.len()) as u64),
                Inf => Inf,
            },
        }
    }

    pub fn values(&self, len: usize) -> Vec<ExtNat> {
        (0..len).map(|n| self.get(n)).collect()
    }

    /// Least `n` from which the sequence is constant, ∞ if it never is.
    pub fn stabilization_point(&self) -> ExtNat {
        if self.tail_slope == 0 {
            Fin(self.prefix.len() as u64)
        } else {
            Inf
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &EvAffineSeq) -> EvAffineSeq {
        let start = self.tail_start().max(other.tail_start());
        Self::from_fn(start, |n| self.get(n) + other.get(n))
    }

    /// `n ↦ s(k·n)`.
    pub fn subsample(&self, k: usize) -> EvAffineSeq {
        assert!(k >= 1);
        Self::from_fn(self.tail_start().div_ceil(k), |n| self.get(k * n))
    }

    /// `n ↦ Σ_{i<k} s(k·n + i)`.
    pub fn window_sum(&self, k: usize) -> EvAffineSeq {
        assert!(k >= 1);
        Self::from_fn(self.tail_start().div_ceil(k), |n| (0..k).map(|i| self.get(k * n + i)).sum())
    }

    /// `n ↦ s(n) − s(n+1)` for a nonincreasing sequence; `None` when a
    /// difference is undefined (`∞ − ∞`) or negative.
    pub fn forward_decrement(&self) -> Option<EvAffineSeq> {
        if self.tail_slope != 0 {
            return None;
        }
        let start = self.tail_start();
        let prefix = (0..start).map(|n| self.get(n).checked_sub(self.get(n + 1))).collect::<Option<Vec<_>>>()?;
        let tail = self.tail_base.checked_sub(self.tail_base)?;
        Some(Self::new(prefix, tail, 0))
    }

    pub fn is_nondecreasing(&self) -> bool {
        (0..=self.tail_start()).all(|n| self.get(n) <= self.get(n + 1))
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.tail_slope == 0 && (0..self.tail_start()).all(|n| self.get(n) >= self.get(n + 1))
    }

    /// The tail rule written out, e.g. `n ↦ 2n−1 for n ≥ 2`.
    pub fn tail_formula(&self) -> String {
        let start = self.tail_start();
        let rhs = match self.tail_base {
            Inf => "inf".to_string(),
            Fin(b) => {
                let slope = self.tail_slope as i128;
                let offset = b as i128 - slope * start as i128;
                let var = match slope {
                    0 => String::new(),
                    1 => "n".to_string(),
                    s => format!("{s}n"),
                };
                match (var.is_empty(), offset) {
                    (true, o) => o.to_string(),
                    (false, 0) => var,
                    (false, o) if o > 0 => format!("{var}+{o}"),
                    (false, o) => format!("{var}−{}", -o),
                }
            }
        };
        format!("n ↦ {rhs} for n ≥ {start}")
    }
}

impl fmt::Display for EvAffineSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.values(self.tail_start() + 2).iter().map(ToString::to_string).collect();
        write!(f, "({}, …; {})", shown.join(", "), self.tail_formula())
    }
}
