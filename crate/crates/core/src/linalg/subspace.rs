use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::{serde_rows, Rational};
use super::{rref, ExactMatrix};
use crate::error::{Error, Result};

/// A subspace of ℚⁿ stored in canonical reduced echelon form.
///
/// The stored vectors are the nonzero rows of the reduced row-echelon form of
/// any spanning set, so two bases of the same subspace compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StoredBasis", into = "StoredBasis")]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StoredBasis {
    ambient_dim: usize,
    #[serde(with = "serde_rows")]
    vectors: Vec<Vec<Rational>>,
}

impl TryFrom<StoredBasis> for SubspaceBasis {
    type Error = Error;
    fn try_from(s: StoredBasis) -> Result<Self> {
        let b = SubspaceBasis::span(s.ambient_dim, s.vectors.clone())?;
        if b.vectors != s.vectors {
            return Err(Error::Parse("subspace basis is not in canonical echelon form".into()));
        }
        Ok(b)
    }
}

impl From<SubspaceBasis> for StoredBasis {
    fn from(b: SubspaceBasis) -> Self {
        StoredBasis { ambient_dim: b.ambient_dim, vectors: b.vectors }
    }
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect()).expect("unit vectors")
    }

    /// Canonical basis of the span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::AmbientMismatch(v.len(), ambient_dim));
        }
        if vectors.is_empty() || ambient_dim == 0 {
            return Ok(Self::zero(ambient_dim));
        }
        let red = rref(&ExactMatrix::from_rows(vectors)?);
        let vectors = (0..red.rank).map(|i| red.matrix.row(i).to_vec()).collect();
        Ok(Self { ambient_dim, vectors, pivots: red.pivots })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Coordinates of `v` in the stored basis, or `None` if `v` is outside.
    ///
    /// Each stored vector has a 1 in its pivot column and every other stored
    /// vector has a 0 there, so the coordinates are read off the pivots.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(b) {
                *r -= c * x;
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.ambient_dim == self.ambient_dim && other.vectors.iter().all(|v| self.contains(v))
    }

    /// Basis vectors as the columns of an `ambient × dim` matrix.
    pub fn as_columns(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.ambient_dim, &self.vectors)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = num_traits::One::one();
    v
}
