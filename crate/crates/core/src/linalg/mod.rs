//! Exact dense linear algebra over ℚ.
//!
//! Every rank decision in the crate goes through this module. There is no
//! floating point anywhere: dimension jumps are discontinuous, so a tolerance
//! would silently corrupt every chain built on top of it.

mod matrix;
pub mod rational;
mod subspace;

pub use matrix::ExactMatrix;
pub use rational::{format_rational, parse_rational, Rational};
pub use subspace::SubspaceBasis;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &ExactMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = Rational::one() / &a[(r, c)];
        for j in c..cols {
            a[(r, j)] *= &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let delta = &f * &a[(r, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref { matrix: a, pivots, rank }
}

pub fn rank(m: &ExactMatrix) -> usize {
    rref(m).rank
}

/// Basis of `{x : m·x = 0}`.
pub fn kernel_basis(m: &ExactMatrix) -> SubspaceBasis {
    let red = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix[(i, f)].clone();
            }
            v
        })
        .collect();
    SubspaceBasis::span(cols, vectors).expect("kernel vectors have the ambient length")
}

/// Basis of the column space of `m`.
pub fn image_basis(m: &ExactMatrix) -> SubspaceBasis {
    let cols = (0..m.cols()).map(|j| m.column(j)).collect();
    SubspaceBasis::span(m.rows(), cols).expect("columns have the ambient length")
}

pub fn subspace_sum(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis> {
    check_ambient(a, b)?;
    let vectors = a.vectors().iter().chain(b.vectors()).cloned().collect();
    SubspaceBasis::span(a.ambient_dim(), vectors)
}

/// Intersection by the Zassenhaus block elimination: reduce rows `[u | u]`
/// for `u ∈ a` and `[v | 0]` for `v ∈ b`; rows of the echelon form whose
/// left half vanishes carry a basis of `a ∩ b` in the right half.
pub fn subspace_intersection(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis> {
    check_ambient(a, b)?;
    let n = a.ambient_dim();
    let mut rows = Vec::with_capacity(a.dim() + b.dim());
    for u in a.vectors() {
        rows.push(u.iter().chain(u).cloned().collect::<Vec<_>>());
    }
    for v in b.vectors() {
        rows.push(v.iter().cloned().chain(std::iter::repeat(Rational::zero()).take(n)).collect());
    }
    if rows.is_empty() {
        return Ok(SubspaceBasis::zero(n));
    }
    let red = rref(&ExactMatrix::from_rows(rows)?);
    let meet = (0..red.rank)
        .filter(|&i| red.pivots[i] >= n)
        .map(|i| red.matrix.row(i)[n..].to_vec())
        .collect();
    SubspaceBasis::span(n, meet)
}

/// `dim(outer) − dim(inner)` after checking `inner ⊆ outer`.
pub fn quotient_dim(inner: &SubspaceBasis, outer: &SubspaceBasis) -> Result<usize> {
    check_ambient(inner, outer)?;
    if !outer.contains_subspace(inner) {
        return Err(Error::NotContained);
    }
    Ok(outer.dim() - inner.dim())
}

/// Matrix of `m` restricted to the `m`-invariant subspace `b`, in the
/// coordinates of `b`'s stored basis.
pub fn restrict(m: &ExactMatrix, b: &SubspaceBasis) -> Result<ExactMatrix> {
    if !m.is_square() || m.rows() != b.ambient_dim() {
        return Err(Error::AmbientMismatch(m.rows(), b.ambient_dim()));
    }
    let k = b.dim();
    let mut out = ExactMatrix::zeros(k, k);
    for (j, v) in b.vectors().iter().enumerate() {
        let image = m.mul_vec(v);
        let coords = b.coordinates(&image).ok_or(Error::NotInvariant)?;
        for (i, c) in coords.into_iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    Ok(out)
}

fn check_ambient(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch(a.ambient_dim(), b.ambient_dim()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::rational::{int, rat};
    use super::*;

    fn e(n: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![int(0); n];
        v[i] = int(1);
        v
    }

    fn span(n: usize, vs: Vec<Vec<Rational>>) -> SubspaceBasis {
        SubspaceBasis::span(n, vs).unwrap()
    }

    #[test]
    fn rref_examples() {
        let r = rref(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!((r.rank, r.pivots.clone()), (1, vec![1]));
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        // row2 = 2·row1
        let r = rref(&ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix, ExactMatrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])), span(2, vec![e(2, 0)]));
        assert_eq!(kernel_basis(&ExactMatrix::from_i64(&[&[1, 1], &[0, 1]])).dim(), 0);
        assert_eq!(kernel_basis(&ExactMatrix::from_i64(&[&[1, 2], &[2, 4]])), span(2, vec![vec![int(-2), int(1)]]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])), span(2, vec![e(2, 0)]));
        assert_eq!(image_basis(&ExactMatrix::zeros(3, 3)).dim(), 0);
        assert_eq!(image_basis(&ExactMatrix::identity(3)), SubspaceBasis::full(3));
    }

    #[test]
    fn sum_examples() {
        let e1 = span(2, vec![e(2, 0)]);
        let e2 = span(2, vec![e(2, 1)]);
        assert_eq!(subspace_sum(&e1, &e2).unwrap(), SubspaceBasis::full(2));
        assert_eq!(subspace_sum(&e1, &e1).unwrap(), e1);
        let d1 = span(2, vec![vec![int(1), int(1)]]);
        let d2 = span(2, vec![vec![int(1), int(-1)]]);
        assert_eq!(subspace_sum(&d1, &d2).unwrap().dim(), 2);
        assert_eq!(subspace_sum(&e1, &SubspaceBasis::zero(3)), Err(Error::AmbientMismatch(2, 3)));
    }

    #[test]
    fn intersection_examples() {
        let e12 = span(3, vec![e(3, 0), e(3, 1)]);
        let e1 = span(3, vec![e(3, 0)]);
        assert_eq!(subspace_intersection(&e12, &e1).unwrap(), e1);
        let e2 = span(3, vec![e(3, 1)]);
        assert_eq!(subspace_intersection(&e1, &e2).unwrap().dim(), 0);
        let diag = span(2, vec![vec![int(1), int(1)]]);
        assert_eq!(subspace_intersection(&SubspaceBasis::full(2), &diag).unwrap(), diag);
        assert!(subspace_intersection(&e1, &SubspaceBasis::full(2)).is_err());
    }

    #[test]
    fn quotient_examples() {
        let e1 = span(3, vec![e(3, 0)]);
        assert_eq!(quotient_dim(&SubspaceBasis::zero(3), &e1).unwrap(), 1);
        assert_eq!(quotient_dim(&e1, &e1).unwrap(), 0);
        assert_eq!(quotient_dim(&e1, &SubspaceBasis::full(3)).unwrap(), 2);
        let e2 = span(3, vec![e(3, 1)]);
        assert_eq!(quotient_dim(&e2, &e1), Err(Error::NotContained));
    }

    #[test]
    fn restrict_examples() {
        let d = ExactMatrix::diagonal(&[int(1), int(2)]);
        assert_eq!(restrict(&d, &span(2, vec![e(2, 0)])).unwrap(), ExactMatrix::from_i64(&[&[1]]));
        let j2 = ExactMatrix::jordan_block(2, int(0));
        assert_eq!(restrict(&j2, &span(2, vec![e(2, 0)])).unwrap(), ExactMatrix::from_i64(&[&[0]]));
        let m = ExactMatrix::block_diagonal(&[j2.clone(), ExactMatrix::from_i64(&[&[2]])]);
        assert_eq!(restrict(&m, &span(3, vec![e(3, 2)])).unwrap(), ExactMatrix::from_i64(&[&[2]]));
        // e2 is mapped to e1 by J_2
        assert_eq!(restrict(&j2, &span(2, vec![e(2, 1)])), Err(Error::NotInvariant));
        let half = ExactMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert_eq!(restrict(&half, &SubspaceBasis::full(1)).unwrap(), half);
    }
}
