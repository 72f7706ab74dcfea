use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{format_rational, int, parse_rational, serde_str, sign};
use crate::linalg::{ExactMatrix, Rational};

/// A point λ = re + i·im of the complex plane with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    #[serde(with = "serde_str")]
    pub re: Rational,
    #[serde(with = "serde_str")]
    pub im: Rational,
}

impl Point {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Sign of `|λ|² − 1`: where λ sits relative to the unit circle.
    pub fn unit_circle_side(&self) -> i32 {
        sign(&(self.norm_sq() - Rational::one()))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected RE,IM but got {s:?}")))?;
        Ok(Self { re: parse_rational(re)?, im: parse_rational(im)? })
    }

    pub fn unsupported(&self, reason: impl Into<String>) -> Error {
        Error::UnsupportedPoint { re: format_rational(&self.re), im: format_rational(&self.im), reason: reason.into() }
    }

    pub fn not_pseudo_fredholm(&self) -> Error {
        Error::NotPseudoFredholm { re: format_rational(&self.re), im: format_rational(&self.im) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.re), format_rational(&self.im))
    }
}

/// One building block of a structured operator.
///
/// The shift atoms act on ℓ²(ℕ) with basis `e_0, e_1, …`:
/// - `RightShift`: `e_k ↦ e_{k+1}`, the injective isometry with codimension-one range;
/// - `LeftShift`: its dual `e_{k+1} ↦ e_k`, `e_0 ↦ 0`, surjective with a one-dimensional kernel;
/// - `QNilShift`: `e_k ↦ e_{k+1}/(k+1)`, injective and quasi-nilpotent but not nilpotent,
///   with dense non-closed range;
/// - `QNilShiftDual`: its dual, quasi-nilpotent with `dim N(Tⁿ) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    FiniteMatrix(ExactMatrix),
    RightShift,
    LeftShift,
    QNilShift,
    QNilShiftDual,
}

impl Atom {
    pub fn matrix(m: ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!("matrix atom must be square, got {}×{}", m.rows(), m.cols())));
        }
        if m.rows() == 0 {
            return Err(Error::Shape("matrix atom must be nonempty".into()));
        }
        Ok(Atom::FiniteMatrix(m))
    }

    pub fn as_matrix(&self) -> Option<&ExactMatrix> {
        match self {
            Atom::FiniteMatrix(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_shift(&self) -> bool {
        matches!(self, Atom::RightShift | Atom::LeftShift)
    }

    pub fn dual(&self) -> Atom {
        match self {
            Atom::FiniteMatrix(m) => Atom::FiniteMatrix(m.transpose()),
            Atom::RightShift => Atom::LeftShift,
            Atom::LeftShift => Atom::RightShift,
            Atom::QNilShift => Atom::QNilShiftDual,
            Atom::QNilShiftDual => Atom::QNilShift,
        }
    }

    pub fn type_tag(&self) -> &'static str {
        match self {
            Atom::FiniteMatrix(_) => "matrix",
            Atom::RightShift => "right_shift",
            Atom::LeftShift => "left_shift",
            Atom::QNilShift => "qnil_shift",
            Atom::QNilShiftDual => "qnil_shift_dual",
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::FiniteMatrix(m) => write!(f, "{m}"),
            Atom::RightShift => write!(f, "R"),
            Atom::LeftShift => write!(f, "L"),
            Atom::QNilShift => write!(f, "Q"),
            Atom::QNilShiftDual => write!(f, "Q*"),
        }
    }
}

/// A finite direct sum of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorExpr {
    atoms: Vec<Atom>,
}

impl OperatorExpr {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Invalid("an operator needs at least one atom".into()));
        }
        for a in &atoms {
            if let Atom::FiniteMatrix(m) = a {
                Atom::matrix(m.clone())?;
            }
        }
        Ok(Self { atoms })
    }

    pub fn single(atom: Atom) -> Self {
        Self::new(vec![atom]).expect("one atom")
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `self ⊕ other`.
    pub fn direct_sum(&self, other: &OperatorExpr) -> OperatorExpr {
        Self { atoms: self.atoms.iter().chain(&other.atoms).cloned().collect() }
    }

    /// Atomwise dual: transposed matrices, `R ↔ L`, `Q ↔ Q*`.
    pub fn dual(&self) -> OperatorExpr {
        Self { atoms: self.atoms.iter().map(Atom::dual).collect() }
    }

    /// The operator `Tᵏ`, again as a direct sum of atoms.
    ///
    /// Matrix atoms are raised to the power. A shift-type atom `A` satisfies
    /// `Aᵏ ≅ A ⊕ … ⊕ A` (`k` copies) by splitting the basis into residue
    /// classes mod `k`; for the quasi-nilpotent shifts each class carries a
    /// weighted shift with the same structural table as the atom itself.
    pub fn power(&self, k: u32) -> OperatorExpr {
        assert!(k >= 1, "powers start at 1");
        let mut atoms = Vec::new();
        for a in &self.atoms {
            match a {
                Atom::FiniteMatrix(m) => atoms.push(Atom::FiniteMatrix(m.pow(k))),
                other => atoms.extend(std::iter::repeat(other.clone()).take(k as usize)),
            }
        }
        Self { atoms }
    }

    /// Total dimension of the matrix summands.
    pub fn matrix_dim(&self) -> usize {
        self.atoms.iter().filter_map(Atom::as_matrix).map(ExactMatrix::rows).sum()
    }

    pub fn has_shift(&self) -> bool {
        self.atoms.iter().any(Atom::is_shift)
    }

    pub fn is_matrix_only(&self) -> bool {
        self.atoms.iter().all(|a| a.as_matrix().is_some())
    }

    /// Whether the closed segment `[p, q]` meets the locus where the atom
    /// tables change regime in a way that can separate components of a
    /// spectrum's complement. Only the shift atoms contribute: their tables
    /// switch on the unit circle. Matrix eigenvalues and the quasi-nilpotent
    /// point 0 are isolated and never separate the plane.
    pub fn segment_meets_boundary(&self, p: &Point, q: &Point) -> bool {
        self.has_shift() && segment_meets_unit_circle(p, q)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Exact test whether `|p + t(q − p)|² = 1` for some `t ∈ [0, 1]`.
pub fn segment_meets_unit_circle(p: &Point, q: &Point) -> bool {
    let fp = p.unit_circle_side();
    let fq = q.unit_circle_side();
    if fp == 0 || fq == 0 || fp != fq {
        return true;
    }
    if fp < 0 {
        // both strictly inside; the disk is convex
        return false;
    }
    // Both outside: f(t) = |d|²t² + 2(p·d)t + |p|² − 1 dips to ≤ 0 only at an
    // interior minimum.
    let dre = &q.re - &p.re;
    let dim = &q.im - &p.im;
    let dd = &dre * &dre + &dim * &dim;
    if dd.is_zero() {
        return false;
    }
    let pd = &p.re * &dre + &p.im * &dim;
    let t = -&pd / &dd;
    if t <= Rational::zero() || t >= int(1) {
        return false;
    }
    let min = &dd * &t * &t + int(2) * &pd * &t + p.norm_sq() - int(1);
    min <= Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    fn pt(a: i64, b: i64, c: i64, d: i64) -> Point {
        Point::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn dual_is_an_involution() {
        let e = OperatorExpr::new(vec![
            Atom::LeftShift,
            Atom::FiniteMatrix(ExactMatrix::jordan_block(3, int(0))),
            Atom::QNilShift,
        ])
        .unwrap();
        assert_eq!(e.dual().dual(), e);
        assert_eq!(OperatorExpr::single(Atom::RightShift).dual(), OperatorExpr::single(Atom::LeftShift));
        let j2 = ExactMatrix::jordan_block(2, int(0));
        assert_eq!(OperatorExpr::single(Atom::FiniteMatrix(j2.clone())).dual().atoms()[0], Atom::FiniteMatrix(j2.transpose()));
    }

    #[test]
    fn rejects_degenerate_atoms() {
        assert!(OperatorExpr::new(vec![]).is_err());
        assert!(Atom::matrix(ExactMatrix::zeros(2, 3)).is_err());
        assert!(Atom::matrix(ExactMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn power_expands_shifts() {
        let e = OperatorExpr::new(vec![Atom::RightShift, Atom::FiniteMatrix(ExactMatrix::jordan_block(2, int(0)))]).unwrap();
        let p = e.power(2);
        assert_eq!(p.atoms().len(), 3);
        assert!(p.atoms()[2].as_matrix().unwrap().is_zero());
    }

    #[test]
    fn unit_circle_crossings() {
        assert!(segment_meets_unit_circle(&pt(7, 8, 3, 8), &pt(7, 8, 1, 2)));
        assert!(!segment_meets_unit_circle(&pt(0, 1, 0, 1), &pt(1, 2, 0, 1)));
        assert!(segment_meets_unit_circle(&pt(1, 1, 0, 1), &pt(2, 1, 0, 1)));
        assert!(!segment_meets_unit_circle(&pt(3, 2, 0, 1), &pt(2, 1, 0, 1)));
        // chord through the disk between two outside points
        assert!(segment_meets_unit_circle(&pt(-2, 1, 0, 1), &pt(2, 1, 0, 1)));
        // tangent-free near miss
        assert!(!segment_meets_unit_circle(&pt(-1, 8, 9, 8), &pt(1, 8, 9, 8)));
        assert!(segment_meets_unit_circle(&pt(-1, 8, 1, 1), &pt(1, 8, 1, 1)));
    }

    #[test]
    fn parses_points() {
        assert_eq!(Point::parse("3/5,4/5").unwrap().unit_circle_side(), 0);
        assert!(Point::parse("1").is_err());
        assert!(Point::parse("1/0,0").is_err());
    }
}
