//! Named example operators covering every atom type and the typical mixed
//! sums.

use crate::linalg::rational::int;
use crate::linalg::ExactMatrix;
use crate::model::{Atom, OperatorExpr};

pub fn jordan(n: usize) -> Atom {
    Atom::FiniteMatrix(ExactMatrix::jordan_block(n, int(0)))
}

/// `diag(J_2, 2)`.
pub fn diag_j2_2() -> ExactMatrix {
    ExactMatrix::block_diagonal(&[ExactMatrix::jordan_block(2, int(0)), ExactMatrix::from_i64(&[&[2]])])
}

/// The twelve catalog operators with their display names.
pub fn catalog() -> Vec<(&'static str, OperatorExpr)> {
    use Atom::{LeftShift as L, QNilShift as Q, QNilShiftDual as Qd, RightShift as R};
    let e = |atoms: Vec<Atom>| OperatorExpr::new(atoms).expect("catalog operators are valid");
    vec![
        ("R", e(vec![R])),
        ("L", e(vec![L])),
        ("R⊕L", e(vec![R, L])),
        ("R⊕R⊕L", e(vec![R, R, L])),
        ("J_2", e(vec![jordan(2)])),
        ("J_3", e(vec![jordan(3)])),
        ("diag(J_2,2)", e(vec![Atom::FiniteMatrix(diag_j2_2())])),
        ("QNilShift", e(vec![Q])),
        ("L⊕QNilShift", e(vec![L, Q])),
        ("R⊕J_3⊕QNilShift", e(vec![R, jordan(3), Q])),
        ("L⊕QNilShiftDual", e(vec![L, Qd])),
        ("R²", e(vec![R]).power(2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ExtIndex, Point};
    use crate::structure::index;

    #[test]
    fn catalog_indices_at_zero() {
        let expected = [-1, 1, 0, -1, 0, 0, 0, 0, 1, -1, 1, -2];
        let cat = catalog();
        assert_eq!(cat.len(), 12);
        for ((name, e), want) in cat.iter().zip(expected) {
            assert_eq!(index(e, &Point::zero()).unwrap(), ExtIndex::Fin(want), "{name}");
        }
    }
}
