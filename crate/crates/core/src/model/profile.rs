//! Structural profiles of `S = T − λI`.
//!
//! A profile records four chains:
//! - `a_n = dim N(Sⁿ)`,
//! - `r_n = codim R(Sⁿ)`,
//! - `c_n = dim (R(Sⁿ) ∩ N(S))`,
//! - `b_n = codim (R(S) + N(Sⁿ))`,
//!
//! together with which ranges `R(Sⁿ)` are closed, quasi-nilpotence, the
//! nilpotency degree, and whether `S` admits a generalized Kato
//! decomposition. Matrix atoms get their chains from exact elimination; the
//! shift atoms have closed-form tables.

use serde::{Deserialize, Serialize};

use super::atom::{Atom, Point};
use super::extnat::{ExtNat, Fin, Inf};
use super::seq::EvAffineSeq;
use crate::error::Result;
use crate::linalg::{self, ExactMatrix, SubspaceBasis};

/// Largest real working dimension for a matrix atom. Non-real λ doubles the
/// dimension of a matrix atom through its real 2n×2n form.
pub const MAX_WORKING_DIM: usize = 128;

/// Eventually constant boolean sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolSeq {
    pub prefix: Vec<bool>,
    pub tail: bool,
}

impl BoolSeq {
    pub fn constant(v: bool) -> Self {
        Self { prefix: Vec::new(), tail: v }
    }

    pub fn new(mut prefix: Vec<bool>, tail: bool) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Self { prefix, tail }
    }

    pub fn get(&self, n: usize) -> bool {
        self.prefix.get(n).copied().unwrap_or(self.tail)
    }

    pub fn tail_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn and(&self, other: &BoolSeq) -> BoolSeq {
        let len = self.tail_start().max(other.tail_start());
        BoolSeq::new((0..len).map(|n| self.get(n) && other.get(n)).collect(), self.tail && other.tail)
    }

    pub fn subsample(&self, k: usize) -> BoolSeq {
        let len = self.tail_start().div_ceil(k);
        BoolSeq::new((0..len).map(|n| self.get(k * n)).collect(), self.tail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructuralProfile {
    pub kernel_chain: EvAffineSeq,
    pub range_codim_chain: EvAffineSeq,
    pub meet_chain: EvAffineSeq,
    pub join_codim_chain: EvAffineSeq,
    pub range_closed: BoolSeq,
    pub is_quasinilpotent: bool,
    pub nilpotency_degree: ExtNat,
    pub is_pseudofredholm_point: bool,
}

impl StructuralProfile {
    /// Profile of an invertible operator: every chain vanishes.
    pub fn invertible() -> Self {
        Self {
            kernel_chain: EvAffineSeq::constant(Fin(0)),
            range_codim_chain: EvAffineSeq::constant(Fin(0)),
            meet_chain: EvAffineSeq::constant(Fin(0)),
            join_codim_chain: EvAffineSeq::constant(Fin(0)),
            range_closed: BoolSeq::constant(true),
            is_quasinilpotent: false,
            nilpotency_degree: Inf,
            is_pseudofredholm_point: true,
        }
    }

    /// Profile of the zero operator on the zero space, the neutral element of
    /// the direct sum.
    pub fn trivial() -> Self {
        Self { is_quasinilpotent: true, nilpotency_degree: Fin(0), ..Self::invertible() }
    }

    pub fn alpha(&self) -> ExtNat {
        self.kernel_chain.get(1)
    }

    pub fn beta(&self) -> ExtNat {
        self.range_codim_chain.get(1)
    }

    /// Largest index at which any component of the profile may still change.
    pub fn horizon(&self) -> usize {
        [
            self.kernel_chain.tail_start(),
            self.range_codim_chain.tail_start(),
            self.meet_chain.tail_start(),
            self.join_codim_chain.tail_start(),
            self.range_closed.tail_start(),
        ]
        .into_iter()
        .max()
        .unwrap_or(0)
    }

    /// `c_0 = a_1` and `b_0 = r_1`.
    pub fn is_self_consistent(&self) -> bool {
        self.meet_chain.get(0) == self.kernel_chain.get(1) && self.join_codim_chain.get(0) == self.range_codim_chain.get(1)
    }

    pub fn is_monotone(&self) -> bool {
        self.kernel_chain.is_nondecreasing()
            && self.range_codim_chain.is_nondecreasing()
            && self.meet_chain.is_nonincreasing()
            && self.join_codim_chain.is_nonincreasing()
    }
}

/// Profile of `atom − λI`.
pub fn atom_profile(atom: &Atom, lambda: &Point) -> Result<StructuralProfile> {
    match atom {
        Atom::FiniteMatrix(m) => {
            let (working, scale) = working_matrix(m, lambda)?;
            Ok(matrix_profile_with_scale(&working, scale))
        }
        Atom::RightShift => Ok(match lambda.unit_circle_side() {
            // R − λ for |λ| < 1: injective, closed range of codimension one
            -1 => StructuralProfile {
                kernel_chain: EvAffineSeq::constant(Fin(0)),
                range_codim_chain: EvAffineSeq::affine(0, 1),
                meet_chain: EvAffineSeq::constant(Fin(0)),
                join_codim_chain: EvAffineSeq::constant(Fin(1)),
                range_closed: BoolSeq::constant(true),
                is_quasinilpotent: false,
                nilpotency_degree: Inf,
                is_pseudofredholm_point: true,
            },
            1 => StructuralProfile::invertible(),
            _ => unit_circle_profile(),
        }),
        Atom::LeftShift => Ok(match lambda.unit_circle_side() {
            // L − λ for |λ| < 1: onto, kernel spanned by (λᵏ)ₖ
            -1 => StructuralProfile {
                kernel_chain: EvAffineSeq::affine(0, 1),
                range_codim_chain: EvAffineSeq::constant(Fin(0)),
                meet_chain: EvAffineSeq::constant(Fin(1)),
                join_codim_chain: EvAffineSeq::constant(Fin(0)),
                range_closed: BoolSeq::constant(true),
                is_quasinilpotent: false,
                nilpotency_degree: Inf,
                is_pseudofredholm_point: true,
            },
            1 => StructuralProfile::invertible(),
            _ => unit_circle_profile(),
        }),
        // Spectral radius 0 because ‖Qⁿ‖ = 1/n!; compact and injective on an
        // infinite-dimensional space, so no power has closed range and every
        // range has infinite algebraic codimension.
        Atom::QNilShift if lambda.is_zero() => Ok(StructuralProfile {
            kernel_chain: EvAffineSeq::constant(Fin(0)),
            range_codim_chain: EvAffineSeq::new(vec![Fin(0)], Inf, 0),
            meet_chain: EvAffineSeq::constant(Fin(0)),
            join_codim_chain: EvAffineSeq::constant(Inf),
            range_closed: BoolSeq::new(vec![true], false),
            is_quasinilpotent: true,
            nilpotency_degree: Inf,
            is_pseudofredholm_point: true,
        }),
        // N(Q*ⁿ) = span{e_0..e_{n−1}}; e_0 = Q*ⁿ(n!·e_n) lies in every range.
        Atom::QNilShiftDual if lambda.is_zero() => Ok(StructuralProfile {
            kernel_chain: EvAffineSeq::affine(0, 1),
            range_codim_chain: EvAffineSeq::new(vec![Fin(0)], Inf, 0),
            meet_chain: EvAffineSeq::constant(Fin(1)),
            join_codim_chain: EvAffineSeq::constant(Inf),
            range_closed: BoolSeq::new(vec![true], false),
            is_quasinilpotent: true,
            nilpotency_degree: Inf,
            is_pseudofredholm_point: true,
        }),
        Atom::QNilShift | Atom::QNilShiftDual => Ok(StructuralProfile::invertible()),
    }
}

/// R − λ and L − λ with |λ| = 1: injective with dense, non-closed range. The
/// generalized Kato spectrum of the unilateral shift is the unit circle, so
/// these points admit no generalized Kato decomposition.
fn unit_circle_profile() -> StructuralProfile {
    StructuralProfile {
        kernel_chain: EvAffineSeq::constant(Fin(0)),
        range_codim_chain: EvAffineSeq::new(vec![Fin(0)], Inf, 0),
        meet_chain: EvAffineSeq::constant(Fin(0)),
        join_codim_chain: EvAffineSeq::constant(Inf),
        range_closed: BoolSeq::new(vec![true], false),
        is_quasinilpotent: false,
        nilpotency_degree: Inf,
        is_pseudofredholm_point: false,
    }
}

/// The rational matrix whose chains, divided by the returned scale, are the
/// chains of `m − λI`. Non-real λ uses the real 2n×2n form.
pub fn working_matrix(m: &ExactMatrix, lambda: &Point) -> Result<(ExactMatrix, u64)> {
    if lambda.is_real() {
        return Ok((m.shift(&lambda.re), 1));
    }
    if 2 * m.rows() > MAX_WORKING_DIM {
        return Err(lambda.unsupported(format!(
            "a {}×{} matrix atom at non-real λ exceeds the supported working dimension {MAX_WORKING_DIM}",
            m.rows(),
            m.rows()
        )));
    }
    Ok((m.realified_shift(&lambda.re, &lambda.im), 2))
}

/// Exact chains of a square matrix `s` (taken as `S` itself).
pub fn matrix_profile(s: &ExactMatrix) -> StructuralProfile {
    matrix_profile_with_scale(s, 1)
}

/// Per-power data of a matrix: kernels and images of `Sⁿ` up to the Fitting
/// index `ν` (the first `n` with `N(Sⁿ) = N(Sⁿ⁺¹)`).
pub struct MatrixChains {
    pub kernels: Vec<SubspaceBasis>,
    pub images: Vec<SubspaceBasis>,
    pub fitting_index: usize,
    pub nilpotent: bool,
}

pub fn matrix_chains(s: &ExactMatrix) -> MatrixChains {
    assert!(s.is_square());
    let n = s.rows();
    let mut power = ExactMatrix::identity(n);
    let mut kernels = vec![linalg::kernel_basis(&power)];
    let mut images = vec![linalg::image_basis(&power)];
    loop {
        power = &power * s;
        let k = linalg::kernel_basis(&power);
        let stable = k.dim() == kernels.last().expect("nonempty").dim();
        kernels.push(k);
        images.push(linalg::image_basis(&power));
        if stable {
            break;
        }
    }
    let fitting_index = kernels.len() - 2;
    let nilpotent = images[fitting_index].dim() == 0;
    MatrixChains { kernels, images, fitting_index, nilpotent }
}

pub fn matrix_profile_with_scale(s: &ExactMatrix, scale: u64) -> StructuralProfile {
    let dim = s.rows();
    let ch = matrix_chains(s);
    let nu = ch.fitting_index;
    let kernel_s = &ch.kernels[1];
    let image_s = &ch.images[1];
    let scaled = |d: usize| Fin(d as u64 / scale);
    let upto = nu + 1;
    let a: Vec<ExtNat> = (0..upto).map(|j| scaled(ch.kernels[j].dim())).collect();
    let r: Vec<ExtNat> = (0..upto).map(|j| scaled(ch.images[j].codim())).collect();
    let c: Vec<ExtNat> = (0..upto)
        .map(|j| scaled(linalg::subspace_intersection(&ch.images[j], kernel_s).expect("same ambient").dim()))
        .collect();
    let b: Vec<ExtNat> = (0..upto)
        .map(|j| scaled(dim - linalg::subspace_sum(image_s, &ch.kernels[j]).expect("same ambient").dim()))
        .collect();
    StructuralProfile {
        kernel_chain: EvAffineSeq::eventually_constant(a),
        range_codim_chain: EvAffineSeq::eventually_constant(r),
        meet_chain: EvAffineSeq::eventually_constant(c),
        join_codim_chain: EvAffineSeq::eventually_constant(b),
        range_closed: BoolSeq::constant(true),
        is_quasinilpotent: ch.nilpotent,
        nilpotency_degree: if ch.nilpotent { Fin(nu as u64) } else { Inf },
        is_pseudofredholm_point: true,
    }
}

/// Profile of a direct sum: chains add, closedness and quasi-nilpotence are
/// conjunctions, nilpotency degrees take the maximum.
pub fn direct_sum_profile(ps: &[StructuralProfile]) -> StructuralProfile {
    assert!(!ps.is_empty(), "direct sum of no profiles");
    ps[1..].iter().fold(ps[0].clone(), |acc, p| sum2(&acc, p))
}

fn sum2(x: &StructuralProfile, y: &StructuralProfile) -> StructuralProfile {
    StructuralProfile {
        kernel_chain: x.kernel_chain.add(&y.kernel_chain),
        range_codim_chain: x.range_codim_chain.add(&y.range_codim_chain),
        meet_chain: x.meet_chain.add(&y.meet_chain),
        join_codim_chain: x.join_codim_chain.add(&y.join_codim_chain),
        range_closed: x.range_closed.and(&y.range_closed),
        is_quasinilpotent: x.is_quasinilpotent && y.is_quasinilpotent,
        nilpotency_degree: x.nilpotency_degree.max(y.nilpotency_degree),
        is_pseudofredholm_point: x.is_pseudofredholm_point && y.is_pseudofredholm_point,
    }
}

/// Profile of `Sᵏ` from the profile of `S`.
///
/// Kernel and range chains subsample. For the other two chains, `S` maps
/// `R(Sᵐ) ∩ N(Sʲ⁺¹)` onto `R(Sᵐ⁺¹) ∩ N(Sʲ)` with kernel `R(Sᵐ) ∩ N(S)`, so
/// `dim R(Sᵐ) ∩ N(Sᵏ) = Σ_{i<k} c_{m+i}`; dually
/// `codim R(Sᵏ) + N(Sᵐ) = Σ_{i<k} b_{m+i}`.
pub fn power_profile(p: &StructuralProfile, k: u32) -> StructuralProfile {
    assert!(k >= 1, "powers start at 1");
    let k = k as usize;
    StructuralProfile {
        kernel_chain: p.kernel_chain.subsample(k),
        range_codim_chain: p.range_codim_chain.subsample(k),
        meet_chain: p.meet_chain.window_sum(k),
        join_codim_chain: p.join_codim_chain.window_sum(k),
        range_closed: p.range_closed.subsample(k),
        is_quasinilpotent: p.is_quasinilpotent,
        nilpotency_degree: match p.nilpotency_degree {
            Fin(d) => Fin(d.div_ceil(k as u64)),
            Inf => Inf,
        },
        is_pseudofredholm_point: p.is_pseudofredholm_point,
    }
}

/// Profile of `T − λI` for a direct sum `T`.
pub fn expr_profile(e: &super::atom::OperatorExpr, lambda: &Point) -> Result<StructuralProfile> {
    let ps = e.atoms().iter().map(|a| atom_profile(a, lambda)).collect::<Result<Vec<_>>>()?;
    Ok(direct_sum_profile(&ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};
    use crate::model::atom::OperatorExpr;

    fn fins(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&x| Fin(x)).collect()
    }

    fn at0(a: &Atom) -> StructuralProfile {
        atom_profile(a, &Point::zero()).unwrap()
    }

    fn jordan(n: usize) -> Atom {
        Atom::FiniteMatrix(ExactMatrix::jordan_block(n, int(0)))
    }

    #[test]
    fn right_shift_at_zero() {
        let p = at0(&Atom::RightShift);
        assert_eq!(p.kernel_chain, EvAffineSeq::constant(Fin(0)));
        assert_eq!(p.range_codim_chain.values(5), fins(&[0, 1, 2, 3, 4]));
        assert_eq!(p.meet_chain, EvAffineSeq::constant(Fin(0)));
        assert_eq!(p.join_codim_chain, EvAffineSeq::constant(Fin(1)));
        assert!((0..5).all(|n| p.range_closed.get(n)));
        assert!(!p.is_quasinilpotent);
    }

    #[test]
    fn qnil_shift_at_zero() {
        let p = at0(&Atom::QNilShift);
        assert_eq!(p.kernel_chain, EvAffineSeq::constant(Fin(0)));
        assert!(p.is_quasinilpotent);
        assert_eq!(p.nilpotency_degree, Inf);
        assert!((1..6).all(|n| !p.range_closed.get(n)));
        assert!(p.range_closed.get(0));
    }

    #[test]
    fn jordan_three_chains() {
        let p = at0(&jordan(3));
        assert_eq!(p.kernel_chain.values(6), fins(&[0, 1, 2, 3, 3, 3]));
        assert_eq!(p.range_codim_chain.values(6), fins(&[0, 1, 2, 3, 3, 3]));
        assert_eq!(p.meet_chain.values(5), fins(&[1, 1, 1, 0, 0]));
        assert_eq!(p.join_codim_chain.values(5), fins(&[1, 1, 1, 0, 0]));
        assert_eq!(p.nilpotency_degree, Fin(3));
    }

    #[test]
    fn direct_sum_examples() {
        let rl = direct_sum_profile(&[at0(&Atom::RightShift), at0(&Atom::LeftShift)]);
        assert_eq!(rl.kernel_chain, EvAffineSeq::affine(0, 1));
        assert_eq!(rl.range_codim_chain, EvAffineSeq::affine(0, 1));
        assert_eq!(rl.meet_chain, EvAffineSeq::constant(Fin(1)));
        assert_eq!(rl.join_codim_chain, EvAffineSeq::constant(Fin(1)));

        let p = at0(&jordan(3));
        let two = at0(&Atom::FiniteMatrix(ExactMatrix::from_i64(&[&[2]])));
        let summed = direct_sum_profile(&[p.clone(), two]);
        assert_eq!(summed.kernel_chain, p.kernel_chain);
        assert_eq!(summed.meet_chain, p.meet_chain);
        assert_eq!(summed.nilpotency_degree, Inf);
        assert!(!summed.is_quasinilpotent);

        let j23 = direct_sum_profile(&[at0(&jordan(2)), at0(&jordan(3))]);
        assert_eq!(j23.kernel_chain.values(6), fins(&[0, 2, 4, 5, 5, 5]));
        assert_eq!(j23.nilpotency_degree, Fin(3));
    }

    #[test]
    fn power_examples() {
        let r = at0(&Atom::RightShift);
        let r3 = power_profile(&r, 3);
        assert_eq!(r3.range_codim_chain, EvAffineSeq::affine(0, 3));
        assert_eq!(r3.kernel_chain, EvAffineSeq::constant(Fin(0)));
        assert_eq!(power_profile(&r, 1), r);
        let zero2 = matrix_profile(&ExactMatrix::zeros(2, 2));
        assert_eq!(power_profile(&at0(&jordan(2)), 2), zero2);
        assert_eq!(zero2.kernel_chain.values(3), fins(&[0, 2, 2]));
    }

    #[test]
    fn complex_points_use_the_real_form() {
        let rot = Atom::FiniteMatrix(ExactMatrix::from_i64(&[&[0, -1], &[1, 0]]));
        let at_i = atom_profile(&rot, &Point::new(int(0), int(1))).unwrap();
        assert_eq!(at_i.alpha(), Fin(1));
        let elsewhere = atom_profile(&rot, &Point::new(rat(1, 10), int(1))).unwrap();
        assert_eq!(elsewhere, StructuralProfile::invertible());
        let big = Atom::FiniteMatrix(ExactMatrix::identity(65));
        assert!(matches!(
            atom_profile(&big, &Point::new(int(0), int(1))),
            Err(crate::error::Error::UnsupportedPoint { .. })
        ));
        assert!(atom_profile(&big, &Point::real(int(1))).is_ok());
    }

    #[test]
    fn shift_tables_switch_on_the_unit_circle() {
        let on = Point::new(rat(3, 5), rat(4, 5));
        for a in [Atom::RightShift, Atom::LeftShift] {
            let p = atom_profile(&a, &on).unwrap();
            assert!(!p.is_pseudofredholm_point);
            assert!(p.is_self_consistent());
            assert_eq!(atom_profile(&a, &Point::real(int(2))).unwrap(), StructuralProfile::invertible());
        }
        let e = OperatorExpr::new(vec![Atom::RightShift, Atom::QNilShiftDual]).unwrap();
        assert!(expr_profile(&e, &on).unwrap().is_monotone());
    }
}
