//! Derived structural quantities: chain reports, the canonical generalized
//! Kato decomposition, nullity/deficiency/ascent/descent, the index, and the
//! finite-dimensional Fitting data (H₀, analytic core, Drazin inverse).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ExactMatrix, SubspaceBasis};
use crate::model::extnat::{ExtIndex, ExtNat, Fin, Inf};
use crate::model::profile::{self, atom_profile, direct_sum_profile, matrix_chains, MatrixChains, StructuralProfile};
use crate::model::{Atom, EvAffineSeq, OperatorExpr, Point};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub a: EvAffineSeq,
    pub r: EvAffineSeq,
    pub c: EvAffineSeq,
    pub b: EvAffineSeq,
    /// `k_n = c_n − c_{n+1}`.
    pub k: EvAffineSeq,
    pub dis: ExtNat,
    /// Least `n` with `a_n = a_{n+1}`.
    pub fitting_index: ExtNat,
}

pub fn chains(p: &StructuralProfile) -> ChainReport {
    let c = &p.meet_chain;
    // c is nonincreasing, hence eventually constant, and k vanishes on its tail
    let k = EvAffineSeq::from_fn(c.tail_start(), |n| c.get(n).checked_sub(c.get(n + 1)).unwrap_or(Inf));
    let a = &p.kernel_chain;
    let fitting_index = (0..=a.tail_start())
        .find(|&n| a.get(n) == a.get(n + 1))
        .map_or(Inf, |n| Fin(n as u64));
    ChainReport {
        a: a.clone(),
        r: p.range_codim_chain.clone(),
        c: c.clone(),
        b: p.join_codim_chain.clone(),
        k,
        dis: c.stabilization_point(),
        fitting_index,
    }
}

/// `(α(T_[n]), β(T_[n]), ind(T_[n])) = (c_n, b_n, c_n − b_n)`.
pub fn restriction_profile(p: &StructuralProfile, n: usize) -> (ExtNat, ExtNat, ExtIndex) {
    let alpha = p.meet_chain.get(n);
    let beta = p.join_codim_chain.get(n);
    (alpha, beta, alpha.index_minus(beta))
}

/// One summand of a GKD part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkdPiece {
    /// A whole atom, still to be shifted by λ.
    Atom(Atom),
    /// A block of `T − λI` restricted to an invariant subspace, already
    /// shifted. `scale` is 2 for blocks of the real 2n×2n form.
    Block { matrix: ExactMatrix, scale: u64 },
}

impl GkdPiece {
    fn profile(&self, lambda: &Point) -> Result<StructuralProfile> {
        match self {
            GkdPiece::Atom(a) => atom_profile(a, lambda),
            GkdPiece::Block { matrix, .. } if matrix.rows() == 0 => Ok(StructuralProfile::trivial()),
            GkdPiece::Block { matrix, scale } => Ok(profile::matrix_profile_with_scale(matrix, *scale)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GkdPiece::Atom(a) => a.to_string(),
            GkdPiece::Block { matrix, scale: 1 } => format!("block {matrix}"),
            GkdPiece::Block { matrix, .. } => format!("real-form block {matrix}"),
        }
    }
}

/// Fitting split of one matrix atom of the expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSplit {
    pub atom_index: usize,
    pub fitting_index: usize,
    /// Whether the bases live in the real 2n-dimensional form (non-real λ).
    pub realified: bool,
    pub m_basis: SubspaceBasis,
    pub n_basis: SubspaceBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkdPair {
    pub lambda: Point,
    pub m_part: Vec<GkdPiece>,
    pub n_part: Vec<GkdPiece>,
    pub splits: Vec<MatrixSplit>,
}

impl GkdPair {
    pub fn m_profile(&self) -> Result<StructuralProfile> {
        part_profile(&self.m_part, &self.lambda)
    }

    pub fn n_profile(&self) -> Result<StructuralProfile> {
        part_profile(&self.n_part, &self.lambda)
    }

    /// The semi-regular part as an operator (real λ only, where restricted
    /// blocks are rational matrices of `T` itself).
    pub fn m_part_expr(&self) -> Option<OperatorExpr> {
        part_expr(&self.m_part, &self.lambda)
    }

    pub fn n_part_expr(&self) -> Option<OperatorExpr> {
        part_expr(&self.n_part, &self.lambda)
    }
}

fn part_profile(part: &[GkdPiece], lambda: &Point) -> Result<StructuralProfile> {
    let mut ps = vec![StructuralProfile::trivial()];
    for piece in part {
        ps.push(piece.profile(lambda)?);
    }
    Ok(direct_sum_profile(&ps))
}

fn part_expr(part: &[GkdPiece], lambda: &Point) -> Option<OperatorExpr> {
    if !lambda.is_real() {
        return None;
    }
    let atoms = part
        .iter()
        .filter_map(|p| match p {
            GkdPiece::Atom(a) => Some(a.clone()),
            GkdPiece::Block { matrix, .. } if matrix.rows() == 0 => None,
            GkdPiece::Block { matrix, .. } => Some(Atom::FiniteMatrix(matrix.shift(&-lambda.re.clone()))),
        })
        .collect();
    OperatorExpr::new(atoms).ok()
}

/// Canonical generalized Kato decomposition of `T − λI`.
///
/// Matrix atoms split by Fitting: `R(S^ν)` (where `S` is invertible) goes to
/// the semi-regular part and `N(S^ν)` (where `S` is nilpotent) to the
/// quasi-nilpotent part. Shifts off the unit circle are semi-regular; the
/// quasi-nilpotent shifts are quasi-nilpotent at 0 and invertible elsewhere.
pub fn canonical_gkd(e: &OperatorExpr, lambda: &Point) -> Result<GkdPair> {
    let mut pair = GkdPair { lambda: lambda.clone(), m_part: Vec::new(), n_part: Vec::new(), splits: Vec::new() };
    for (i, atom) in e.atoms().iter().enumerate() {
        if !atom_profile(atom, lambda)?.is_pseudofredholm_point {
            return Err(lambda.not_pseudo_fredholm());
        }
        match atom {
            Atom::FiniteMatrix(m) => {
                let (s, scale) = profile::working_matrix(m, lambda)?;
                let ch = matrix_chains(&s);
                let nu = ch.fitting_index;
                let m_basis = ch.images[nu].clone();
                let n_basis = ch.kernels[nu].clone();
                if m_basis.dim() > 0 {
                    pair.m_part.push(GkdPiece::Block { matrix: linalg::restrict(&s, &m_basis)?, scale });
                }
                if n_basis.dim() > 0 {
                    pair.n_part.push(GkdPiece::Block { matrix: linalg::restrict(&s, &n_basis)?, scale });
                }
                pair.splits.push(MatrixSplit { atom_index: i, fitting_index: nu, realified: scale == 2, m_basis, n_basis });
            }
            Atom::QNilShift | Atom::QNilShiftDual if lambda.is_zero() => pair.n_part.push(GkdPiece::Atom(atom.clone())),
            _ => pair.m_part.push(GkdPiece::Atom(atom.clone())),
        }
    }
    Ok(pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructuralSummary {
    pub alpha: ExtNat,
    pub beta: ExtNat,
    pub p: ExtNat,
    pub q: ExtNat,
    pub index: ExtIndex,
    pub dis: ExtNat,
}

/// Nullity, deficiency, ascent and descent of the semi-regular part of the
/// canonical decomposition, with the index and `dis` of the whole operator.
pub fn alpha_beta_pq(e: &OperatorExpr, lambda: &Point) -> Result<StructuralSummary> {
    let full = profile::expr_profile(e, lambda)?;
    let gkd = canonical_gkd(e, lambda)?;
    summary_from(&full, &gkd.m_profile()?)
}

fn summary_from(full: &StructuralProfile, m: &StructuralProfile) -> Result<StructuralSummary> {
    let (alpha, beta) = (m.alpha(), m.beta());
    Ok(StructuralSummary {
        alpha,
        beta,
        p: m.kernel_chain.stabilization_point(),
        q: m.range_codim_chain.stabilization_point(),
        index: alpha.index_minus(beta),
        dis: full.meet_chain.stabilization_point(),
    })
}

/// Summary that degrades at points without a generalized Kato decomposition:
/// α, β, p, q become ∞ and the index undefined, `dis` is still reported.
pub fn summary_or_undefined(e: &OperatorExpr, lambda: &Point) -> Result<(StructuralProfile, Option<GkdPair>, StructuralSummary)> {
    let full = profile::expr_profile(e, lambda)?;
    match canonical_gkd(e, lambda) {
        Ok(gkd) => {
            let s = summary_from(&full, &gkd.m_profile()?)?;
            Ok((full, Some(gkd), s))
        }
        Err(Error::NotPseudoFredholm { .. }) => {
            let dis = full.meet_chain.stabilization_point();
            let s = StructuralSummary { alpha: Inf, beta: Inf, p: Inf, q: Inf, index: ExtIndex::Undefined, dis };
            Ok((full, None, s))
        }
        Err(other) => Err(other),
    }
}

pub fn index(e: &OperatorExpr, lambda: &Point) -> Result<ExtIndex> {
    Ok(summary_or_undefined(e, lambda)?.2.index)
}

/// Index computed from a non-canonical decomposition in which the matrix
/// atoms at the given positions are placed wholly into the semi-regular part
/// as finite-dimensional (hence Fredholm) summands.
pub fn index_with_regrouping(e: &OperatorExpr, lambda: &Point, moved: &[usize]) -> Result<ExtIndex> {
    let gkd = canonical_gkd(e, lambda)?;
    let mut m_part: Vec<GkdPiece> = Vec::new();
    let mut split_iter = gkd.splits.iter();
    let mut m_iter = gkd.m_part.iter();
    for (i, atom) in e.atoms().iter().enumerate() {
        match atom {
            Atom::FiniteMatrix(m) => {
                let split = split_iter.next().expect("one split per matrix atom");
                if split.m_basis.dim() > 0 {
                    // the canonical core block of this atom
                    let core = m_iter.next().expect("core block").clone();
                    if !moved.contains(&i) {
                        m_part.push(core);
                    }
                }
                if moved.contains(&i) {
                    let (s, scale) = profile::working_matrix(m, lambda)?;
                    m_part.push(GkdPiece::Block { matrix: s, scale });
                }
            }
            Atom::QNilShift | Atom::QNilShiftDual if lambda.is_zero() => {}
            _ => m_part.push(m_iter.next().expect("atom piece").clone()),
        }
    }
    let ind = m_part.iter().try_fold(ExtIndex::Fin(0), |acc, piece| -> Result<ExtIndex> {
        let p = piece.profile(lambda)?;
        acc.checked_add(p.alpha().index_minus(p.beta()))
            .ok_or_else(|| Error::Internal("index sum mixes +∞ and −∞".into()))
    })?;
    Ok(ind)
}

/// `(H₀(T), K(T)) = (N(T^ν), R(T^ν))`.
pub fn h0_and_core(m: &ExactMatrix) -> (SubspaceBasis, SubspaceBasis) {
    let ch = matrix_chains(m);
    fitting_parts(&ch)
}

fn fitting_parts(ch: &MatrixChains) -> (SubspaceBasis, SubspaceBasis) {
    (ch.kernels[ch.fitting_index].clone(), ch.images[ch.fitting_index].clone())
}

/// `(dim K(T) ∩ N(T), codim (R(T) + H₀(T)))`.
pub fn rema1_oracle(m: &ExactMatrix) -> (ExtNat, ExtNat) {
    let ch = matrix_chains(m);
    let (h0, core) = fitting_parts(&ch);
    let meet = linalg::subspace_intersection(&core, &ch.kernels[1]).expect("same ambient");
    let join = linalg::subspace_sum(&ch.images[1], &h0).expect("same ambient");
    (Fin(meet.dim() as u64), Fin(join.codim() as u64))
}

/// Both sides of the finiteness conjecture for `dim K(T) ∩ N(T)` and
/// `dim X/(R(T) + H₀(T))`; always finite for matrices.
pub fn conjecture_quantities(m: &ExactMatrix) -> (ExtNat, ExtNat) {
    rema1_oracle(m)
}

/// Drazin inverse via the core-nilpotent split: `D = P·diag(A⁻¹, 0)·P⁻¹`
/// where `P = [core | H₀]` and `A` is `m` restricted to the core.
pub fn drazin_inverse(m: &ExactMatrix) -> ExactMatrix {
    assert!(m.is_square(), "Drazin inverse of a non-square matrix");
    let n = m.rows();
    let (h0, core) = h0_and_core(m);
    let r = core.dim();
    if r == 0 {
        return ExactMatrix::zeros(n, n);
    }
    let a_inv = linalg::restrict(m, &core).expect("core is invariant").inverse().expect("invertible on the core");
    let mut cols: Vec<Vec<_>> = core.vectors().to_vec();
    cols.extend(h0.vectors().iter().cloned());
    let p = ExactMatrix::from_columns(n, &cols);
    let p_inv = p.inverse().expect("core ⊕ H₀ is the whole space");
    let block = ExactMatrix::block_diagonal(&[a_inv, ExactMatrix::zeros(n - r, n - r)]);
    &(&p * &block) * &p_inv
}

/// Checks `D·m = m·D`, `D·m·D = D` and `m^{ν+1}·D = m^ν`.
pub fn drazin_axioms_hold(m: &ExactMatrix, d: &ExactMatrix) -> bool {
    let nu = matrix_chains(m).fitting_index as u32;
    let md = m * d;
    md == d * m && &(d * m) * d == *d && &m.pow(nu + 1) * d == m.pow(nu)
}
