use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassificationRecord};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, SubspaceBasis};
use crate::model::profile::{expr_profile, working_matrix};
use crate::model::{EvAffineSeq, ExtNat, OperatorExpr, Point};
use crate::structure::{self, canonical_gkd, chains, MatrixSplit};

/// A chain shown as its first values plus the symbolic tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDisplay {
    pub values: Vec<ExtNat>,
    pub tail: String,
    pub seq: EvAffineSeq,
}

impl ChainDisplay {
    pub fn new(seq: &EvAffineSeq, len: usize) -> Self {
        Self { values: seq.values(len.max(seq.tail_start() + 1)), tail: seq.tail_formula(), seq: seq.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSection {
    pub a: ChainDisplay,
    pub r: ChainDisplay,
    pub c: ChainDisplay,
    pub b: ChainDisplay,
    pub k: ChainDisplay,
    pub dis: ExtNat,
    pub fitting_index: ExtNat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkdSection {
    pub m_part: Vec<String>,
    pub n_part: Vec<String>,
    pub splits: Vec<MatrixSplit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixAtomSection {
    pub atom_index: usize,
    /// Drazin inverse of the atom itself.
    pub drazin_inverse: ExactMatrix,
    pub h0: SubspaceBasis,
    pub core: SubspaceBasis,
    /// `(dim K ∩ N, codim (R + H₀))` of `m − λI`; present for real λ.
    pub core_h0_oracle: Option<(ExtNat, ExtNat)>,
    pub conjecture: Option<(ExtNat, ExtNat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub name: String,
    pub operator: String,
    pub lambda: Point,
    pub classification: ClassificationRecord,
    pub chains: ChainSection,
    /// Absent where no generalized Kato decomposition exists.
    pub gkd: Option<GkdSection>,
    pub matrix_atoms: Vec<MatrixAtomSection>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn analyze(name: &str, e: &OperatorExpr, lambda: &Point) -> Result<AnalysisReport> {
    let classification = classify(e, lambda)?;
    let p = expr_profile(e, lambda)?;
    let ch = chains(&p);
    let len = 2 * e.matrix_dim() + 4;
    let chains = ChainSection {
        a: ChainDisplay::new(&ch.a, len),
        r: ChainDisplay::new(&ch.r, len),
        c: ChainDisplay::new(&ch.c, len),
        b: ChainDisplay::new(&ch.b, len),
        k: ChainDisplay::new(&ch.k, len),
        dis: ch.dis,
        fitting_index: ch.fitting_index,
    };
    let gkd = match canonical_gkd(e, lambda) {
        Ok(g) => Some(GkdSection {
            m_part: g.m_part.iter().map(|p| p.describe()).collect(),
            n_part: g.n_part.iter().map(|p| p.describe()).collect(),
            splits: g.splits,
        }),
        Err(Error::NotPseudoFredholm { .. }) => None,
        Err(other) => return Err(other),
    };
    let mut matrix_atoms = Vec::new();
    for (i, atom) in e.atoms().iter().enumerate() {
        let Some(m) = atom.as_matrix() else { continue };
        let (h0, core) = structure::h0_and_core(m);
        let shifted = if lambda.is_real() { Some(working_matrix(m, lambda)?.0) } else { None };
        matrix_atoms.push(MatrixAtomSection {
            atom_index: i,
            drazin_inverse: structure::drazin_inverse(m),
            h0,
            core,
            core_h0_oracle: shifted.as_ref().map(structure::rema1_oracle),
            conjecture: shifted.as_ref().map(structure::conjecture_quantities),
        });
    }
    Ok(AnalysisReport { name: name.to_string(), operator: e.to_string(), lambda: lambda.clone(), classification, chains, gkd, matrix_atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, jordan};
    use crate::model::{Atom, ExtIndex, Fin, Inf};

    #[test]
    fn jordan_report() {
        let e = OperatorExpr::single(jordan(3));
        let r = analyze("J_3", &e, &Point::zero()).unwrap();
        assert_eq!(r.chains.dis, Fin(3));
        assert_eq!(r.chains.a.values.len(), 10);
        assert_eq!(r.classification.index(), ExtIndex::Fin(0));
        assert!(r.classification.flags.gen_drazin);
        assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn reports_round_trip_for_the_catalog() {
        let on = Point::parse("3/5,4/5").unwrap();
        for (name, e) in catalog() {
            for l in [Point::zero(), on.clone(), Point::parse("1/2,-1/3").unwrap()] {
                let r = analyze(name, &e, &l).unwrap();
                assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r, "{name} at {l}");
            }
        }
        let r = analyze("R", &OperatorExpr::single(Atom::RightShift), &Point::zero()).unwrap();
        assert_eq!(r.classification.summary.q, Inf);
        assert_eq!(r.chains.r.tail, "n ↦ n for n ≥ 0");
    }
}
