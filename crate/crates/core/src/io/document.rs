use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, ExactMatrix};
use crate::model::{Atom, OperatorExpr};

/// On-disk description of an operator: a name and a list of atom records.
///
/// ```json
/// {"name": "J_2 ⊕ R", "atoms": [
///   {"type": "matrix", "entries": [["0", "1"], ["0", "0"]]},
///   {"type": "right_shift"}
/// ]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorDocument {
    pub name: String,
    pub atoms: Vec<AtomRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomRecord {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<String>>>,
}

impl AtomRecord {
    pub fn to_atom(&self) -> Result<Atom> {
        let plain = |a: Atom| match self.entries {
            Some(_) => Err(Error::Parse(format!("atom type {:?} takes no entries", self.kind))),
            None => Ok(a),
        };
        match self.kind.as_str() {
            "matrix" => {
                let rows = self.entries.as_ref().ok_or_else(|| Error::Parse("matrix atom needs entries".into()))?;
                let parsed = rows
                    .iter()
                    .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let m = ExactMatrix::from_rows(parsed).map_err(|e| Error::Parse(e.to_string()))?;
                Atom::matrix(m).map_err(|e| Error::Parse(e.to_string()))
            }
            "right_shift" => plain(Atom::RightShift),
            "left_shift" => plain(Atom::LeftShift),
            "qnil_shift" => plain(Atom::QNilShift),
            "qnil_shift_dual" => plain(Atom::QNilShiftDual),
            other => Err(Error::Parse(format!("unknown atom type {other:?}"))),
        }
    }

    pub fn from_atom(a: &Atom) -> Self {
        let entries = a.as_matrix().map(|m| m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect());
        Self { kind: a.type_tag().to_string(), entries }
    }
}

impl OperatorDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn to_expr(&self) -> Result<OperatorExpr> {
        if self.atoms.is_empty() {
            return Err(Error::Parse("document has no atoms".into()));
        }
        let atoms = self.atoms.iter().map(AtomRecord::to_atom).collect::<Result<Vec<_>>>()?;
        OperatorExpr::new(atoms).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_expr(name: impl Into<String>, e: &OperatorExpr) -> Self {
        Self { name: name.into(), atoms: e.atoms().iter().map(AtomRecord::from_atom).collect() }
    }
}

/// Reads and validates a document in one step.
pub fn parse_operator(text: &str) -> Result<(String, OperatorExpr)> {
    let doc = OperatorDocument::parse(text)?;
    let e = doc.to_expr()?;
    Ok((doc.name, e))
}
