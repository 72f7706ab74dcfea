//! Pointwise classification over rational grids and the σ-spectra derived
//! from it.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassificationRecord, Flags};
use crate::error::{Error, Result};
use crate::linalg::rational::{parse_rational, serde_str};
use crate::linalg::Rational;
use crate::model::{ExtIndex, OperatorExpr, Point};

/// A rectangular grid of `steps_re × steps_im` points spanning
/// `[re_min, re_max] × [im_min, im_max]`, endpoints included.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(with = "serde_str")]
    pub re_min: Rational,
    #[serde(with = "serde_str")]
    pub re_max: Rational,
    #[serde(with = "serde_str")]
    pub im_min: Rational,
    #[serde(with = "serde_str")]
    pub im_max: Rational,
    pub steps_re: usize,
    pub steps_im: usize,
}

impl GridSpec {
    pub fn new(re_min: Rational, re_max: Rational, im_min: Rational, im_max: Rational, steps_re: usize, steps_im: usize) -> Result<Self> {
        if steps_re == 0 || steps_im == 0 {
            return Err(Error::Invalid("grid point counts must be at least 1".into()));
        }
        if re_min > re_max || im_min > im_max {
            return Err(Error::Invalid("grid bounds must satisfy min ≤ max".into()));
        }
        Ok(Self { re_min, re_max, im_min, im_max, steps_re, steps_im })
    }

    /// Parses `RE0,RE1,IM0,IM1,NR,NI`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let [re0, re1, im0, im1, nr, ni] = parts.as_slice() else {
            return Err(Error::Invalid(format!("grid needs RE0,RE1,IM0,IM1,NR,NI, got {s:?}")));
        };
        let count = |t: &str| t.parse::<usize>().map_err(|_| Error::Invalid(format!("invalid grid point count {t:?}")));
        let bound = |t: &str| parse_rational(t).map_err(|e| Error::Invalid(e.to_string()));
        Self::new(bound(re0)?, bound(re1)?, bound(im0)?, bound(im1)?, count(nr)?, count(ni)?)
    }

    fn coord(min: &Rational, max: &Rational, n: usize, i: usize) -> Rational {
        if n == 1 {
            return min.clone();
        }
        min + (max - min) * Rational::from_integer((i as i64).into()) / Rational::from_integer(((n - 1) as i64).into())
    }

    pub fn len(&self) -> usize {
        self.steps_re * self.steps_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point at column `i` (real axis) and row `j` (imaginary axis).
    pub fn point(&self, i: usize, j: usize) -> Point {
        Point::new(
            Self::coord(&self.re_min, &self.re_max, self.steps_re, i),
            Self::coord(&self.im_min, &self.im_max, self.steps_im, j),
        )
    }

    /// All points, row-major: rows run along the imaginary axis.
    pub fn points(&self) -> Vec<Point> {
        (0..self.steps_im).flat_map(|j| (0..self.steps_re).map(move |i| (i, j))).map(|(i, j)| self.point(i, j)).collect()
    }

    /// The grid with every step halved; point `(i, j)` becomes `(2i, 2j)`.
    pub fn refined(&self) -> GridSpec {
        let refine = |n: usize| if n == 1 { 1 } else { 2 * n - 1 };
        GridSpec { steps_re: refine(self.steps_re), steps_im: refine(self.steps_im), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub lambda: Point,
    pub record: ClassificationRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumScan {
    pub grid: GridSpec,
    pub points: Vec<ScanPoint>,
}

/// Classifies every grid point; evaluation is parallel, order row-major.
/// The first failing point in row-major order determines the error.
pub fn scan(e: &OperatorExpr, g: &GridSpec) -> Result<SpectrumScan> {
    let lambdas = g.points();
    let results: Vec<Result<ClassificationRecord>> = lambdas.par_iter().map(|l| classify(e, l)).collect();
    let mut points = Vec::with_capacity(lambdas.len());
    for (lambda, r) in lambdas.into_iter().zip(results) {
        points.push(ScanPoint { lambda, record: r? });
    }
    Ok(SpectrumScan { grid: g.clone(), points })
}

/// The eight spectra, each the set of λ where `T − λI` is outside a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumName {
    /// upper pseudo semi-B-Fredholm
    Upbf,
    /// lower pseudo semi-B-Fredholm
    Lpbf,
    /// pseudo semi-B-Fredholm (upper or lower)
    Spbf,
    /// pseudo B-Fredholm
    Pbf,
    Upbw,
    Lpbw,
    Spbw,
    Pbw,
}

impl SpectrumName {
    pub const ALL: [SpectrumName; 8] = [
        SpectrumName::Upbf,
        SpectrumName::Lpbf,
        SpectrumName::Spbf,
        SpectrumName::Pbf,
        SpectrumName::Upbw,
        SpectrumName::Lpbw,
        SpectrumName::Spbw,
        SpectrumName::Pbw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumName::Upbf => "upbf",
            SpectrumName::Lpbf => "lpbf",
            SpectrumName::Spbf => "spbf",
            SpectrumName::Pbf => "pbf",
            SpectrumName::Upbw => "upbw",
            SpectrumName::Lpbw => "lpbw",
            SpectrumName::Spbw => "spbw",
            SpectrumName::Pbw => "pbw",
        }
    }

    /// Whether λ with these flags is in the complement of the spectrum.
    pub fn resolvent_member(self, f: &Flags) -> bool {
        match self {
            SpectrumName::Upbf => f.upper_pseudo_semi_b_fredholm,
            SpectrumName::Lpbf => f.lower_pseudo_semi_b_fredholm,
            SpectrumName::Spbf => f.upper_pseudo_semi_b_fredholm || f.lower_pseudo_semi_b_fredholm,
            SpectrumName::Pbf => f.pseudo_b_fredholm,
            SpectrumName::Upbw => f.upper_pseudo_semi_b_weyl,
            SpectrumName::Lpbw => f.lower_pseudo_semi_b_weyl,
            SpectrumName::Spbw => f.upper_pseudo_semi_b_weyl || f.lower_pseudo_semi_b_weyl,
            SpectrumName::Pbw => f.pseudo_b_weyl,
        }
    }

    pub fn contains(self, rec: &ClassificationRecord) -> bool {
        !self.resolvent_member(&rec.flags)
    }
}

impl fmt::Display for SpectrumName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.strip_prefix("sigma_").unwrap_or(s);
        SpectrumName::ALL
            .into_iter()
            .find(|n| n.as_str() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown spectrum {s:?}; expected one of upbf, lpbf, spbf, pbf, upbw, lpbw, spbw, pbw")))
    }
}

pub fn spectrum_membership(e: &OperatorExpr, lambda: &Point, which: SpectrumName) -> Result<bool> {
    Ok(which.contains(&classify(e, lambda)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentIndex {
    Constant(ExtIndex),
    NonConstant,
}

impl fmt::Display for ComponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentIndex::Constant(i) => write!(f, "{i}"),
            ComponentIndex::NonConstant => write!(f, "NONCONSTANT"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    pub size: usize,
    /// First point of the component in row-major order.
    pub anchor: Point,
    pub index: ComponentIndex,
}

/// Connected components of the sampled complement of `which`.
///
/// Grid neighbours are 4-adjacent, except that an edge is dropped when the
/// segment between the two points meets a curve on which the operator's atom
/// tables change (the unit circle for shifts): such a curve lies in the
/// spectrum even where no grid point samples it.
pub fn component_index_report(e: &OperatorExpr, s: &SpectrumScan, which: SpectrumName) -> Vec<Component> {
    let (nr, ni) = (s.grid.steps_re, s.grid.steps_im);
    let inside = |k: usize| which.resolvent_member(&s.points[k].record.flags);
    let mut label: Vec<Option<usize>> = vec![None; s.points.len()];
    let mut out = Vec::new();
    for start in 0..s.points.len() {
        if label[start].is_some() || !inside(start) {
            continue;
        }
        let id = out.len();
        label[start] = Some(id);
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        let mut index = Some(s.points[start].record.index());
        while let Some(k) = queue.pop_front() {
            size += 1;
            if index != Some(s.points[k].record.index()) {
                index = None;
            }
            let (i, j) = (k % nr, k / nr);
            let mut neighbours = Vec::with_capacity(4);
            if i > 0 {
                neighbours.push(k - 1);
            }
            if i + 1 < nr {
                neighbours.push(k + 1);
            }
            if j > 0 {
                neighbours.push(k - nr);
            }
            if j + 1 < ni {
                neighbours.push(k + nr);
            }
            for n in neighbours {
                if label[n].is_none() && inside(n) && !e.segment_meets_boundary(&s.points[k].lambda, &s.points[n].lambda) {
                    label[n] = Some(id);
                    queue.push_back(n);
                }
            }
        }
        out.push(Component {
            id,
            size,
            anchor: s.points[start].lambda.clone(),
            index: index.map_or(ComponentIndex::NonConstant, ComponentIndex::Constant),
        });
    }
    out
}

pub fn csv_header() -> Vec<String> {
    let mut h = vec!["re".to_string(), "im".to_string()];
    h.extend(Flags::NAMES.iter().map(|s| s.to_string()));
    h.extend(["alpha", "beta", "p", "q", "index"].map(String::from));
    h
}

fn row_cells(p: &ScanPoint) -> Vec<String> {
    let r = &p.record;
    let mut cells = vec![crate::linalg::format_rational(&p.lambda.re), crate::linalg::format_rational(&p.lambda.im)];
    cells.extend(r.flags.values().into_iter().map(|b| b.to_string()));
    let s = &r.summary;
    cells.extend([s.alpha.to_string(), s.beta.to_string(), s.p.to_string(), s.q.to_string(), s.index.to_string()]);
    cells
}

pub fn to_csv(s: &SpectrumScan) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(csv_header()).map_err(io)?;
    for p in &s.points {
        w.write_record(row_cells(p)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// JSON mirror of the CSV export: one object per row with the same keys.
pub fn to_json(s: &SpectrumScan) -> Result<String> {
    let header = csv_header();
    let rows: Vec<serde_json::Value> = s
        .points
        .iter()
        .map(|p| {
            let mut obj = serde_json::Map::new();
            let r = &p.record;
            obj.insert("re".into(), crate::linalg::format_rational(&p.lambda.re).into());
            obj.insert("im".into(), crate::linalg::format_rational(&p.lambda.im).into());
            for (name, v) in Flags::NAMES.iter().zip(r.flags.values()) {
                obj.insert((*name).into(), v.into());
            }
            let summary = serde_json::to_value(r.summary).expect("summary serializes");
            for key in &header[2 + Flags::NAMES.len()..] {
                obj.insert(key.clone(), summary[key.as_str()].clone());
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    serde_json::to_string_pretty(&rows).map_err(|e| Error::Internal(e.to_string()))
}

/// Checks that every point of `coarse` reappears with the same record in the
/// refined scan.
pub fn refinement_consistent(coarse: &SpectrumScan, fine: &SpectrumScan) -> bool {
    let g = &coarse.grid;
    let f = &fine.grid;
    let sr = if g.steps_re == 1 { 0 } else { (f.steps_re - 1) / (g.steps_re - 1) };
    let si = if g.steps_im == 1 { 0 } else { (f.steps_im - 1) / (g.steps_im - 1) };
    (0..g.steps_im).all(|j| {
        (0..g.steps_re).all(|i| {
            let c = &coarse.points[j * g.steps_re + i];
            let q = &fine.points[j * si * f.steps_re + i * sr];
            c == q
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};
    use crate::linalg::ExactMatrix;
    use crate::model::Atom;

    fn expr(atoms: Vec<Atom>) -> OperatorExpr {
        OperatorExpr::new(atoms).unwrap()
    }

    fn square(n: usize) -> GridSpec {
        GridSpec::new(int(-2), int(2), int(-2), int(2), n, n).unwrap()
    }

    #[test]
    fn grid_parsing_and_points() {
        let g = GridSpec::parse("-2,2,-2,2,33,33").unwrap();
        assert_eq!(g.point(1, 0), Point::new(rat(-15, 8), int(-2)));
        assert_eq!(g.len(), 1089);
        assert!(GridSpec::parse("-2,2,-2,2,0,3").is_err());
        assert!(GridSpec::parse("-2,2,-2,2,3").is_err());
        let one = GridSpec::parse("1/2,1/2,0,0,1,1").unwrap();
        assert_eq!(one.points(), vec![Point::real(rat(1, 2))]);
        assert_eq!(g.points()[33], Point::new(int(-2), rat(-15, 8)));
    }

    #[test]
    fn right_shift_scan() {
        let e = expr(vec![Atom::RightShift]);
        let s = scan(&e, &square(17)).unwrap();
        for p in &s.points {
            let side = p.lambda.unit_circle_side();
            let r = &p.record;
            match side {
                -1 => assert!(r.flags.fredholm && r.index() == ExtIndex::Fin(-1)),
                1 => assert!(r.flags.invertible),
                _ => assert!(!r.flags.pseudo_fredholm),
            }
        }
        let comps = component_index_report(&e, &s, SpectrumName::Upbf);
        let labelled: Vec<_> = comps.iter().map(|c| c.index).collect();
        assert_eq!(labelled.len(), 2);
        assert!(labelled.contains(&ComponentIndex::Constant(ExtIndex::Fin(-1))));
        assert!(labelled.contains(&ComponentIndex::Constant(ExtIndex::Fin(0))));
    }

    #[test]
    fn nilpotent_scan_has_one_component() {
        let e = expr(vec![Atom::FiniteMatrix(ExactMatrix::jordan_block(2, int(0)))]);
        let s = scan(&e, &square(9)).unwrap();
        let non_invertible: Vec<_> = s.points.iter().filter(|p| !p.record.flags.invertible).collect();
        assert_eq!(non_invertible.len(), 1);
        assert!(non_invertible[0].lambda.is_zero() && non_invertible[0].record.flags.quasi_nilpotent);
        let comps = component_index_report(&e, &s, SpectrumName::Pbf);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].index, ComponentIndex::Constant(ExtIndex::Fin(0)));
    }

    #[test]
    fn sums_add_indices_inside_the_disk() {
        let e = expr(vec![Atom::RightShift, Atom::RightShift]);
        let s = scan(&e, &square(9)).unwrap();
        let comps = component_index_report(&e, &s, SpectrumName::Pbf);
        assert!(comps.iter().any(|c| c.index == ComponentIndex::Constant(ExtIndex::Fin(-2))));
        let lj = expr(vec![Atom::LeftShift, Atom::FiniteMatrix(ExactMatrix::jordan_block(3, int(0)))]);
        let r0 = classify(&lj, &Point::zero()).unwrap();
        assert!(r0.flags.b_fredholm && r0.flags.fredholm && !r0.flags.semi_regular && r0.index() == ExtIndex::Fin(1));
        let r = classify(&lj, &Point::real(rat(1, 2))).unwrap();
        assert!(r.flags.fredholm && r.index() == ExtIndex::Fin(1));
    }

    #[test]
    fn membership_examples() {
        let r = expr(vec![Atom::RightShift]);
        assert!(!spectrum_membership(&r, &Point::zero(), SpectrumName::Pbf).unwrap());
        assert!(spectrum_membership(&r, &Point::new(rat(3, 5), rat(4, 5)), SpectrumName::Pbf).unwrap());
        assert!(spectrum_membership(&r, &Point::zero(), SpectrumName::Pbw).unwrap());
        assert_eq!("sigma_upbw".parse::<SpectrumName>().unwrap(), SpectrumName::Upbw);
        assert!("sigma_x".parse::<SpectrumName>().is_err());
    }

    #[test]
    fn exports_share_field_names() {
        let e = expr(vec![Atom::RightShift]);
        let s = scan(&e, &GridSpec::parse("0,1,0,0,2,1").unwrap()).unwrap();
        let csv = to_csv(&s).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), 2 + 25 + 5);
        assert!(lines.next().unwrap().starts_with("0,0,false"));
        assert!(lines.next().unwrap().ends_with("undef"));
        let json: serde_json::Value = serde_json::from_str(&to_json(&s).unwrap()).unwrap();
        let keys: Vec<String> = json[0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, csv_header());
        assert_eq!(json[1]["index"], "undef");
        assert_eq!(json[0]["q"], "inf");
    }

    #[test]
    fn refinement_keeps_records() {
        let e = expr(vec![Atom::LeftShift, Atom::QNilShift]);
        let g = square(5);
        assert!(refinement_consistent(&scan(&e, &g).unwrap(), &scan(&e, &g.refined()).unwrap()));
    }
}
