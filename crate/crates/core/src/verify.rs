//! Seeded property suites over random matrices, random direct sums and the
//! catalog. Every check is exact; results are tallied per property.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::catalog;
use crate::classify::{b_fredholm_chain, check_lattice, classify, dual_mirror_holds};
use crate::error::{Error, Result};
use crate::linalg::rational::{int, rat};
use crate::linalg::{self, ExactMatrix, Rational, SubspaceBasis};
use crate::model::profile::{expr_profile, matrix_chains, matrix_profile, power_profile};
use crate::model::{Atom, EvAffineSeq, ExtIndex, ExtNat, Fin, OperatorExpr, Point};
use crate::spectra::{component_index_report, scan, to_csv, ComponentIndex, GridSpec, SpectrumName};
use crate::structure::{
    self, alpha_beta_pq, canonical_gkd, chains, drazin_axioms_hold, drazin_inverse, index, index_with_regrouping, restriction_profile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Chains,
    Gkd,
    IndexLaws,
    Duality,
    Punctured,
    Spectra,
    All,
}

impl Suite {
    const RUN_ORDER: [Suite; 6] = [Suite::Chains, Suite::Gkd, Suite::IndexLaws, Suite::Duality, Suite::Punctured, Suite::Spectra];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Chains => "chains",
            Suite::Gkd => "gkd",
            Suite::IndexLaws => "index-laws",
            Suite::Duality => "duality",
            Suite::Punctured => "punctured",
            Suite::Spectra => "spectra",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::RUN_ORDER
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}; expected chains, gkd, index-laws, duality, punctured, spectra or all")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub cases: usize,
    pub seed: u64,
    /// Deliberately corrupts the chain-defect oracle so the harness can be
    /// shown to catch a wrong oracle.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    /// Size of the failing input (matrix dimension or atom count), used to
    /// pick the minimal case.
    pub size: usize,
    pub property: String,
    pub case: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub tallies: BTreeMap<String, Tally>,
    pub failures: Vec<Failure>,
}

impl VerifyOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn minimal_failure(&self) -> Option<&Failure> {
        self.failures.iter().min()
    }

    fn merge(&mut self, other: VerifyOutcome) {
        for (k, t) in other.tallies {
            let e = self.tallies.entry(k).or_default();
            e.passed += t.passed;
            e.failed += t.failed;
        }
        self.failures.extend(other.failures);
    }

    pub fn render(&self, cfg: &VerifyConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify suite={} cases={} seed={}", cfg.suite, cfg.cases, cfg.seed);
        for (name, t) in &self.tallies {
            let _ = writeln!(s, "  {name}: {} passed, {} failed", t.passed, t.failed);
        }
        let total: u64 = self.tallies.values().map(|t| t.passed + t.failed).sum();
        match self.minimal_failure() {
            None => {
                let _ = writeln!(s, "all {total} checks passed");
            }
            Some(f) => {
                let _ = writeln!(s, "{} of {total} checks FAILED", self.failures.len());
                let _ = writeln!(s, "minimal failing case: {} on {}", f.property, f.case);
            }
        }
        s
    }
}

/// Tally collector for one suite and one batch of cases.
struct Checker {
    suite: &'static str,
    out: VerifyOutcome,
}

impl Checker {
    fn new(suite: Suite) -> Self {
        Self { suite: suite.as_str(), out: VerifyOutcome::default() }
    }

    fn check(&mut self, property: &str, ok: bool, size: usize, case: impl FnOnce() -> String) {
        let t = self.out.tallies.entry(format!("{}/{property}", self.suite)).or_default();
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            self.out.failures.push(Failure { size, property: format!("{}/{property}", self.suite), case: case() });
        }
    }

    /// Records an evaluation error as a failure of `property`.
    fn ok<T>(&mut self, property: &str, r: Result<T>, size: usize, case: impl Fn() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(property, false, size, || format!("{} ({e})", case()));
                None
            }
        }
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyOutcome> {
    let suites: Vec<Suite> = match cfg.suite {
        Suite::All => Suite::RUN_ORDER.to_vec(),
        s => vec![s],
    };
    let mut out = VerifyOutcome::default();
    for s in suites {
        let part = match s {
            Suite::Chains => chains_suite(cfg),
            Suite::Gkd => gkd_suite(cfg),
            Suite::IndexLaws => index_laws_suite(cfg),
            Suite::Duality => duality_suite(cfg),
            Suite::Punctured => punctured_suite(cfg),
            Suite::Spectra => spectra_suite(cfg),
            Suite::All => unreachable!("expanded above"),
        };
        out.merge(part);
    }
    Ok(out)
}

/// Runs `f` on every case index in parallel and merges in index order.
fn per_case(suite: Suite, cases: usize, f: impl Fn(&mut Checker, usize) + Sync) -> VerifyOutcome {
    let parts: Vec<VerifyOutcome> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut c = Checker::new(suite);
            f(&mut c, i);
            c.out
        })
        .collect();
    let mut out = VerifyOutcome::default();
    for p in parts {
        out.merge(p);
    }
    out
}

// ---------------------------------------------------------------------------
// random inputs

/// Independent generator for case `i` and purpose `stream`.
pub fn case_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | i as u64);
    rng
}

const MATRIX_STREAM: u64 = 1;
const SUBSPACE_STREAM: u64 = 2;
const EXPR_STREAM: u64 = 3;

fn random_entry(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn unit_triangular(rng: &mut ChaCha8Rng, n: usize, upper: bool) -> ExactMatrix {
    let mut p = ExactMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if (upper && j > i) || (!upper && j < i) {
                p[(i, j)] = int(rng.gen_range(-2..=2));
            }
        }
    }
    p
}

/// A random invertible matrix `U·L` with unit-triangular factors.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    &unit_triangular(rng, n, true) * &unit_triangular(rng, n, false)
}

/// `P·J·P⁻¹` for a Jordan matrix `J` whose eigenvalues favour 0.
fn jordan_structured(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let eig = if rng.gen_bool(0.6) { int(0) } else { int(rng.gen_range(-2..=2)) };
        blocks.push(ExactMatrix::jordan_block(size, eig));
        left -= size;
    }
    let j = ExactMatrix::block_diagonal(&blocks);
    let p = random_invertible(rng, n);
    let p_inv = p.inverse().expect("unit-triangular factors are invertible");
    &(&p * &j) * &p_inv
}

fn random_square(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    if rng.gen_bool(0.3) {
        jordan_structured(rng, n)
    } else {
        let rows = (0..n).map(|_| (0..n).map(|_| random_entry(rng)).collect()).collect();
        ExactMatrix::from_rows(rows).expect("square")
    }
}

/// Random matrix of dimension 2..=6 with entries in {−3..3}/{1..3}; 30% are
/// similar to Jordan matrices so that degenerate chains are common.
pub fn random_matrix(rng: &mut ChaCha8Rng) -> ExactMatrix {
    let n = rng.gen_range(2..=6);
    random_square(rng, n)
}

/// The `i`-th random matrix of a run.
pub fn case_matrix(seed: u64, i: usize) -> ExactMatrix {
    random_matrix(&mut case_rng(seed, MATRIX_STREAM, i))
}

/// `m = P·[[X, Y], [0, Z]]·P⁻¹` with its invariant subspace `A = P·span{e_1..e_{d−c}}`,
/// `c ∈ {1, 2}`.
pub fn invariant_pair(rng: &mut ChaCha8Rng) -> (ExactMatrix, SubspaceBasis) {
    let d = rng.gen_range(3..=6);
    let c = rng.gen_range(1..=2);
    let mut block = random_square(rng, d);
    for i in d - c..d {
        for j in 0..d - c {
            block[(i, j)] = int(0);
        }
    }
    let p = random_invertible(rng, d);
    let m = &(&p * &block) * &p.inverse().expect("invertible");
    let cols: Vec<Vec<Rational>> = (0..d - c).map(|j| p.column(j)).collect();
    (m, SubspaceBasis::span(d, cols).expect("columns of P"))
}

/// A random direct sum of one to three atoms; matrix atoms have dimension
/// 1..=3.
pub fn random_expr(rng: &mut ChaCha8Rng) -> OperatorExpr {
    let count = rng.gen_range(1..=3);
    let atoms = (0..count)
        .map(|_| match rng.gen_range(0..6) {
            0 | 1 => {
                let n = rng.gen_range(1..=3);
                Atom::FiniteMatrix(random_square(rng, n))
            }
            2 => Atom::RightShift,
            3 => Atom::LeftShift,
            4 => Atom::QNilShift,
            _ => Atom::QNilShiftDual,
        })
        .collect();
    OperatorExpr::new(atoms).expect("nonempty")
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    let pts = [(0, 1, 0, 1), (1, 2, 0, 1), (-1, 3, 0, 1), (0, 1, 1, 2), (3, 5, 4, 5), (2, 1, 0, 1), (1, 10, -1, 10), (-1, 1, 0, 1), (1, 1, 0, 1), (-3, 2, 1, 2)];
    let (a, b, c, d) = pts[rng.gen_range(0..pts.len())];
    Point::new(rat(a, b), rat(c, d))
}

fn expr_size(e: &OperatorExpr) -> usize {
    e.atoms().len() + e.matrix_dim()
}

fn punctured_points() -> Vec<Point> {
    let mut v = Vec::new();
    for den in [10, 100] {
        for s in [1, -1] {
            v.push(Point::real(rat(s, den)));
            v.push(Point::new(int(0), rat(s, den)));
        }
    }
    v
}

// ---------------------------------------------------------------------------
// chains

/// `(α(T_[n]), β(T_[n]))` computed by restricting `m` to `R(mⁿ)` directly,
/// given the powers `mⁿ` and their ranks.
fn restricted_nullity_deficiency(m: &ExactMatrix, pow_n: &ExactMatrix, rank_next: usize) -> (u64, u64) {
    let sub = linalg::image_basis(pow_n);
    if sub.dim() == 0 {
        return (0, 0);
    }
    let t = linalg::restrict(m, &sub).expect("ranges of powers are invariant");
    let alpha = linalg::kernel_basis(&t).dim() as u64;
    let beta = (sub.dim() - rank_next) as u64;
    (alpha, beta)
}

fn chains_suite(cfg: &VerifyConfig) -> VerifyOutcome {
    let mut out = per_case(Suite::Chains, cfg.cases, |c, i| {
        let m = case_matrix(cfg.seed, i);
        let d = m.rows();
        let case = || format!("case {i}: {m}");
        let p = matrix_profile(&m);
        let rep = chains(&p);
        let top = d + 2;
        let mut pows = vec![ExactMatrix::identity(d)];
        for n in 1..=top + 2 {
            pows.push(&pows[n - 1] * &m);
        }
        let ranks: Vec<usize> = pows.iter().map(linalg::rank).collect();
        let direct: Vec<(u64, u64)> = (0..=top + 1).map(|n| restricted_nullity_deficiency(&m, &pows[n], ranks[n + 1])).collect();
        for n in 0..=top {
            let (an, bn) = direct[n];
            let (an1, bn1) = direct[n + 1];
            let mut k_oracle = an as i64 - an1 as i64;
            if cfg.inject_fault && n == 0 {
                k_oracle += 1;
            }
            let k = rep.k.get(n).finite().map(|v| v as i64);
            c.check("k_identity", k == Some(k_oracle) && k_oracle == bn as i64 - bn1 as i64, d, case);
            c.check("k_bound", k.is_some_and(|k| k >= 0 && k as u64 <= an.min(bn)), d, case);
            c.check("restriction_index_zero", an == bn, d, case);
            c.check(
                "restriction_profile_direct",
                restriction_profile(&p, n) == (Fin(an), Fin(bn), ExtIndex::Fin(0)),
                d,
                case,
            );
            c.check("meet_chain_rank_formula", p.meet_chain.get(n) == Fin((ranks[n] - ranks[n + 1]) as u64), d, case);
            c.check("join_equals_meet", p.join_codim_chain.get(n) == p.meet_chain.get(n), d, case);
            let a_sum: ExtNat = (0..n).map(|i| p.meet_chain.get(i)).sum();
            let r_sum: ExtNat = (0..n).map(|i| p.join_codim_chain.get(i)).sum();
            c.check("chain_sums", p.kernel_chain.get(n) == a_sum && p.range_codim_chain.get(n) == r_sum, d, case);
        }
        c.check("profile_consistency", p.is_self_consistent() && p.is_monotone(), d, case);
        let nu = matrix_chains(&m).fitting_index;
        c.check("fitting_index", rep.fitting_index == Fin(nu as u64), d, case);
        c.check("dis_matches_join_chain", rep.dis == p.join_codim_chain.stabilization_point(), d, case);
        for k in 2..=3 {
            c.check("power_profile", power_profile(&p, k as u32) == matrix_profile(&pows[k]), d, case);
        }
    });
    let mut c = Checker::new(Suite::Chains);
    for (name, e) in catalog() {
        let case = || format!("{name} at 0");
        let Some(p) = c.ok("catalog_profile", expr_profile(&e, &Point::zero()), expr_size(&e), case) else { continue };
        c.check("catalog_profile", p.is_self_consistent() && p.is_monotone(), expr_size(&e), case);
        for n in 0..=2 * e.matrix_dim() + 4 {
            // a_{n+1} − a_n = c_n and r_{n+1} − r_n = b_n wherever the difference is defined
            let step_ok = |s: &EvAffineSeq, d: &EvAffineSeq| s.get(n + 1).checked_sub(s.get(n)).is_none_or(|x| x == d.get(n));
            let ok = step_ok(&p.kernel_chain, &p.meet_chain) && step_ok(&p.range_codim_chain, &p.join_codim_chain);
            c.check("catalog_chain_sums", ok, expr_size(&e), case);
        }
    }
    out.merge(c.out);
    out
}

// ---------------------------------------------------------------------------
// gkd / Drazin / core and quasi-nilpotent part oracle

fn gkd_suite(cfg: &VerifyConfig) -> VerifyOutcome {
    per_case(Suite::Gkd, cfg.cases, |c, i| {
        let m = case_matrix(cfg.seed, i);
        let d = m.rows();
        let case = || format!("case {i}: {m}");
        let e = OperatorExpr::single(Atom::FiniteMatrix(m.clone()));
        let zero = Point::zero();
        if let Some(g) = c.ok("fitting_direct_sum", canonical_gkd(&e, &zero), d, case) {
            let s = &g.splits[0];
            let sum = linalg::subspace_sum(&s.m_basis, &s.n_basis).expect("same ambient");
            c.check("fitting_direct_sum", s.m_basis.dim() + s.n_basis.dim() == d && sum.dim() == d, d, case);
            let core_ok = s.m_basis.dim() == 0
                || linalg::restrict(&m, &s.m_basis).ok().and_then(|a| a.inverse()).is_some();
            c.check("core_invertible", core_ok, d, case);
            let h0_ok = if s.n_basis.dim() == 0 {
                s.fitting_index == 0
            } else {
                linalg::restrict(&m, &s.n_basis).is_ok_and(|b| {
                    let ch = matrix_chains(&b);
                    ch.nilpotent && ch.fitting_index == s.fitting_index
                })
            };
            c.check("h0_nilpotent_degree", h0_ok, d, case);
            let (h0, core) = structure::h0_and_core(&m);
            c.check("h0_core_match", h0 == s.n_basis && core == s.m_basis, d, case);
        }
        let dz = drazin_inverse(&m);
        c.check("drazin_axioms", drazin_axioms_hold(&m, &dz), d, case);
        if let Some(s) = c.ok("core_h0_oracle", alpha_beta_pq(&e, &zero), d, case) {
            c.check("core_h0_oracle", structure::rema1_oracle(&m) == (s.alpha, s.beta), d, case);
        }
        // a non-real point exercises the real 2n-dimensional form
        let off = Point::new(rat(1, 2), rat(1, 3));
        if let Some(g) = c.ok("realified_split", canonical_gkd(&e, &off), d, case) {
            let s = &g.splits[0];
            c.check("realified_split", s.realified && s.m_basis.dim() + s.n_basis.dim() == 2 * d, d, case);
        }

        let (m2, a) = invariant_pair(&mut case_rng(cfg.seed, SUBSPACE_STREAM, i));
        let d2 = m2.rows();
        let case2 = || format!("case {i}: {m2} on {:?}", a.vectors());
        if let Some(t) = c.ok("invariant_subspace_index", linalg::restrict(&m2, &a), d2, case2) {
            let whole = index(&OperatorExpr::single(Atom::FiniteMatrix(m2.clone())), &zero);
            let part_expr = OperatorExpr::single(Atom::FiniteMatrix(t));
            let part = classify(&part_expr, &zero);
            let ok = match (whole, part) {
                (Ok(w), Ok(r)) => w == r.index() && w == ExtIndex::Fin(0) && r.flags.pseudo_b_fredholm,
                _ => false,
            };
            c.check("invariant_subspace_index", ok, d2, case2);
        }
    })
}

// ---------------------------------------------------------------------------
// index laws

fn matrix_atom_positions(e: &OperatorExpr) -> Vec<usize> {
    e.atoms().iter().enumerate().filter(|(_, a)| a.as_matrix().is_some()).map(|(i, _)| i).collect()
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1usize << items.len()).map(|mask| items.iter().enumerate().filter(|(b, _)| (mask >> b) & 1 == 1).map(|(_, &x)| x).collect()).collect()
}

/// Checks shared by catalog and random expressions at one point.
fn index_law_checks(c: &mut Checker, e: &OperatorExpr, lambda: &Point, max_power: u32, case: &dyn Fn() -> String) {
    let size = expr_size(e);
    let Some(rec) = c.ok("classify", classify(e, lambda), size, case) else { return };
    c.check("lattice", check_lattice(&rec).is_empty(), size, case);
    let f = &rec.flags;
    let ind = rec.index();
    c.check(
        "pbf_iff_integer_index",
        f.pseudo_b_fredholm == ((f.upper_pseudo_semi_b_fredholm || f.lower_pseudo_semi_b_fredholm) && ind.is_integer()),
        size,
        case,
    );
    let s = &rec.summary;
    let relation = (!s.p.is_finite() || s.alpha <= s.beta)
        && (!s.q.is_finite() || s.alpha >= s.beta)
        && (!(s.p.is_finite() && s.q.is_finite()) || (s.p == s.q && s.alpha == s.beta));
    c.check("relation_remark", relation, size, case);

    // powers
    if let Ok(p) = expr_profile(e, lambda) {
        if lambda.is_zero() {
            for k in 1..=max_power {
                let ek = e.power(k);
                c.check("power_profile", expr_profile(&ek, lambda).ok() == Some(power_profile(&p, k)), size, case);
                if ind.is_defined() {
                    c.check("power_law", index(&ek, lambda).ok() == Some(ind.scale(k as i64)), size, case);
                }
            }
        }
        c.check("b_fredholm_chain_definition", f.b_fredholm == b_fredholm_chain(&p), size, case);
        if f.semi_regular {
            let a1 = p.alpha();
            c.check("semi_regular_kernel_powers", (0..8u64).all(|n| p.kernel_chain.get(n as usize) == a1 * n), size, case);
        }
        let no_qnil = e.atoms().iter().all(|a| !matches!(a, Atom::QNilShift | Atom::QNilShiftDual));
        if no_qnil || !lambda.is_zero() {
            let nil = canonical_gkd(e, lambda).ok().and_then(|g| g.n_profile().ok()).is_some_and(|n| n.nilpotency_degree.is_finite());
            c.check(
                "semi_b_fredholm_decomposition",
                f.upper_semi_b_fredholm == (f.upper_pseudo_semi_b_fredholm && nil) && f.lower_semi_b_fredholm == (f.lower_pseudo_semi_b_fredholm && nil),
                size,
                case,
            );
            if f.b_fredholm {
                let (_, _, ind_n) = restriction_profile(&p, p.horizon() + 1);
                c.check("stabilized_restriction_index", ind_n == ind, size, case);
            }
        }
    }

    if f.pseudo_fredholm {
        let positions = matrix_atom_positions(e);
        for moved in subsets(&positions) {
            c.check("regrouping", index_with_regrouping(e, lambda, &moved).ok() == Some(ind), size, case);
        }
    }
}

fn index_laws_suite(cfg: &VerifyConfig) -> VerifyOutcome {
    let cat = catalog();
    let zero = Point::zero();
    let mut c = Checker::new(Suite::IndexLaws);
    for (name, e) in &cat {
        index_law_checks(&mut c, e, &zero, 4, &|| format!("{name} at 0"));
        for (other, f) in &cat {
            let case = || format!("{name} ⊕ {other} at 0");
            let (Ok(a), Ok(b), Ok(ab)) = (index(e, &zero), index(f, &zero), index(&e.direct_sum(f), &zero)) else {
                c.check("additivity", false, expr_size(e) + expr_size(f), case);
                continue;
            };
            c.check("additivity", a.checked_add(b) == Some(ab), expr_size(e) + expr_size(f), case);
        }
    }
    let mut out = c.out;
    out.merge(per_case(Suite::IndexLaws, cfg.cases, |c, i| {
        let m = case_matrix(cfg.seed, i);
        let d = m.rows();
        let case = || format!("case {i}: {m}");
        let e = OperatorExpr::single(Atom::FiniteMatrix(m.clone()));
        if let Some(r) = c.ok("finite_dim_degeneracy", classify(&e, &Point::zero()), d, case) {
            c.check(
                "finite_dim_degeneracy",
                r.flags.b_fredholm && r.flags.gen_drazin && r.index() == ExtIndex::Fin(0),
                d,
                case,
            );
            c.check("lattice", check_lattice(&r).is_empty(), d, case);
        }

        let mut rng = case_rng(cfg.seed, EXPR_STREAM, i);
        let re = random_expr(&mut rng);
        let lambda = if rng.gen_bool(0.5) { Point::zero() } else { random_point(&mut rng) };
        let rcase = || format!("case {i}: {re} at {lambda}");
        index_law_checks(c, &re, &lambda, 3, &rcase);
        let (name, other) = &cat[i % cat.len()];
        let sum = re.direct_sum(other);
        if let (Ok(a), Ok(b), Ok(ab)) = (index(&re, &lambda), index(other, &lambda), index(&sum, &lambda)) {
            c.check("additivity", a.checked_add(b) == Some(ab), expr_size(&sum), || {
                format!("case {i}: {re} ⊕ {name} at {lambda}")
            });
        }
    }));
    out
}

// ---------------------------------------------------------------------------
// duality

fn dual_checks(c: &mut Checker, e: &OperatorExpr, lambda: &Point, case: &dyn Fn() -> String) {
    let size = expr_size(e);
    let (Some(a), Some(b)) = (
        c.ok("classify", classify(e, lambda), size, case),
        c.ok("classify", classify(&e.dual(), lambda), size, case),
    ) else {
        return;
    };
    if !a.flags.pseudo_fredholm {
        c.check("dual_not_pseudo_fredholm", !b.flags.pseudo_fredholm, size, case);
        return;
    }
    let (s, t) = (&a.summary, &b.summary);
    c.check("alpha_beta_swap", s.alpha == t.beta && s.beta == t.alpha, size, case);
    c.check("p_q_swap", s.p == t.q && s.q == t.p, size, case);
    c.check("index_negation", s.index == t.index.neg(), size, case);
    c.check("flag_mirror", dual_mirror_holds(&a, &b), size, case);
}

fn duality_suite(cfg: &VerifyConfig) -> VerifyOutcome {
    let mut c = Checker::new(Suite::Duality);
    for (name, e) in catalog() {
        dual_checks(&mut c, &e, &Point::zero(), &|| format!("{name} at 0"));
        c.check("dual_involution", e.dual().dual() == e, expr_size(&e), || name.to_string());
    }
    let mut out = c.out;
    out.merge(per_case(Suite::Duality, cfg.cases, |c, i| {
        let m = case_matrix(cfg.seed, i);
        let d = m.rows();
        let case = || format!("case {i}: {m}");
        let p = matrix_profile(&m);
        let q = matrix_profile(&m.transpose());
        c.check("transpose_chain_mirror", q.kernel_chain == p.range_codim_chain && q.meet_chain == p.join_codim_chain, d, case);
        c.check("transpose_chain_mirror", q.range_codim_chain == p.kernel_chain && q.join_codim_chain == p.meet_chain, d, case);
        let mut rng = case_rng(cfg.seed, EXPR_STREAM, i);
        let re = random_expr(&mut rng);
        let lambda = random_point(&mut rng);
        dual_checks(c, &re, &lambda, &|| format!("case {i}: {re} at {lambda}"));
    }));
    out
}

// ---------------------------------------------------------------------------
// punctured neighbourhoods

fn punctured_suite(_cfg: &VerifyConfig) -> VerifyOutcome {
    let mut c = Checker::new(Suite::Punctured);
    for (name, e) in catalog() {
        let size = expr_size(&e);
        let Some(at0) = c.ok("classify", classify(&e, &Point::zero()), size, || format!("{name} at 0")) else { continue };
        for l in punctured_points() {
            let case = || format!("{name} at {l}");
            let Some(r) = c.ok("classify", classify(&e, &l), size, case) else { continue };
            c.check("alpha_constant", r.summary.alpha == at0.summary.alpha, size, case);
            c.check("beta_constant", r.summary.beta == at0.summary.beta, size, case);
            c.check("index_constant", r.index() == at0.index(), size, case);
        }
    }
    c.out
}

// ---------------------------------------------------------------------------
// spectra

fn scan_checks(c: &mut Checker, name: &str, e: &OperatorExpr, g: &GridSpec) -> Option<crate::spectra::SpectrumScan> {
    let size = expr_size(e);
    let s = c.ok("scan", scan(e, g), size, || format!("{name} scan"))?;
    for p in &s.points {
        let case = || format!("{name} at {}", p.lambda);
        let r = &p.record;
        c.check("lattice", check_lattice(r).is_empty(), size, case);
        let m = |n: SpectrumName| n.contains(r);
        c.check("union_identity", m(SpectrumName::Pbf) == (m(SpectrumName::Upbf) || m(SpectrumName::Lpbf)), size, case);
        c.check("union_identity", m(SpectrumName::Pbw) == (m(SpectrumName::Upbw) || m(SpectrumName::Lpbw)), size, case);
    }
    for which in SpectrumName::ALL {
        let comps = component_index_report(e, &s, which);
        let ok = comps.iter().all(|k| k.index != ComponentIndex::NonConstant);
        c.check("component_index_constant", ok, size, || format!("{name}, complement of σ_{which}"));
    }
    Some(s)
}

fn golden_checks(c: &mut Checker) {
    let e = OperatorExpr::single(Atom::RightShift);
    let g = GridSpec::new(int(-2), int(2), int(-2), int(2), 33, 33).expect("valid grid");
    let Some(s) = scan_checks(c, "R", &e, &g) else { return };
    let inner = rat(81, 100);
    let outer = rat(121, 100);
    for p in &s.points {
        let case = || format!("R at {}", p.lambda);
        let n = p.lambda.norm_sq();
        if n < inner {
            c.check("golden_inside", p.record.flags.fredholm && p.record.index() == ExtIndex::Fin(-1), 1, case);
        } else if n > outer {
            c.check("golden_outside", p.record.flags.invertible, 1, case);
        }
    }
    for l in [Point::real(int(1)), Point::new(int(0), int(1)), Point::new(rat(3, 5), rat(4, 5))] {
        let ok = classify(&e, &l).is_ok_and(|r| !r.flags.pseudo_fredholm);
        c.check("golden_unit_circle", ok, 1, || format!("R at {l}"));
    }
    let comps = component_index_report(&e, &s, SpectrumName::Upbf);
    let ok = comps.len() == 2
        && comps.iter().any(|k| k.index == ComponentIndex::Constant(ExtIndex::Fin(-1)))
        && comps.iter().any(|k| k.index == ComponentIndex::Constant(ExtIndex::Fin(0)));
    c.check("golden_components", ok, 1, || "R, complement of σ_upbf".into());
    let again = scan(&e, &g);
    let det = match (to_csv(&s), again.and_then(|t| to_csv(&t))) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    c.check("scan_determinism", det, 1, || "R scan".into());
}

fn spectra_suite(cfg: &VerifyConfig) -> VerifyOutcome {
    let mut c = Checker::new(Suite::Spectra);
    golden_checks(&mut c);
    let g = GridSpec::new(int(-2), int(2), int(-2), int(2), 17, 17).expect("valid grid");
    let coarse = GridSpec::new(int(-2), int(2), int(-2), int(2), 9, 9).expect("valid grid");
    let results: Vec<VerifyOutcome> = catalog()
        .par_iter()
        .map(|(name, e)| {
            let mut c = Checker::new(Suite::Spectra);
            if let Some(fine) = scan_checks(&mut c, name, e, &g) {
                if let Some(s) = c.ok("refinement_consistent", scan(e, &coarse), expr_size(e), || format!("{name} scan")) {
                    c.check("refinement_consistent", crate::spectra::refinement_consistent(&s, &fine), expr_size(e), || name.to_string());
                }
            }
            c.out
        })
        .collect();
    let mut out = c.out;
    for r in results {
        out.merge(r);
    }
    let random = cfg.cases.min(24);
    out.merge(per_case(Suite::Spectra, random, |c, i| {
        let e = random_expr(&mut case_rng(cfg.seed, EXPR_STREAM, i));
        scan_checks(c, &format!("case {i}: {e}"), &e, &coarse);
    }));
    out
}
