//! Acceptance gate. Each criterion is re-derived here from independent rank
//! and subspace oracles, and the timed criteria also run the shipped binary.
//! One PASS/FAIL line is printed per criterion; run with `--nocapture` to see
//! them.

use std::process::Command;
use std::time::{Duration, Instant};

use pbfred::catalog::{catalog, jordan};
use pbfred::classify::{check_lattice, classify, ClassificationRecord};
use pbfred::linalg::rational::rat;
use pbfred::linalg::{self, ExactMatrix};
use pbfred::model::{matrix_profile, ExtIndex, ExtNat, Fin, OperatorExpr, Point, Atom};
use pbfred::spectra::{component_index_report, scan, ComponentIndex, GridSpec, SpectrumName};
use pbfred::structure::{alpha_beta_pq, canonical_gkd, chains, index, index_with_regrouping, rema1_oracle, restriction_profile};
use pbfred::verify::case_matrix;

const SEED: u64 = 42;
const CASES: usize = 500;

struct Gate {
    lines: Vec<String>,
    failed: usize,
}

impl Gate {
    fn record(&mut self, id: u32, what: &str, problems: &[String], detail: String) {
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("{status} [{id}] {what}: {detail}");
        if let Some(p) = problems.first() {
            line.push_str(&format!(" (first problem: {p}; {} total)", problems.len()));
            self.failed += 1;
        }
        println!("{line}");
        self.lines.push(line);
    }
}

struct BinRun {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn run_verify(args: &[&str]) -> BinRun {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pbfred")).arg("verify").args(args).output().expect("binary runs");
    BinRun { code: out.status.code().unwrap_or(-1), stdout: String::from_utf8(out.stdout).unwrap(), elapsed: start.elapsed() }
}

fn suite_run(problems: &mut Vec<String>, suite: &str, cases: usize, limit: Option<Duration>) -> BinRun {
    let r = run_verify(&["--suite", suite, "--cases", &cases.to_string(), "--seed", &SEED.to_string()]);
    if r.code != 0 {
        problems.push(format!("verify --suite {suite} exited {}", r.code));
    }
    if let Some(l) = limit {
        if r.elapsed >= l {
            problems.push(format!("verify --suite {suite} took {:?}, limit {l:?}", r.elapsed));
        }
    }
    r
}

fn ranks_of_powers(m: &ExactMatrix, upto: usize) -> Vec<usize> {
    let mut out = vec![m.rows()];
    let mut p = ExactMatrix::identity(m.rows());
    for _ in 0..upto {
        p = &p * m;
        out.push(linalg::rank(&p));
    }
    out
}

fn fitting_index(ranks: &[usize]) -> usize {
    (0..ranks.len() - 1).find(|&n| ranks[n] == ranks[n + 1]).expect("ranks stabilize within the dimension")
}

fn fin(n: usize) -> ExtNat {
    Fin(n as u64)
}

fn zero() -> Point {
    Point::zero()
}

fn criterion_1(g: &mut Gate) {
    let mut problems = Vec::new();
    let mut checked = 0usize;
    for i in 0..CASES {
        let m = case_matrix(SEED, i);
        let d = m.rows();
        let r = ranks_of_powers(&m, d + 4);
        let p = matrix_profile(&m);
        let k = chains(&p).k;
        for n in 0..=d + 2 {
            // T_[n] acts on R(T^n); its kernel is R(T^n) ∩ N(T) and its range R(T^{n+1})
            let alpha = |n: usize| r[n] - r[n + 1];
            let beta = |n: usize| r[n] - r[n + 1];
            let kn = alpha(n) - alpha(n + 1);
            let (a, b, ind) = restriction_profile(&p, n);
            let ok = a == fin(alpha(n))
                && b == fin(beta(n))
                && k.get(n) == fin(kn)
                && alpha(n) - alpha(n + 1) == beta(n) - beta(n + 1)
                && kn <= alpha(n).min(beta(n))
                && ind == ExtIndex::Fin(0);
            if !ok {
                problems.push(format!("matrix #{i} at n = {n}"));
            }
            checked += 1;
        }
    }
    let run = suite_run(&mut problems, "chains", CASES, Some(Duration::from_secs(10)));
    g.record(1, "chain identities", &problems, format!("{checked} (matrix, n) pairs exact; verify chains in {:?} (< 10 s)", run.elapsed));
}

fn criterion_2(g: &mut Gate) {
    let mut problems = Vec::new();
    for i in 0..CASES {
        let m = case_matrix(SEED, i);
        let d = m.rows();
        let nu = fitting_index(&ranks_of_powers(&m, d + 1));
        let e = OperatorExpr::single(Atom::matrix(m.clone()).unwrap());
        let gkd = match canonical_gkd(&e, &zero()) {
            Ok(g) => g,
            Err(err) => {
                problems.push(format!("matrix #{i}: {err}"));
                continue;
            }
        };
        let split = &gkd.splits[0];
        let whole = linalg::subspace_sum(&split.m_basis, &split.n_basis).unwrap();
        let direct = split.m_basis.dim() + split.n_basis.dim() == d && whole.dim() == d;
        let core = linalg::restrict(&m, &split.m_basis).unwrap();
        let nil = linalg::restrict(&m, &split.n_basis).unwrap();
        let invertible = linalg::rank(&core) == core.rows();
        let degree = nil.pow(nu as u32).is_zero() && (nu == 0 || !nil.pow(nu as u32 - 1).is_zero());
        let dz = pbfred::structure::drazin_inverse(&m);
        let axioms = &dz * &m == &m * &dz && &(&dz * &m) * &dz == dz && &m.pow(nu as u32 + 1) * &dz == m.pow(nu as u32);
        if !(direct && invertible && degree && split.fitting_index == nu && axioms) {
            problems.push(format!("matrix #{i}: direct {direct}, invertible {invertible}, degree {degree}, axioms {axioms}"));
        }
    }
    let run = suite_run(&mut problems, "gkd", CASES, None);
    g.record(2, "Fitting split and Drazin axioms", &problems, format!("{CASES} matrices exact; verify gkd in {:?}", run.elapsed));
}

fn criterion_3(g: &mut Gate) {
    let mut problems = Vec::new();
    for i in 0..CASES {
        let m = case_matrix(SEED, i);
        let d = m.rows();
        let md = m.pow(d as u32);
        let core = linalg::image_basis(&md);
        let h0 = linalg::kernel_basis(&md);
        let alpha = linalg::subspace_intersection(&core, &linalg::kernel_basis(&m)).unwrap().dim();
        let beta = d - linalg::subspace_sum(&linalg::image_basis(&m), &h0).unwrap().dim();
        let e = OperatorExpr::single(Atom::matrix(m.clone()).unwrap());
        let s = alpha_beta_pq(&e, &zero()).unwrap();
        if s.alpha != fin(alpha) || s.beta != fin(beta) || rema1_oracle(&m) != (fin(alpha), fin(beta)) {
            problems.push(format!("matrix #{i}: gkd ({}, {}) vs oracle ({alpha}, {beta})", s.alpha, s.beta));
        }
    }
    g.record(3, "core / quasi-nilpotent part oracle", &problems, format!("{CASES} matrices exact"));
}

fn criterion_4(g: &mut Gate) {
    let mut problems = Vec::new();
    let cat = catalog();
    let expected = [-1, 1, 0, -1, 0, 0, 0, 0, 1, -1, 1, -2];
    let mut checks = 0usize;
    for ((name, e), want) in cat.iter().zip(expected) {
        let ind = index(e, &zero()).unwrap();
        checks += 1;
        if ind != ExtIndex::Fin(want) {
            problems.push(format!("ind({name}) = {ind}, expected {want}"));
        }
        for k in 2..=4u32 {
            checks += 1;
            let got = index(&e.power(k), &zero()).unwrap();
            if got != ExtIndex::Fin(k as i64 * want) {
                problems.push(format!("ind({name}^{k}) = {got}"));
            }
        }
        for ((other, f), want_f) in cat.iter().zip(expected) {
            checks += 1;
            let got = index(&e.direct_sum(f), &zero()).unwrap();
            if got != ExtIndex::Fin(want + want_f) {
                problems.push(format!("ind({name} ⊕ {other}) = {got}"));
            }
        }
        // a nilpotent block may sit on either side of the decomposition
        let padded = e.direct_sum(&OperatorExpr::new(vec![jordan(3), Atom::QNilShift]).unwrap());
        let j = padded.atoms().len() - 2;
        checks += 1;
        let (a, b) = (index(&padded, &zero()).unwrap(), index_with_regrouping(&padded, &zero(), &[j]).unwrap());
        if a != b || a != ExtIndex::Fin(want) {
            problems.push(format!("regrouping J_3 in {name} ⊕ J_3 ⊕ QNilShift: {a} vs {b}"));
        }
        for (t, atom) in e.atoms().iter().enumerate() {
            if atom.as_matrix().is_some_and(|m| m.pow(m.rows() as u32).is_zero()) {
                checks += 1;
                let b = index_with_regrouping(e, &zero(), &[t]).unwrap();
                if b != ExtIndex::Fin(want) {
                    problems.push(format!("regrouping atom {t} of {name}: {b}"));
                }
            }
        }
    }
    let run = suite_run(&mut problems, "index-laws", CASES, None);
    g.record(4, "index laws on the catalog", &problems, format!("{checks} exact checks; verify index-laws in {:?}", run.elapsed));
}

fn criterion_5(g: &mut Gate) {
    let mut problems = Vec::new();
    for (name, e) in catalog() {
        let (s, t) = (alpha_beta_pq(&e, &zero()).unwrap(), alpha_beta_pq(&e.dual(), &zero()).unwrap());
        if s.alpha != t.beta || s.beta != t.alpha || s.p != t.q || s.q != t.p || s.index != t.index.neg() {
            problems.push(format!("{name}: {s:?} vs dual {t:?}"));
        }
    }
    for i in 0..200 {
        let m = case_matrix(SEED, i);
        let (p, q) = (matrix_profile(&m), matrix_profile(&m.transpose()));
        let ranks = ranks_of_powers(&m, m.rows() + 2);
        let t_ranks = ranks_of_powers(&m.transpose(), m.rows() + 2);
        let mirrored = q.kernel_chain == p.range_codim_chain && p.kernel_chain == q.range_codim_chain && q.meet_chain == p.join_codim_chain;
        if !mirrored || ranks != t_ranks {
            problems.push(format!("matrix #{i}: transpose chains do not mirror"));
        }
    }
    let run = suite_run(&mut problems, "duality", 200, None);
    g.record(5, "duality", &problems, format!("12 catalog pairs and 200 transposes exact; verify duality in {:?}", run.elapsed));
}

fn criterion_6(g: &mut Gate) {
    let mut problems = Vec::new();
    let offsets: Vec<Point> = [(1, 10, 0, 1), (-1, 10, 0, 1), (1, 100, 0, 1), (-1, 100, 0, 1), (0, 1, 1, 10), (0, 1, -1, 10), (0, 1, 1, 100), (0, 1, -1, 100)]
        .iter()
        .map(|&(a, b, c, d)| Point::new(rat(a, b), rat(c, d)))
        .chain([Point::new(rat(1, 20), rat(1, 20)), Point::new(rat(-1, 50), rat(3, 100))])
        .collect();
    let mut checked = 0;
    for (name, e) in catalog() {
        let at0 = alpha_beta_pq(&e, &zero()).unwrap();
        for l in &offsets {
            checked += 1;
            match alpha_beta_pq(&e, l) {
                Ok(s) if (s.alpha, s.beta, s.index) == (at0.alpha, at0.beta, at0.index) => {}
                other => problems.push(format!("{name} at {l}: {other:?} vs {at0:?}")),
            }
        }
    }
    let run = suite_run(&mut problems, "punctured", CASES, None);
    g.record(6, "punctured neighbourhood", &problems, format!("{checked} (operator, λ) pairs exact; verify punctured in {:?}", run.elapsed));
}

fn criterion_7(g: &mut Gate) -> Vec<ClassificationRecord> {
    let mut problems = Vec::new();
    let start = Instant::now();
    let r = OperatorExpr::single(Atom::RightShift);
    let grid = GridSpec::parse("-2,2,-2,2,33,33").unwrap();
    let s = scan(&r, &grid).unwrap();
    let (inside_bound, outside_bound) = (rat(81, 100), rat(121, 100));
    let (mut inside, mut outside) = (0, 0);
    for p in &s.points {
        let n = p.lambda.norm_sq();
        let f = &p.record.flags;
        if n < inside_bound {
            inside += 1;
            if !f.fredholm || p.record.index() != ExtIndex::Fin(-1) {
                problems.push(format!("{} inside the disc", p.lambda));
            }
        } else if n > outside_bound {
            outside += 1;
            if !f.invertible {
                problems.push(format!("{} outside the disc", p.lambda));
            }
        }
        let member = |w: SpectrumName| w.contains(&p.record);
        use SpectrumName::*;
        if member(Pbf) != (member(Upbf) || member(Lpbf)) || member(Pbw) != (member(Upbw) || member(Lpbw)) {
            problems.push(format!("union identity at {}", p.lambda));
        }
    }
    for (a, b) in [(1, 0), (0, 1), (3, 5)] {
        let l = if a == 3 { Point::new(rat(3, 5), rat(4, 5)) } else { Point::new(rat(a, 1), rat(b, 1)) };
        if classify(&r, &l).unwrap().flags.pseudo_fredholm {
            problems.push(format!("{l} on the unit circle is pseudo-Fredholm"));
        }
    }
    let comps = component_index_report(&r, &s, SpectrumName::Pbf);
    if comps.iter().any(|c| c.index == ComponentIndex::NonConstant) {
        problems.push("a resolvent component has non-constant index".into());
    }
    let in_process = start.elapsed();
    if in_process >= Duration::from_secs(30) {
        problems.push(format!("golden scan took {in_process:?}"));
    }
    let run = suite_run(&mut problems, "spectra", CASES, Some(Duration::from_secs(30)));
    g.record(
        7,
        "golden scans of R",
        &problems,
        format!("{inside} inside, {outside} outside, {} components; scan {in_process:?}, verify spectra {:?} (< 30 s)", comps.len(), run.elapsed),
    );
    s.points.into_iter().map(|p| p.record).collect()
}

fn criterion_8(g: &mut Gate, golden: Vec<ClassificationRecord>) {
    let mut problems = Vec::new();
    let mut records = golden;
    let grid = GridSpec::parse("-2,2,-2,2,17,17").unwrap();
    for (_name, e) in catalog() {
        records.extend(scan(&e, &grid).unwrap().points.into_iter().map(|p| p.record));
    }
    for i in 0..CASES {
        let e = OperatorExpr::single(Atom::matrix(case_matrix(SEED, i)).unwrap());
        for l in [zero(), Point::real(rat(1, 1)), Point::new(rat(1, 2), rat(1, 3))] {
            records.push(classify(&e, &l).unwrap());
        }
    }
    for (n, rec) in records.iter().enumerate() {
        let v = check_lattice(rec);
        if !v.is_empty() {
            problems.push(format!("record #{n}: {}", v.join(", ")));
        }
        let f = &rec.flags;
        let semi = f.upper_pseudo_semi_b_fredholm || f.lower_pseudo_semi_b_fredholm;
        let equivalences = f.pseudo_b_fredholm == (f.upper_pseudo_semi_b_fredholm && f.lower_pseudo_semi_b_fredholm)
            && f.pseudo_b_weyl == (f.upper_pseudo_semi_b_weyl && f.lower_pseudo_semi_b_weyl)
            && f.pseudo_b_fredholm == (semi && rec.index().is_integer());
        if !equivalences {
            problems.push(format!("record #{n}: pseudo B-Fredholm equivalences"));
        }
    }
    g.record(8, "classification lattice", &problems, format!("{} records without violations", records.len()));
}

fn criterion_9(g: &mut Gate) {
    let mut problems = Vec::new();
    let limit = Some(Duration::from_secs(60));
    let first = suite_run(&mut problems, "all", CASES, limit);
    let second = suite_run(&mut problems, "all", CASES, limit);
    if first.stdout != second.stdout {
        problems.push("outputs of two runs differ".into());
    }
    let summary = first.stdout.lines().last().unwrap_or("").to_string();
    g.record(9, "full verify run", &problems, format!("{summary}; runs took {:?} and {:?} (< 60 s), byte-identical", first.elapsed, second.elapsed));
}

#[test]
fn acceptance_criteria() {
    let mut g = Gate { lines: Vec::new(), failed: 0 };
    criterion_1(&mut g);
    criterion_2(&mut g);
    criterion_3(&mut g);
    criterion_4(&mut g);
    criterion_5(&mut g);
    criterion_6(&mut g);
    let golden = criterion_7(&mut g);
    criterion_8(&mut g, golden);
    criterion_9(&mut g);
    assert_eq!(g.failed, 0, "failing criteria:\n{}", g.lines.iter().filter(|l| l.starts_with("FAIL")).cloned().collect::<Vec<_>>().join("\n"));
}
