//! Membership of `T − λI` in the Fredholm-type operator classes and the
//! implication lattice that ties them together.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::extnat::{ExtIndex, Fin, Inf};
use crate::model::{OperatorExpr, Point, StructuralProfile};
use crate::structure::{summary_or_undefined, StructuralSummary};

macro_rules! flags {
    ($($name:ident),* $(,)?) => {
        #[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub struct Flags {
            $(pub $name: bool,)*
        }

        impl Flags {
            pub const NAMES: &'static [&'static str] = &[$(stringify!($name)),*];

            pub fn values(&self) -> Vec<bool> {
                vec![$(self.$name),*]
            }

            pub fn get(&self, name: &str) -> Option<bool> {
                match name {
                    $(stringify!($name) => Some(self.$name),)*
                    _ => None,
                }
            }
        }
    };
}

flags!(
    invertible,
    bounded_below,
    surjective,
    upper_semi_fredholm,
    lower_semi_fredholm,
    fredholm,
    weyl,
    upper_semi_weyl,
    lower_semi_weyl,
    semi_regular,
    quasi_nilpotent,
    nilpotent,
    b_fredholm,
    upper_semi_b_fredholm,
    lower_semi_b_fredholm,
    pseudo_fredholm,
    upper_pseudo_semi_b_fredholm,
    lower_pseudo_semi_b_fredholm,
    pseudo_b_fredholm,
    upper_pseudo_semi_b_weyl,
    lower_pseudo_semi_b_weyl,
    pseudo_b_weyl,
    left_gen_drazin,
    right_gen_drazin,
    gen_drazin,
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassificationRecord {
    #[serde(flatten)]
    pub flags: Flags,
    #[serde(flatten)]
    pub summary: StructuralSummary,
}

impl ClassificationRecord {
    pub fn index(&self) -> ExtIndex {
        self.summary.index
    }
}

/// Whether some `R(Sⁿ)` is closed with the restriction `S_[n]` upper
/// semi-Fredholm: `R(Sⁿ⁺¹)` closed and `dim R(Sⁿ) ∩ N(S)` finite.
pub fn upper_semi_b_fredholm_chain(p: &StructuralProfile) -> bool {
    (0..=p.horizon() + 1).any(|n| p.range_closed.get(n) && p.range_closed.get(n + 1) && p.meet_chain.get(n).is_finite())
}

/// Whether some `R(Sⁿ)` is closed with `S_[n]` lower semi-Fredholm:
/// `codim (R(S) + N(Sⁿ))` finite.
pub fn lower_semi_b_fredholm_chain(p: &StructuralProfile) -> bool {
    (0..=p.horizon() + 1).any(|n| p.range_closed.get(n) && p.join_codim_chain.get(n).is_finite())
}

/// The classical B-Fredholm definition on chains: some `R(Sⁿ)` closed with
/// `S_[n]` Fredholm.
pub fn b_fredholm_chain(p: &StructuralProfile) -> bool {
    (0..=p.horizon() + 1).any(|n| {
        p.range_closed.get(n) && p.range_closed.get(n + 1) && p.meet_chain.get(n).is_finite() && p.join_codim_chain.get(n).is_finite()
    })
}

pub fn classify(e: &OperatorExpr, lambda: &Point) -> Result<ClassificationRecord> {
    let (full, gkd, summary) = summary_or_undefined(e, lambda)?;
    let n_part_nilpotent = match &gkd {
        Some(g) => g.n_profile()?.nilpotency_degree.is_finite(),
        None => false,
    };
    let rec = ClassificationRecord { flags: derive_flags(&full, &summary, n_part_nilpotent), summary };
    let violations = check_lattice(&rec);
    if !violations.is_empty() {
        return Err(Error::Internal(format!("classification of {e} at λ = {lambda} violates: {}", violations.join("; "))));
    }
    Ok(rec)
}

fn derive_flags(full: &StructuralProfile, s: &StructuralSummary, n_part_nilpotent: bool) -> Flags {
    let a1 = full.alpha();
    let r1 = full.beta();
    let closed1 = full.range_closed.get(1);
    let plain_index = a1.index_minus(r1);

    let upper_semi_fredholm = closed1 && a1.is_finite();
    let lower_semi_fredholm = r1.is_finite();
    let fredholm = upper_semi_fredholm && lower_semi_fredholm;
    let pf = full.is_pseudofredholm_point;
    let upsbf = pf && s.alpha.is_finite();
    let lpsbf = pf && s.beta.is_finite();
    let pbf = upsbf && lpsbf;
    let gen_drazin = pf && s.p == s.q && s.p.is_finite();

    Flags {
        invertible: a1 == Fin(0) && r1 == Fin(0),
        bounded_below: a1 == Fin(0) && closed1,
        surjective: r1 == Fin(0),
        upper_semi_fredholm,
        lower_semi_fredholm,
        fredholm,
        weyl: fredholm && plain_index == ExtIndex::Fin(0),
        upper_semi_weyl: upper_semi_fredholm && plain_index.non_positive(),
        lower_semi_weyl: lower_semi_fredholm && plain_index.non_negative(),
        semi_regular: closed1 && s.dis == Fin(0),
        quasi_nilpotent: full.is_quasinilpotent,
        nilpotent: full.nilpotency_degree.is_finite(),
        b_fredholm: pbf && n_part_nilpotent,
        upper_semi_b_fredholm: upper_semi_b_fredholm_chain(full),
        lower_semi_b_fredholm: lower_semi_b_fredholm_chain(full),
        pseudo_fredholm: pf,
        upper_pseudo_semi_b_fredholm: upsbf,
        lower_pseudo_semi_b_fredholm: lpsbf,
        pseudo_b_fredholm: pbf,
        upper_pseudo_semi_b_weyl: upsbf && s.index.non_positive(),
        lower_pseudo_semi_b_weyl: lpsbf && s.index.non_negative(),
        pseudo_b_weyl: pbf && s.index == ExtIndex::Fin(0),
        left_gen_drazin: pf && s.p == Fin(0),
        right_gen_drazin: pf && s.q == Fin(0),
        gen_drazin,
    }
}

/// Every implication-lattice rule broken by `rec`, by name.
pub fn check_lattice(rec: &ClassificationRecord) -> Vec<String> {
    let f = &rec.flags;
    let s = &rec.summary;
    let ind = s.index;
    let mut out = Vec::new();
    let mut rule = |ok: bool, name: &str| {
        if !ok {
            out.push(name.to_string());
        }
    };
    let implies = |a: bool, b: bool| !a || b;

    rule(implies(f.invertible, f.bounded_below && f.surjective), "invertible ⇒ bounded below ∧ surjective");
    rule(implies(f.bounded_below && f.surjective, f.invertible), "bounded below ∧ surjective ⇒ invertible");
    rule(implies(f.bounded_below, f.upper_semi_fredholm), "bounded below ⇒ upper semi-Fredholm");
    rule(implies(f.surjective, f.lower_semi_fredholm), "surjective ⇒ lower semi-Fredholm");
    rule(f.fredholm == (f.upper_semi_fredholm && f.lower_semi_fredholm), "Fredholm ⇔ upper ∧ lower semi-Fredholm");
    rule(implies(f.invertible, f.fredholm && f.weyl && f.semi_regular && f.gen_drazin && f.pseudo_b_weyl), "invertible ⇒ Weyl, semi-regular, generalized Drazin, pseudo B-Weyl");

    // semi-Fredholm operators carry their usual index
    rule(implies(f.upper_semi_fredholm || f.lower_semi_fredholm, ind.is_defined()), "semi-Fredholm ⇒ index defined");
    rule(implies(f.weyl, f.fredholm && ind == ExtIndex::Fin(0)), "Weyl ⇒ Fredholm of index 0");
    rule(f.weyl == (f.upper_semi_weyl && f.lower_semi_weyl), "Weyl ⇔ upper ∧ lower semi-Weyl");
    rule(f.upper_semi_weyl == (f.upper_semi_fredholm && ind.non_positive()), "upper semi-Weyl ⇔ upper semi-Fredholm ∧ ind ≤ 0");
    rule(f.lower_semi_weyl == (f.lower_semi_fredholm && ind.non_negative()), "lower semi-Weyl ⇔ lower semi-Fredholm ∧ ind ≥ 0");

    rule(implies(f.upper_semi_fredholm, f.upper_pseudo_semi_b_fredholm), "upper semi-Fredholm ⇒ upper pseudo semi-B-Fredholm");
    rule(implies(f.lower_semi_fredholm, f.lower_pseudo_semi_b_fredholm), "lower semi-Fredholm ⇒ lower pseudo semi-B-Fredholm");
    rule(implies(f.upper_semi_fredholm, f.upper_semi_b_fredholm), "upper semi-Fredholm ⇒ upper semi-B-Fredholm");
    rule(implies(f.lower_semi_fredholm, f.lower_semi_b_fredholm), "lower semi-Fredholm ⇒ lower semi-B-Fredholm");
    rule(implies(f.fredholm, f.b_fredholm), "Fredholm ⇒ B-Fredholm");
    rule(implies(f.b_fredholm, f.pseudo_b_fredholm), "B-Fredholm ⇒ pseudo B-Fredholm");
    rule(implies(f.b_fredholm, f.upper_semi_b_fredholm && f.lower_semi_b_fredholm), "B-Fredholm ⇒ upper ∧ lower semi-B-Fredholm");
    rule(implies(f.upper_semi_b_fredholm && f.pseudo_fredholm, f.upper_pseudo_semi_b_fredholm), "upper semi-B-Fredholm ⇒ upper pseudo semi-B-Fredholm");
    rule(implies(f.lower_semi_b_fredholm && f.pseudo_fredholm, f.lower_pseudo_semi_b_fredholm), "lower semi-B-Fredholm ⇒ lower pseudo semi-B-Fredholm");
    rule(implies(f.semi_regular, f.pseudo_fredholm && s.dis == Fin(0)), "semi-regular ⇒ pseudo-Fredholm with dis = 0");

    rule(implies(f.nilpotent, f.quasi_nilpotent && f.b_fredholm), "nilpotent ⇒ quasi-nilpotent ∧ B-Fredholm");
    rule(
        implies(
            f.quasi_nilpotent,
            f.pseudo_b_fredholm && ind == ExtIndex::Fin(0) && s.alpha == Fin(0) && s.beta == Fin(0) && f.gen_drazin,
        ),
        "quasi-nilpotent ⇒ pseudo B-Fredholm of index 0 and generalized Drazin",
    );

    let pseudo_semi = f.upper_pseudo_semi_b_fredholm || f.lower_pseudo_semi_b_fredholm;
    rule(implies(pseudo_semi, f.pseudo_fredholm), "pseudo semi-B-Fredholm ⇒ pseudo-Fredholm");
    rule(
        f.pseudo_b_fredholm == (f.upper_pseudo_semi_b_fredholm && f.lower_pseudo_semi_b_fredholm),
        "pseudo B-Fredholm ⇔ upper ∧ lower pseudo semi-B-Fredholm",
    );
    rule(
        f.pseudo_b_weyl == (f.upper_pseudo_semi_b_weyl && f.lower_pseudo_semi_b_weyl),
        "pseudo B-Weyl ⇔ upper ∧ lower pseudo semi-B-Weyl",
    );
    rule(f.pseudo_b_fredholm == (pseudo_semi && ind.is_integer()), "pseudo B-Fredholm ⇔ pseudo semi-B-Fredholm with integer index");
    rule(
        f.upper_pseudo_semi_b_weyl == (f.upper_pseudo_semi_b_fredholm && ind.non_positive()),
        "upper pseudo semi-B-Weyl ⇔ upper pseudo semi-B-Fredholm ∧ ind ≤ 0",
    );
    rule(
        f.lower_pseudo_semi_b_weyl == (f.lower_pseudo_semi_b_fredholm && ind.non_negative()),
        "lower pseudo semi-B-Weyl ⇔ lower pseudo semi-B-Fredholm ∧ ind ≥ 0",
    );
    rule(
        f.pseudo_b_weyl == (f.pseudo_b_fredholm && ind == ExtIndex::Fin(0)),
        "pseudo B-Weyl ⇔ pseudo B-Fredholm ∧ ind = 0",
    );

    rule(f.left_gen_drazin == (f.pseudo_fredholm && s.p == Fin(0)), "left generalized Drazin ⇔ pseudo-Fredholm ∧ p = 0");
    rule(f.right_gen_drazin == (f.pseudo_fredholm && s.q == Fin(0)), "right generalized Drazin ⇔ pseudo-Fredholm ∧ q = 0");
    rule(
        f.gen_drazin == (f.pseudo_fredholm && s.p == s.q && s.p.is_finite()),
        "generalized Drazin ⇔ pseudo-Fredholm ∧ p = q < ∞",
    );
    rule(f.gen_drazin == (f.left_gen_drazin && f.right_gen_drazin), "generalized Drazin ⇔ left ∧ right");

    rule(ind.is_defined() == pseudo_semi, "index defined ⇔ pseudo semi-B-Fredholm");
    if pseudo_semi {
        rule(ind == s.alpha.index_minus(s.beta), "index = α − β");
    }
    rule(implies(s.p.is_finite(), s.alpha <= s.beta), "p < ∞ ⇒ α ≤ β");
    rule(implies(s.q.is_finite(), s.alpha >= s.beta), "q < ∞ ⇒ α ≥ β");
    rule(implies(s.p.is_finite() && s.q.is_finite(), s.p == s.q && s.alpha == s.beta), "p, q < ∞ ⇒ p = q ∧ α = β");

    if !f.pseudo_fredholm {
        rule(
            !(pseudo_semi || f.pseudo_b_fredholm || f.upper_pseudo_semi_b_weyl || f.lower_pseudo_semi_b_weyl || f.pseudo_b_weyl),
            "no pseudo class without a generalized Kato decomposition",
        );
        rule(
            !(f.left_gen_drazin || f.right_gen_drazin || f.gen_drazin),
            "no generalized Drazin class without a generalized Kato decomposition",
        );
        rule(
            s.alpha == Inf && s.beta == Inf && s.p == Inf && s.q == Inf && ind == ExtIndex::Undefined,
            "summary undefined without a generalized Kato decomposition",
        );
    }
    out
}

/// Whether `rec` and its dual's record are mirror images: upper and lower
/// flags swap, α ↔ β, p ↔ q and the index changes sign.
pub fn dual_mirror_holds(rec: &ClassificationRecord, dual: &ClassificationRecord) -> bool {
    let (f, g) = (&rec.flags, &dual.flags);
    let (s, t) = (&rec.summary, &dual.summary);
    f.bounded_below == g.surjective
        && f.surjective == g.bounded_below
        && f.upper_semi_fredholm == g.lower_semi_fredholm
        && f.lower_semi_fredholm == g.upper_semi_fredholm
        && f.upper_semi_weyl == g.lower_semi_weyl
        && f.upper_semi_b_fredholm == g.lower_semi_b_fredholm
        && f.upper_pseudo_semi_b_fredholm == g.lower_pseudo_semi_b_fredholm
        && f.lower_pseudo_semi_b_fredholm == g.upper_pseudo_semi_b_fredholm
        && f.upper_pseudo_semi_b_weyl == g.lower_pseudo_semi_b_weyl
        && f.left_gen_drazin == g.right_gen_drazin
        && f.pseudo_b_fredholm == g.pseudo_b_fredholm
        && f.b_fredholm == g.b_fredholm
        && f.fredholm == g.fredholm
        && f.gen_drazin == g.gen_drazin
        && s.alpha == t.beta
        && s.beta == t.alpha
        && s.p == t.q
        && s.q == t.p
        && s.index == t.index.neg()
}
