//! An independent derivation of the letter-level identities from the defining
//! relations M:1-M:5 alone.
//!
//! Elements are combinations of h₁, h₂, e₋₁, f₋₁ and the unnormalized iterated brackets
//! A(a,j,k) = (ad e₋₁)^a e_jk and B(b,j,k) = (ad f₋₁)^b f_jk, which vanish for a ≥ j.
//! Every bracket is reduced by Jacobi to the base relations; nothing here consults the
//! closed letter rules used by [`super::AlgebraCtx`].

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{AlgebraCtx, AlgebraError, Basis, LieElem};
use crate::freelie::LyndonWord;
use crate::roots::ExtIndex;
use crate::scalar::{factorial, q, qbinom, sign, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OBasis {
    H1,
    H2,
    Em1,
    Fm1,
    A(i64, i64, i64),
    B(i64, i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OElem(BTreeMap<OBasis, Q>);

impl OElem {
    pub fn zero() -> Self {
        OElem::default()
    }

    pub fn single(b: OBasis, c: Q) -> Self {
        let mut out = OElem::zero();
        out.add_term(b, c);
        out
    }

    fn add_term(&mut self, b: OBasis, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(b).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, o: &OElem, s: &Q) {
        for (b, c) in &o.0 {
            self.add_term(*b, c * s);
        }
    }

    fn sub(&self, o: &OElem) -> OElem {
        let mut out = self.clone();
        out.add_scaled(o, &-Q::one());
        out
    }

    fn add(&self, o: &OElem) -> OElem {
        let mut out = self.clone();
        out.add_scaled(o, &Q::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OBasis, &Q)> {
        self.0.iter()
    }
}

/// Bracket engine on the M-only model.
#[derive(Default)]
pub struct MOracle {
    memo: HashMap<(OBasis, OBasis), OElem>,
}

impl MOracle {
    pub fn new() -> Self {
        MOracle::default()
    }

    /// A(a,j,k), zero once a ≥ j.
    fn a(a: i64, j: i64, k: i64) -> OElem {
        if a < j {
            OElem::single(OBasis::A(a, j, k), Q::one())
        } else {
            OElem::zero()
        }
    }

    fn b(b: i64, j: i64, k: i64) -> OElem {
        if b < j {
            OElem::single(OBasis::B(b, j, k), Q::one())
        } else {
            OElem::zero()
        }
    }

    pub fn bracket(&mut self, x: &OElem, y: &OElem) -> OElem {
        let mut out = OElem::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let r = self.basis(*a, *b);
                out.add_scaled(&r, &(ca * cb));
            }
        }
        out
    }

    fn br1(&mut self, a: OBasis, y: &OElem) -> OElem {
        self.bracket(&OElem::single(a, Q::one()), y)
    }

    pub fn basis(&mut self, x: OBasis, y: OBasis) -> OElem {
        if let Some(hit) = self.memo.get(&(x, y)) {
            return hit.clone();
        }
        let out = self.compute(x, y);
        self.memo.insert((x, y), out.clone());
        out
    }

    fn compute(&mut self, x: OBasis, y: OBasis) -> OElem {
        use OBasis::*;
        let one = Q::one();
        let h1_minus_h2 = {
            let mut t = OElem::single(H1, one.clone());
            t.add_term(H2, -one.clone());
            t
        };
        match (x, y) {
            // M:1
            (H1 | H2, H1 | H2) => OElem::zero(),
            // M:2a, M:3a
            (H1, Em1) => OElem::single(Em1, one),
            (H2, Em1) => OElem::single(Em1, -one),
            (H1, Fm1) => OElem::single(Fm1, -one),
            (H2, Fm1) => OElem::single(Fm1, one),
            // M:4a
            (Em1, Fm1) => h1_minus_h2,
            (Em1, Em1) | (Fm1, Fm1) => OElem::zero(),
            // M:2b, M:3b on the generators themselves
            (H1, A(0, j, k)) => OElem::single(A(0, j, k), one),
            (H2, A(0, j, k)) => OElem::single(A(0, j, k), q(j)),
            (H1, B(0, j, k)) => OElem::single(B(0, j, k), -one),
            (H2, B(0, j, k)) => OElem::single(B(0, j, k), q(-j)),
            // [h, (ad e₋₁)^a e] = [[h,e₋₁], A(a-1)] + [e₋₁, [h, A(a-1)]]
            (H1 | H2, A(a, j, k)) => {
                let he = self.basis(x, Em1);
                let t1 = self.bracket(&he, &Self::a(a - 1, j, k));
                let inner = self.basis(x, A(a - 1, j, k));
                let t2 = self.br1(Em1, &inner);
                t1.add(&t2)
            }
            (H1 | H2, B(b, j, k)) => {
                let hf = self.basis(x, Fm1);
                let t1 = self.bracket(&hf, &Self::b(b - 1, j, k));
                let inner = self.basis(x, B(b - 1, j, k));
                let t2 = self.br1(Fm1, &inner);
                t1.add(&t2)
            }
            // definition of A, with M:5 truncating the string
            (Em1, A(a, j, k)) => Self::a(a + 1, j, k),
            (Fm1, B(b, j, k)) => Self::b(b + 1, j, k),
            // M:4b
            (Fm1, A(0, ..)) | (Em1, B(0, ..)) => OElem::zero(),
            // [f₋₁, [e₋₁, A]] = [[f₋₁,e₋₁], A] + [e₋₁, [f₋₁, A]]
            (Fm1, A(a, j, k)) => {
                let fe = self.basis(Fm1, Em1);
                let prev = Self::a(a - 1, j, k);
                let t1 = self.bracket(&fe, &prev);
                let inner = self.br1(Fm1, &prev);
                let t2 = self.br1(Em1, &inner);
                t1.add(&t2)
            }
            (Em1, B(b, j, k)) => {
                let ef = self.basis(Em1, Fm1);
                let prev = Self::b(b - 1, j, k);
                let t1 = self.bracket(&ef, &prev);
                let inner = self.br1(Em1, &prev);
                let t2 = self.br1(Fm1, &inner);
                t1.add(&t2)
            }
            // M:4c
            (A(0, j, k), B(0, p, q_)) => {
                if (j, k) != (p, q_) {
                    OElem::zero()
                } else {
                    let mut t = OElem::single(H1, q(-j));
                    t.add_term(H2, -one);
                    t
                }
            }
            // [[e₋₁, A'], B] = [e₋₁, [A', B]] - [A', [e₋₁, B]]
            (A(a, j, k), B(..)) if a > 0 => {
                let prev = Self::a(a - 1, j, k);
                let inner = self.bracket(&prev, &OElem::single(y, one.clone()));
                let t1 = self.br1(Em1, &inner);
                let eb = self.basis(Em1, y);
                let t2 = self.bracket(&prev, &eb);
                t1.sub(&t2)
            }
            // [A₀, [f₋₁, B']] = [[A₀, f₋₁], B'] + [f₋₁, [A₀, B']], and [A₀, f₋₁] = 0 by M:4b
            (A(0, j, k), B(b, p, q_)) => {
                let inner = self.bracket(&Self::a(0, j, k), &Self::b(b - 1, p, q_));
                self.br1(Fm1, &inner)
            }
            (A(..), A(..)) | (B(..), B(..)) => {
                unreachable!("same-sign brackets lie outside the letter identities")
            }
            (B(..), A(..)) | (Em1 | Fm1, H1 | H2) | (Fm1, Em1) | (A(..) | B(..), _) => {
                let r = self.basis(y, x);
                let mut n = OElem::zero();
                n.add_scaled(&r, &-Q::one());
                n
            }
        }
    }
}

/// One checked instance of a letter identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub left: String,
    pub right: String,
    pub oracle: LieElem,
    pub formula: LieElem,
    pub fast: LieElem,
    /// Mixed letter pair whose simple indices differ in k.
    pub distinct_k: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.oracle == self.formula && self.fast == self.formula
    }
}

#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Checks per identity id.
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for c in &self.checks {
            *out.entry(c.id).or_insert(0) += 1;
        }
        out
    }

    /// Whether some mixed letter pair with distinct k was exercised.
    pub fn has_distinct_k_pair(&self) -> bool {
        self.checks.iter().any(|c| c.distinct_k)
    }
}

/// e_{ℓ,jk} = A(ℓ,j,k)/ℓ! and f_{ℓ,jk} = B(ℓ,j,k)/ℓ!.
fn letter_to_oracle(idx: ExtIndex, e: bool) -> OElem {
    let c = Q::new(1.into(), factorial(idx.l as u64));
    let b = if e {
        OBasis::A(idx.l, idx.j, idx.k)
    } else {
        OBasis::B(idx.l, idx.j, idx.k)
    };
    OElem::single(b, c)
}

fn oracle_to_lie(x: &OElem, window: i64) -> LieElem {
    let mut out = LieElem::zero(window);
    for (b, c) in x.terms() {
        let (basis, scale) = match *b {
            OBasis::H1 => (Basis::H1, Q::one()),
            OBasis::H2 => (Basis::H2, Q::one()),
            OBasis::Em1 => (Basis::Em1, Q::one()),
            OBasis::Fm1 => (Basis::Fm1, Q::one()),
            OBasis::A(l, j, k) => (
                Basis::E(LyndonWord::letter(ExtIndex::new(l, j, k))),
                Q::from(factorial(l as u64)),
            ),
            OBasis::B(l, j, k) => (
                Basis::F(LyndonWord::letter(ExtIndex::new(l, j, k))),
                Q::from(factorial(l as u64)),
            ),
        };
        out.add_basis(basis, c * scale);
    }
    out
}

/// The right-hand sides of L:1-L:6b, written out case by case.
fn formula(id: &str, e: ExtIndex, f: ExtIndex, window: i64) -> LieElem {
    let mut out = LieElem::zero(window);
    let (l, j, k) = (e.l, e.j, e.k);
    let letter = |l: i64| LyndonWord::letter(ExtIndex::new(l, j, k));
    match id {
        "L:1" => {}
        "L:2" => {
            let c = sign(l + 1) * qbinom(j - 1, l);
            out.add_basis(Basis::H1, &c * q(j - l));
            out.add_basis(Basis::H2, c * q(l + 1));
        }
        "L:3a" => out.add_basis(Basis::Em1, sign(l + 1) * qbinom(j - 1, l) * q(l)),
        // here e is e_{ℓ-1} and f is f_ℓ
        "L:3b" => {
            let m = f.l;
            out.add_basis(Basis::Fm1, sign(m) * qbinom(j - 1, m) * q(m));
        }
        "L:4a" if l != j - 1 => out.add_basis(Basis::E(letter(l + 1)), q(l + 1)),
        "L:4b" if l != 0 => out.add_basis(Basis::E(letter(l - 1)), q(j - l)),
        "L:4c" if l != j - 1 => out.add_basis(Basis::F(letter(l + 1)), q(l + 1)),
        "L:4d" if l != 0 => out.add_basis(Basis::F(letter(l - 1)), q(j - l)),
        "L:4a" | "L:4b" | "L:4c" | "L:4d" => {}
        "L:5a" => out.add_basis(Basis::E(letter(l)), q(l + 1)),
        "L:5b" => out.add_basis(Basis::F(letter(l)), q(-(l + 1))),
        "L:6a" => out.add_basis(Basis::E(letter(l)), q(j - l)),
        "L:6b" => out.add_basis(Basis::F(letter(l)), q(-(j - l))),
        _ => unreachable!("unknown identity {id}"),
    }
    out
}

/// Recomputes every L identity over the extended indices of the context's subset three
/// ways: from M:1-M:5 alone, from the closed formula, and through the production bracket.
pub fn verify_identities(ctx: &AlgebraCtx) -> Result<IdentityReport, AlgebraError> {
    let mut oracle = MOracle::new();
    let w = ctx.window();
    let idxs = ctx.subset().ext_indices();
    let mut report = IdentityReport::default();
    let mut push = |id: &'static str,
                    distinct_k: bool,
                    left: String,
                    right: String,
                    ox: OElem,
                    oy: OElem,
                    fx: LieElem,
                    fy: LieElem,
                    formula: LieElem,
                    oracle: &mut MOracle|
     -> Result<(), AlgebraError> {
        let o = oracle_to_lie(&oracle.bracket(&ox, &oy), w);
        let fast = ctx.bracket(&fx, &fy)?;
        report.checks.push(IdentityCheck {
            id,
            left,
            right,
            oracle: o,
            formula,
            fast,
            distinct_k,
        });
        Ok(())
    };
    let gl2 = [
        ("h1", OBasis::H1, ctx.h1()),
        ("h2", OBasis::H2, ctx.h2()),
        ("e(-1)", OBasis::Em1, ctx.em1()),
        ("f(-1)", OBasis::Fm1, ctx.fm1()),
    ];
    for &e in &idxs {
        for &f in &idxs {
            let id = if (e.j, e.k) != (f.j, f.k) || (e.l - f.l).abs() > 1 {
                "L:1"
            } else if e.l == f.l {
                "L:2"
            } else if e.l == f.l + 1 {
                "L:3a"
            } else {
                "L:3b"
            };
            push(
                id,
                e.k != f.k,
                format!("e({},{},{})", e.l, e.j, e.k),
                format!("f({},{},{})", f.l, f.j, f.k),
                letter_to_oracle(e, true),
                letter_to_oracle(f, false),
                ctx.make_e(e.l, e.j, e.k)?,
                ctx.make_f(f.l, f.j, f.k)?,
                formula(id, e, f, w),
                &mut oracle,
            )?;
        }
        let single: [(&'static str, usize, bool); 8] = [
            ("L:4a", 2, true),
            ("L:4b", 3, true),
            ("L:4c", 3, false),
            ("L:4d", 2, false),
            ("L:5a", 0, true),
            ("L:5b", 0, false),
            ("L:6a", 1, true),
            ("L:6b", 1, false),
        ];
        for (id, slot, is_e) in single {
            let (name, ob, fx) = &gl2[slot];
            let (ox, fy) = if is_e {
                (letter_to_oracle(e, true), ctx.make_e(e.l, e.j, e.k)?)
            } else {
                (letter_to_oracle(e, false), ctx.make_f(e.l, e.j, e.k)?)
            };
            let letter = format!("{}({},{},{})", if is_e { 'e' } else { 'f' }, e.l, e.j, e.k);
            push(
                id,
                false,
                name.to_string(),
                letter,
                OElem::single(*ob, Q::one()),
                ox,
                fx.clone(),
                fy,
                formula(id, e, e, w),
                &mut oracle,
            )?;
        }
    }
    Ok(report)
}
