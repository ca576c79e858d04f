//! The truncated Monster Lie algebra 𝔪 = n⁻ ⊕ 𝔤𝔩₂(-1) ⊕ n⁺ over a finite generator subset.
//!
//! Same-sign words are bracketed in the free Lie algebra. Mixed-sign words are
//! expanded by Jacobi along the standard factorization of the longer word (the
//! positive one on ties) until only letter pairs remain, which are evaluated by
//! the closed letter rules. [`oracle`] recomputes those letter rules from the
//! defining relations alone.

mod elem;
pub mod oracle;
mod parse;
pub mod sample;

use std::collections::HashMap;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

pub use elem::{Basis, LieElem, LieElemJson, WordTermJson, LIEELEM_SCHEMA};

use crate::freelie::{lyndon_basis, FreeCombo, FreeLie, LyndonWord, Sign};
use crate::jfun::JCoeffTable;
use crate::roots::{ExtIndex, GeneratorSubset, SpecRoot};
use crate::scalar::{q, qbinom, sign, Q};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element window {got} does not match context window {want}")]
    ContextMismatch { want: i64, got: i64 },
    #[error("intermediate grade {0} leaves the window")]
    Overflow(i64),
    #[error("index ({},{},{}) is not an extended index of the generator subset", .0.l, .0.j, .0.k)]
    OutsideSubset(ExtIndex),
    #[error("window must be at least 2, got {0}")]
    BadWindow(i64),
    #[error("cannot parse element: {0}")]
    Parse(String),
    #[error(transparent)]
    Subset(#[from] crate::roots::RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Shift {
    /// e₋₁ on e-letters, f₋₁ on f-letters: ℓ ↦ ℓ+1 with factor ℓ+1.
    Raise,
    /// f₋₁ on e-letters, e₋₁ on f-letters: ℓ ↦ ℓ-1 with factor j-ℓ.
    Lower,
}

/// Immutable algebra context with interior memo tables.
pub struct AlgebraCtx {
    subset: GeneratorSubset,
    window: i64,
    table: Arc<JCoeffTable>,
    free: FreeLie,
    shift_memo: Mutex<HashMap<(Shift, LyndonWord), FreeCombo>>,
    mixed_memo: Mutex<HashMap<(LyndonWord, LyndonWord), LieElem>>,
    form_memo: Mutex<HashMap<(LyndonWord, LyndonWord), Q>>,
    words: OnceLock<[BTreeMap<SpecRoot, Vec<LyndonWord>>; 2]>,
}

impl AlgebraCtx {
    pub fn new(subset: GeneratorSubset, window: i64, table: Arc<JCoeffTable>) -> Result<Self, AlgebraError> {
        if window < 2 {
            return Err(AlgebraError::BadWindow(window));
        }
        subset.validate(&table)?;
        Ok(AlgebraCtx {
            subset,
            window,
            table,
            free: FreeLie::new(),
            shift_memo: Mutex::new(HashMap::new()),
            mixed_memo: Mutex::new(HashMap::new()),
            form_memo: Mutex::new(HashMap::new()),
            words: OnceLock::new(),
        })
    }

    /// Builds the J table it needs on the spot.
    pub fn with_subset(subset: GeneratorSubset, window: i64) -> Result<Self, AlgebraError> {
        let table = crate::jfun::j_coefficients(subset.max_j().max(1)).expect("max_j >= -1");
        AlgebraCtx::new(subset, window, Arc::new(table))
    }

    /// Same subset and table, different window; memo tables start empty.
    pub fn rewindowed(&self, window: i64) -> Result<Self, AlgebraError> {
        AlgebraCtx::new(self.subset.clone(), window, self.table.clone())
    }

    pub fn subset(&self) -> &GeneratorSubset {
        &self.subset
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn table(&self) -> &JCoeffTable {
        &self.table
    }

    pub fn free(&self) -> &FreeLie {
        &self.free
    }

    /// Lyndon words of the window grouped by signed bidegree.
    pub fn word_basis(&self, sign: Sign) -> &BTreeMap<SpecRoot, Vec<LyndonWord>> {
        let both = self.words.get_or_init(|| {
            [
                lyndon_basis(&self.subset, Sign::E, self.window),
                lyndon_basis(&self.subset, Sign::F, self.window),
            ]
        });
        &both[if sign == Sign::E { 0 } else { 1 }]
    }

    /// Every basis vector of the window: h₁, h₂, e₋₁, f₋₁, then e-words and f-words.
    pub fn full_basis(&self) -> Vec<Basis> {
        let mut out = vec![Basis::H1, Basis::H2, Basis::Em1, Basis::Fm1];
        for sign in [Sign::E, Sign::F] {
            for words in self.word_basis(sign).values() {
                out.extend(words.iter().map(|w| match sign {
                    Sign::E => Basis::E(w.clone()),
                    Sign::F => Basis::F(w.clone()),
                }));
            }
        }
        out
    }

    pub fn zero(&self) -> LieElem {
        LieElem::zero(self.window)
    }

    pub fn h1(&self) -> LieElem {
        LieElem::basis(Basis::H1, Q::one(), self.window)
    }

    pub fn h2(&self) -> LieElem {
        LieElem::basis(Basis::H2, Q::one(), self.window)
    }

    pub fn em1(&self) -> LieElem {
        LieElem::basis(Basis::Em1, Q::one(), self.window)
    }

    pub fn fm1(&self) -> LieElem {
        LieElem::basis(Basis::Fm1, Q::one(), self.window)
    }

    fn check_index(&self, idx: ExtIndex) -> Result<(), AlgebraError> {
        if self.subset.contains(&idx) && idx.j < self.window {
            Ok(())
        } else {
            Err(AlgebraError::OutsideSubset(idx))
        }
    }

    pub fn make_e(&self, l: i64, j: i64, k: i64) -> Result<LieElem, AlgebraError> {
        let idx = ExtIndex::new(l, j, k);
        self.check_index(idx)?;
        Ok(LieElem::basis(Basis::E(LyndonWord::letter(idx)), Q::one(), self.window))
    }

    pub fn make_f(&self, l: i64, j: i64, k: i64) -> Result<LieElem, AlgebraError> {
        let idx = ExtIndex::new(l, j, k);
        self.check_index(idx)?;
        Ok(LieElem::basis(Basis::F(LyndonWord::letter(idx)), Q::one(), self.window))
    }

    pub fn parse(&self, text: &str) -> Result<LieElem, AlgebraError> {
        parse::parse_elem(self, text)
    }

    fn check(&self, x: &LieElem) -> Result<(), AlgebraError> {
        if x.window != self.window {
            return Err(AlgebraError::ContextMismatch {
                want: self.window,
                got: x.window,
            });
        }
        Ok(())
    }

    /// The bracket truncated to the window: same-sign products beyond it are dropped.
    pub fn bracket(&self, x: &LieElem, y: &LieElem) -> Result<LieElem, AlgebraError> {
        self.bracket_impl(x, y, false)
    }

    /// As [`AlgebraCtx::bracket`], but any product leaving the window is an error.
    pub fn bracket_checked(&self, x: &LieElem, y: &LieElem) -> Result<LieElem, AlgebraError> {
        self.bracket_impl(x, y, true)
    }

    fn bracket_impl(&self, x: &LieElem, y: &LieElem, strict: bool) -> Result<LieElem, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        let mut out = self.zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let g = a.grade() + b.grade();
                if g.abs() > self.window {
                    if strict {
                        return Err(AlgebraError::Overflow(g));
                    }
                    continue;
                }
                out.add_scaled(&self.bracket_basis(&a, &b), &(&ca * &cb));
            }
        }
        Ok(out)
    }

    fn basis_elem_bracket(&self, a: &Basis, y: &LieElem) -> LieElem {
        let mut out = self.zero();
        for (b, cb) in y.terms() {
            out.add_scaled(&self.bracket_basis(a, &b), &cb);
        }
        out
    }

    fn elem_basis_bracket(&self, x: &LieElem, b: &Basis) -> LieElem {
        self.basis_elem_bracket(b, x).neg()
    }

    pub fn bracket_basis(&self, a: &Basis, b: &Basis) -> LieElem {
        use Basis::*;
        let w = self.window;
        let one = Q::one();
        match (a, b) {
            (H1, H2) | (H2, H1) | (H1, H1) | (H2, H2) | (Em1, Em1) | (Fm1, Fm1) => self.zero(),
            (H1, Em1) => LieElem::basis(Em1, one, w),
            (H2, Em1) => LieElem::basis(Em1, -one, w),
            (H1, Fm1) => LieElem::basis(Fm1, -one, w),
            (H2, Fm1) => LieElem::basis(Fm1, one, w),
            (Em1, Fm1) => LieElem::basis(H1, one.clone(), w).sub(&LieElem::basis(H2, one, w)),
            (Em1 | Fm1, H1 | H2) | (Fm1, Em1) => self.bracket_basis(b, a).neg(),
            (H1, E(x)) => LieElem::basis(E(x.clone()), q(x.bidegree().a), w),
            (H2, E(x)) => LieElem::basis(E(x.clone()), q(x.bidegree().b), w),
            (H1, F(x)) => LieElem::basis(F(x.clone()), q(-x.bidegree().a), w),
            (H2, F(x)) => LieElem::basis(F(x.clone()), q(-x.bidegree().b), w),
            (Em1, E(x)) => self.pos_elem(self.shift_word(Shift::Raise, x)),
            (Fm1, E(x)) => self.pos_elem(self.shift_word(Shift::Lower, x)),
            (Fm1, F(x)) => self.neg_elem(self.shift_word(Shift::Raise, x)),
            (Em1, F(x)) => self.neg_elem(self.shift_word(Shift::Lower, x)),
            (E(_) | F(_), H1 | H2 | Em1 | Fm1) => self.bracket_basis(b, a).neg(),
            (E(x), E(y)) => self.pos_elem(self.free.bracket_words(x, y)),
            (F(x), F(y)) => self.neg_elem(self.free.bracket_words(x, y)),
            (E(x), F(y)) => self.mixed(x, y),
            (F(y), E(x)) => self.mixed(x, y).neg(),
        }
    }

    fn pos_elem(&self, c: FreeCombo) -> LieElem {
        let mut out = self.zero();
        out.pos = c;
        out
    }

    fn neg_elem(&self, c: FreeCombo) -> LieElem {
        let mut out = self.zero();
        out.neg = c;
        out
    }

    /// A 𝔤𝔩₂(-1) root vector acting as a derivation on a word.
    fn shift_word(&self, kind: Shift, w: &LyndonWord) -> FreeCombo {
        let key = (kind, w.clone());
        if let Some(hit) = self.shift_memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = match w.std_factorization() {
            None => shift_letter(kind, w.first_letter()),
            Some((u, v)) => {
                let mut out = FreeCombo::new();
                for (t, c) in self.shift_word(kind, &u).terms() {
                    out.add_scaled(&self.free.bracket_words(t, &v), c);
                }
                for (t, c) in self.shift_word(kind, &v).terms() {
                    out.add_scaled(&self.free.bracket_words(&u, t), c);
                }
                out
            }
        };
        self.shift_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// [E(w), F(v)].
    fn mixed(&self, w: &LyndonWord, v: &LyndonWord) -> LieElem {
        let key = (w.clone(), v.clone());
        if let Some(hit) = self.mixed_memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = if w.is_letter() && v.is_letter() {
            letter_bracket(w.first_letter(), v.first_letter(), self.window)
        } else if w.len() >= v.len() {
            // [[w1,w2],y] = [w1,[w2,y]] - [w2,[w1,y]]
            let (w1, w2) = w.std_factorization().expect("word of length >= 2");
            let a = self.basis_elem_bracket(&Basis::E(w1.clone()), &self.mixed(&w2, v));
            let b = self.basis_elem_bracket(&Basis::E(w2), &self.mixed(&w1, v));
            a.sub(&b)
        } else {
            // [x,[v1,v2]] = [[x,v1],v2] + [v1,[x,v2]]
            let (v1, v2) = v.std_factorization().expect("word of length >= 2");
            let a = self.elem_basis_bracket(&self.mixed(w, &v1), &Basis::F(v2.clone()));
            let b = self.basis_elem_bracket(&Basis::F(v1), &self.mixed(w, &v2));
            a.add(&b)
        };
        self.mixed_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// [x,[y,z]] + [y,[z,x]] + [z,[x,y]], or an overflow error if any product leaves the window.
    pub fn jacobi_check(&self, x: &LieElem, y: &LieElem, z: &LieElem) -> Result<LieElem, AlgebraError> {
        let t1 = self.bracket_checked(x, &self.bracket_checked(y, z)?)?;
        let t2 = self.bracket_checked(y, &self.bracket_checked(z, x)?)?;
        let t3 = self.bracket_checked(z, &self.bracket_checked(x, y)?)?;
        Ok(t1.add(&t2).add(&t3))
    }

    /// η: h ↦ -h, e₋₁ ↔ f₋₁, and e-words ↔ f-words letter by letter.
    pub fn cartan_involution(&self, x: &LieElem) -> LieElem {
        LieElem {
            gl2: [
                -x.gl2[0].clone(),
                -x.gl2[1].clone(),
                x.gl2[3].clone(),
                x.gl2[2].clone(),
            ],
            pos: x.neg.clone(),
            neg: x.pos.clone(),
            window: x.window,
        }
    }

    /// The invariant symmetric form.
    pub fn bilinear_form(&self, x: &LieElem, y: &LieElem) -> Q {
        let mut acc = Q::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let v = self.form_basis(&a, &b);
                if !v.is_zero() {
                    acc += v * &ca * &cb;
                }
            }
        }
        acc
    }

    fn form_basis(&self, a: &Basis, b: &Basis) -> Q {
        use Basis::*;
        match (a, b) {
            (H1, H2) | (H2, H1) => -Q::one(),
            (Em1, Fm1) | (Fm1, Em1) => Q::one(),
            (E(w), F(v)) | (F(v), E(w)) => self.form_words(w, v),
            _ => Q::zero(),
        }
    }

    /// (E(w), F(v)) by invariance, peeling the longer word.
    fn form_words(&self, w: &LyndonWord, v: &LyndonWord) -> Q {
        if w.bidegree() != v.bidegree() {
            return Q::zero();
        }
        let key = (w.clone(), v.clone());
        if let Some(hit) = self.form_memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let out = if w.is_letter() && v.is_letter() {
            let (e, f) = (w.first_letter(), v.first_letter());
            if e != f {
                Q::zero()
            } else if e.l == 0 {
                Q::one()
            } else {
                // e_ℓ = [e₋₁, e_{ℓ-1}]/ℓ, so (e_ℓ, f_ℓ) = (e₋₁, [e_{ℓ-1}, f_ℓ])/ℓ
                let lower = LyndonWord::letter(ExtIndex::new(e.l - 1, e.j, e.k));
                let inner = self.mixed(&lower, v);
                self.bilinear_form(&self.em1(), &inner) / q(e.l)
            }
        } else if w.len() >= v.len() {
            // ([w1,w2], y) = (w1, [w2, y])
            let (w1, w2) = w.std_factorization().expect("word of length >= 2");
            let inner = self.mixed(&w2, v);
            self.bilinear_form(&LieElem::basis(Basis::E(w1), Q::one(), self.window), &inner)
        } else {
            // (x, [v1, v2]) = ([x, v1], v2)
            let (v1, v2) = v.std_factorization().expect("word of length >= 2");
            let inner = self.mixed(w, &v1);
            self.bilinear_form(&inner, &LieElem::basis(Basis::F(v2), Q::one(), self.window))
        };
        self.form_memo.lock().unwrap().insert(key, out.clone());
        out
    }

    /// The torus element h_α with (h_α, h) = α(h), i.e. -b·h₁ - a·h₂ for α = (a,b).
    pub fn coroot(&self, d: SpecRoot) -> LieElem {
        let mut out = self.zero();
        out.add_basis(Basis::H1, q(-d.b));
        out.add_basis(Basis::H2, q(-d.a));
        out
    }

    /// For x ∈ 𝔪_α and y ∈ 𝔪_{-α}, whether [x,y] = (x,y)·h_α.
    pub fn weight_identity_holds(&self, x: &LieElem, y: &LieElem) -> Result<bool, AlgebraError> {
        let Some(d) = x.homogeneous_bidegree() else {
            return Ok(false);
        };
        if y.homogeneous_bidegree() != Some(d.neg()) {
            return Ok(false);
        }
        let lhs = self.bracket(x, y)?;
        Ok(lhs == self.coroot(d).scaled(&self.bilinear_form(x, y)))
    }

    /// The 𝔤𝔩₂(ℓ,j,k) basis e_{ℓ,jk}, f_{ℓ,jk}/c_{ℓj}, h₁/(ℓ+1), -h₂/(j-ℓ).
    pub fn gl2_subalgebra(&self, l: i64, j: i64, k: i64) -> Result<Gl2Sub, AlgebraError> {
        let e = self.make_e(l, j, k)?;
        let c = c_lj(l, j);
        let f = self.make_f(l, j, k)?.scaled(&c.recip());
        let h1 = self.h1().scaled(&Q::new(1.into(), (l + 1).into()));
        let h2 = self.h2().scaled(&Q::new((-1).into(), (j - l).into()));
        Ok(Gl2Sub { e, f, h1, h2, c })
    }

    /// Number of memoized mixed brackets; a rough cost gauge.
    pub fn memo_sizes(&self) -> (usize, usize, usize) {
        (
            self.free.cache_len(),
            self.shift_memo.lock().unwrap().len(),
            self.mixed_memo.lock().unwrap().len(),
        )
    }
}

/// c_{ℓj} = (-1)^{ℓ+1} binom(j-1, ℓ) (ℓ+1)(j-ℓ).
pub fn c_lj(l: i64, j: i64) -> Q {
    sign(l + 1) * qbinom(j - 1, l) * q((l + 1) * (j - l))
}

/// Scaled standard basis of a 𝔤𝔩₂(ℓ,j,k) subalgebra together with c_{ℓj}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl2Sub {
    pub e: LieElem,
    pub f: LieElem,
    pub h1: LieElem,
    pub h2: LieElem,
    pub c: Q,
}

impl Gl2Sub {
    /// The standard 𝔤𝔩₂ relations, each reported as (name, holds).
    pub fn check_relations(&self, ctx: &AlgebraCtx) -> Result<Vec<(&'static str, bool)>, AlgebraError> {
        let br = |a: &LieElem, b: &LieElem| ctx.bracket(a, b);
        Ok(vec![
            ("[h1,h2]=0", br(&self.h1, &self.h2)?.is_zero()),
            ("[h1,e]=e", br(&self.h1, &self.e)? == self.e),
            ("[h2,e]=-e", br(&self.h2, &self.e)? == self.e.neg()),
            ("[h1,f]=-f", br(&self.h1, &self.f)? == self.f.neg()),
            ("[h2,f]=f", br(&self.h2, &self.f)? == self.f),
            ("[e,f]=h1-h2", br(&self.e, &self.f)? == self.h1.sub(&self.h2)),
        ])
    }
}

fn shift_letter(kind: Shift, idx: ExtIndex) -> FreeCombo {
    let ExtIndex { l, j, k } = idx;
    match kind {
        Shift::Raise if l + 1 < j => {
            FreeCombo::single(LyndonWord::letter(ExtIndex::new(l + 1, j, k)), q(l + 1))
        }
        Shift::Lower if l > 0 => {
            FreeCombo::single(LyndonWord::letter(ExtIndex::new(l - 1, j, k)), q(j - l))
        }
        _ => FreeCombo::new(),
    }
}

/// [e_{ℓ,jk}, f_{m,pq}] by the closed letter rules.
pub fn letter_bracket(e: ExtIndex, f: ExtIndex, window: i64) -> LieElem {
    let mut out = LieElem::zero(window);
    if (e.j, e.k) != (f.j, f.k) || (e.l - f.l).abs() > 1 {
        return out;
    }
    let (l, j) = (e.l, e.j);
    if f.l == l {
        let c = sign(l + 1) * qbinom(j - 1, l);
        out.add_basis(Basis::H1, &c * q(j - l));
        out.add_basis(Basis::H2, c * q(l + 1));
    } else if f.l == l - 1 {
        out.add_basis(Basis::Em1, sign(l + 1) * qbinom(j - 1, l) * q(l));
    } else {
        let lp = l + 1;
        out.add_basis(Basis::Fm1, sign(lp) * qbinom(j - 1, lp) * q(lp));
    }
    out
}

#[cfg(test)]
mod tests;
