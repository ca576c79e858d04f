//! The groups GL₂(-1) and GL₂(ℓ,j,k) as concrete operators.
//!
//! GL₂(-1) acts on the whole algebra: its closed-form action is given on h₁, h₂,
//! e₋₁, f₋₁ and the letters and extended to words as an automorphism. GL₂(ℓ,j,k)
//! only acts on its own 𝔤𝔩₂ subalgebra span{e_ℓ, f_ℓ, h₁, h₂}, here as 4×4 matrices
//! built from the algebra's brackets.

mod suite;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use suite::{
    adjoint_identity_check, closedform_vs_series, inner_probe, nilpotence_probe, standard_relation_suite,
    AdjointReport, ClosedFormReport, Gl2Model, ImagAdjoint, InnerReport, NilpotenceVerdict, RealAdjoint,
    RealRoute, Ref2x2, RelationCheck, SuiteReport, STANDARD_IDS,
    symbol_factor,
};

use crate::freelie::LyndonWord;
use crate::monster::{AlgebraCtx, AlgebraError, Basis, LieElem};
use crate::operators::{GradedOp, OpError, Truncation};
use crate::roots::ExtIndex;
use crate::scalar::{fmt_q, qbinom, qpow, sign, Q};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Gl2Error {
    #[error("torus parameter must be nonzero")]
    ZeroTorus,
    #[error("{s} has no rational {n}-th root; present the parameter as t^{n} with rational t")]
    NoRationalRoot { s: String, n: i64 },
    #[error("symbol {0} does not belong to this group")]
    WrongFamily(String),
    #[error("{0} leaves the 4-dimensional subalgebra")]
    NotInSpan(String),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A generator symbol of GL₂(-1) or of some GL₂(ℓ,j,k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gl2Symbol {
    Xm1(Q),
    Ym1(Q),
    H1(Q),
    H2(Q),
    /// w̃₋₁(s) = X₋₁(s)Y₋₁(-s⁻¹)X₋₁(s).
    Wm1s(Q),
    Wm1,
    X(ExtIndex, Q),
    Y(ExtIndex, Q),
    /// w̃_{ℓ,jk}(s) = X(s)Y(-s⁻¹/c)X(s).
    Ws(ExtIndex, Q),
    W(ExtIndex),
}

impl fmt::Display for Gl2Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = |i: &ExtIndex| format!("{},{}{}", i.l, i.j, i.k);
        match self {
            Gl2Symbol::Xm1(u) => write!(f, "X-1({})", fmt_q(u)),
            Gl2Symbol::Ym1(u) => write!(f, "Y-1({})", fmt_q(u)),
            Gl2Symbol::H1(s) => write!(f, "H1({})", fmt_q(s)),
            Gl2Symbol::H2(s) => write!(f, "H2({})", fmt_q(s)),
            Gl2Symbol::Wm1s(s) => write!(f, "w-1({})", fmt_q(s)),
            Gl2Symbol::Wm1 => write!(f, "w-1"),
            Gl2Symbol::X(i, u) => write!(f, "X{}({})", idx(i), fmt_q(u)),
            Gl2Symbol::Y(i, u) => write!(f, "Y{}({})", idx(i), fmt_q(u)),
            Gl2Symbol::Ws(i, s) => write!(f, "w{}({})", idx(i), fmt_q(s)),
            Gl2Symbol::W(i) => write!(f, "w{}", idx(i)),
        }
    }
}

impl Gl2Symbol {
    fn torus(&self) -> Option<&Q> {
        match self {
            Gl2Symbol::H1(s) | Gl2Symbol::H2(s) | Gl2Symbol::Wm1s(s) | Gl2Symbol::Ws(_, s) => Some(s),
            _ => None,
        }
    }

    pub fn check(&self) -> Result<(), Gl2Error> {
        match self.torus() {
            Some(s) if s.is_zero() => Err(Gl2Error::ZeroTorus),
            _ => Ok(()),
        }
    }
}

/// Dense exact square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: Vec<Vec<Q>>,
}

impl QMat {
    pub fn identity(n: usize) -> Self {
        QMat {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        QMat { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        let n = self.n();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &self.rows[i][k] * &o.rows[k][j]))
                    .collect()
            })
            .collect();
        QMat { rows }
    }

    pub fn inverse(&self) -> Option<QMat> {
        crate::operators::invert_dense(self.rows.clone()).map(|rows| QMat { rows })
    }

    pub fn is_identity(&self) -> bool {
        *self == QMat::identity(self.n())
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| if i == j { self.rows[i][i] == self.rows[0][0] } else { self.rows[i][j].is_zero() }))
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }
}

impl fmt::Display for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(fmt_q).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Rational n-th root, if one exists (the positive one for even n).
pub fn rational_root(s: &Q, n: i64) -> Result<Q, Gl2Error> {
    let fail = || Gl2Error::NoRationalRoot { s: fmt_q(s), n };
    if s.is_zero() {
        return Err(Gl2Error::ZeroTorus);
    }
    if n == 1 {
        return Ok(s.clone());
    }
    if n < 1 || (n % 2 == 0 && s.is_negative()) {
        return Err(fail());
    }
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.abs().nth_root(n as u32);
        (num_traits::pow(r.clone(), n as usize) == x.abs()).then_some(r)
    };
    let (p, d) = (root(s.numer()).ok_or_else(fail)?, root(s.denom()).ok_or_else(fail)?);
    let r = Q::new(p, d);
    Ok(if s.is_negative() { -r } else { r })
}

/// Closed-form image of a generator of the algebra under a GL₂(-1) symbol.
fn generator_image(sym: &Gl2Symbol, ctx: &AlgebraCtx, b: &Basis) -> Result<LieElem, Gl2Error> {
    let e = |i: ExtIndex| ctx.make_e(i.l, i.j, i.k);
    let f = |i: ExtIndex| ctx.make_f(i.l, i.j, i.k);
    let (h1, h2, em, fm) = (ctx.h1(), ctx.h2(), ctx.em1(), ctx.fm1());
    // Σ_{m=ℓ}^{j-1} C(m,ℓ) u^{m-ℓ} x_m  and  Σ_{m=0}^{ℓ} C(j-1-m, j-1-ℓ) u^{ℓ-m} x_m
    let raise = |i: ExtIndex, u: &Q, mk: &dyn Fn(ExtIndex) -> Result<LieElem, AlgebraError>| {
        let mut out = ctx.zero();
        for m in i.l..i.j {
            out.add_scaled(&mk(ExtIndex::new(m, i.j, i.k))?, &(qbinom(m, i.l) * qpow(u, m - i.l)));
        }
        Ok::<_, AlgebraError>(out)
    };
    let lower = |i: ExtIndex, u: &Q, mk: &dyn Fn(ExtIndex) -> Result<LieElem, AlgebraError>| {
        let mut out = ctx.zero();
        for m in 0..=i.l {
            let c = qbinom(i.j - 1 - m, i.j - 1 - i.l) * qpow(u, i.l - m);
            out.add_scaled(&mk(ExtIndex::new(m, i.j, i.k))?, &c);
        }
        Ok::<_, AlgebraError>(out)
    };
    let letter = |w: &LyndonWord| w.first_letter();
    let out = match (sym, b) {
        (Gl2Symbol::Xm1(u), Basis::E(w)) => raise(letter(w), u, &e)?,
        (Gl2Symbol::Xm1(u), Basis::F(w)) => lower(letter(w), u, &f)?,
        (Gl2Symbol::Ym1(u), Basis::E(w)) => lower(letter(w), u, &e)?,
        (Gl2Symbol::Ym1(u), Basis::F(w)) => raise(letter(w), u, &f)?,
        (Gl2Symbol::Xm1(_), Basis::Em1) => em,
        (Gl2Symbol::Xm1(u), Basis::Fm1) => {
            fm.add(&h1.sub(&h2).scaled(u)).sub(&em.scaled(&(u * u)))
        }
        (Gl2Symbol::Xm1(u), Basis::H1) => h1.sub(&em.scaled(u)),
        (Gl2Symbol::Xm1(u), Basis::H2) => h2.add(&em.scaled(u)),
        (Gl2Symbol::Ym1(u), Basis::Em1) => {
            em.sub(&h1.sub(&h2).scaled(u)).sub(&fm.scaled(&(u * u)))
        }
        (Gl2Symbol::Ym1(_), Basis::Fm1) => fm,
        (Gl2Symbol::Ym1(u), Basis::H1) => h1.add(&fm.scaled(u)),
        (Gl2Symbol::Ym1(u), Basis::H2) => h2.sub(&fm.scaled(u)),
        (Gl2Symbol::H1(s) | Gl2Symbol::H2(s), _) => {
            let d = b.bidegree();
            let p = if matches!(sym, Gl2Symbol::H1(_)) { d.a } else { d.b };
            LieElem::basis(b.clone(), qpow(s, p), ctx.window())
        }
        (Gl2Symbol::Wm1, Basis::E(w)) | (Gl2Symbol::Wm1, Basis::F(w)) => {
            let i = letter(w);
            let flipped = ExtIndex::new(i.j - 1 - i.l, i.j, i.k);
            // X₋₁(1)Y₋₁(-1)X₋₁(1) composed from the closed forms above.
            match b {
                Basis::E(_) => e(flipped)?.scaled(&sign(i.l)),
                _ => f(flipped)?.scaled(&sign(i.j - 1 - i.l)),
            }
        }
        (Gl2Symbol::Wm1, Basis::Em1) => fm.neg(),
        (Gl2Symbol::Wm1, Basis::Fm1) => em.neg(),
        (Gl2Symbol::Wm1, Basis::H1) => h2,
        (Gl2Symbol::Wm1, Basis::H2) => h1,
        _ => return Err(Gl2Error::WrongFamily(sym.to_string())),
    };
    Ok(out)
}

/// The automorphism of a GL₂(-1) symbol on any element of the window: generators
/// by closed form, Lyndon words through their standard factorization.
pub struct ClosedForm<'a> {
    ctx: &'a AlgebraCtx,
    sym: Gl2Symbol,
    memo: HashMap<Basis, LieElem>,
}

impl<'a> ClosedForm<'a> {
    pub fn new(ctx: &'a AlgebraCtx, sym: Gl2Symbol) -> Result<Self, Gl2Error> {
        sym.check()?;
        let sym = match sym {
            Gl2Symbol::Xm1(_) | Gl2Symbol::Ym1(_) | Gl2Symbol::H1(_) | Gl2Symbol::H2(_) | Gl2Symbol::Wm1 => sym,
            other => return Err(Gl2Error::WrongFamily(other.to_string())),
        };
        Ok(ClosedForm {
            ctx,
            sym,
            memo: HashMap::new(),
        })
    }

    pub fn image_basis(&mut self, b: &Basis) -> Result<LieElem, Gl2Error> {
        if let Some(v) = self.memo.get(b) {
            return Ok(v.clone());
        }
        let split = match b {
            Basis::E(w) | Basis::F(w) => w.std_factorization(),
            _ => None,
        };
        let out = match (split, b) {
            (Some((u, v)), Basis::E(_)) => {
                let (a, c) = (self.image_basis(&Basis::E(u))?, self.image_basis(&Basis::E(v))?);
                self.ctx.bracket(&a, &c)?
            }
            (Some((u, v)), _) => {
                let (a, c) = (self.image_basis(&Basis::F(u))?, self.image_basis(&Basis::F(v))?);
                self.ctx.bracket(&a, &c)?
            }
            (None, _) => generator_image(&self.sym, self.ctx, b)?,
        };
        self.memo.insert(b.clone(), out.clone());
        Ok(out)
    }

    pub fn image(&mut self, x: &LieElem) -> Result<LieElem, Gl2Error> {
        let mut out = self.ctx.zero();
        for (b, c) in x.terms() {
            out.add_scaled(&self.image_basis(&b)?, &c);
        }
        Ok(out)
    }
}

/// Closed-form action of a GL₂(-1) symbol as a matrix on the truncation's window.
/// w̃₋₁(s) is evaluated as H₁(s)H₂(s⁻¹)w̃₋₁.
pub fn gl2neg1_action(sym: &Gl2Symbol, t: &Truncation) -> Result<GradedOp, Gl2Error> {
    sym.check()?;
    if let Gl2Symbol::Wm1s(s) = sym {
        let a = gl2neg1_action(&Gl2Symbol::H1(s.clone()), t)?;
        let b = gl2neg1_action(&Gl2Symbol::H2(s.recip()), t)?;
        let w = gl2neg1_action(&Gl2Symbol::Wm1, t)?;
        return Ok(a.compose(&b)?.compose(&w)?);
    }
    let mut cf = ClosedForm::new(t.ctx(), sym.clone())?;
    let op = GradedOp::from_fn(t.basis()?, |v| {
        cf.image(v).map_err(|e| match e {
            Gl2Error::Op(o) => o,
            Gl2Error::Algebra(a) => OpError::Algebra(a),
            other => OpError::Unsupported(other.to_string()),
        })
    })?;
    Ok(op)
}

/// The 4-dimensional 𝔤𝔩₂(ℓ,j,k) inside the algebra, in the basis (e_ℓ, f_ℓ, h₁, h₂).
#[derive(Clone)]
pub struct Gl2Span {
    pub idx: ExtIndex,
    ctx: Arc<AlgebraCtx>,
    basis: [LieElem; 4],
    /// [e_ℓ, f_ℓ] = ĉ·(h₁/(ℓ+1) + h₂/(j-ℓ)), read off the algebra.
    pub c_hat: Q,
}

impl Gl2Span {
    pub fn new(ctx: Arc<AlgebraCtx>, idx: ExtIndex) -> Result<Self, Gl2Error> {
        let e = ctx.make_e(idx.l, idx.j, idx.k)?;
        let f = ctx.make_f(idx.l, idx.j, idx.k)?;
        let ef = ctx.bracket(&e, &f)?;
        let c1 = ef.coeff(&Basis::H1) * Q::from_integer((idx.l + 1).into());
        let c2 = ef.coeff(&Basis::H2) * Q::from_integer((idx.j - idx.l).into());
        if c1 != c2 || c1.is_zero() || ef.terms().len() != 2 {
            return Err(Gl2Error::NotInSpan(format!("[e,f] = {ef}")));
        }
        let basis = [e, f, ctx.h1(), ctx.h2()];
        Ok(Gl2Span {
            idx,
            ctx,
            basis,
            c_hat: c1,
        })
    }

    pub fn ctx(&self) -> &AlgebraCtx {
        &self.ctx
    }

    pub fn e(&self) -> &LieElem {
        &self.basis[0]
    }

    pub fn f(&self) -> &LieElem {
        &self.basis[1]
    }

    fn coords(&self, x: &LieElem) -> Result<Vec<Q>, Gl2Error> {
        let idx = self.idx;
        let mut out = vec![Q::zero(); 4];
        for (b, c) in x.terms() {
            let slot = match &b {
                Basis::E(w) if w.is_letter() && w.first_letter() == idx => 0,
                Basis::F(w) if w.is_letter() && w.first_letter() == idx => 1,
                Basis::H1 => 2,
                Basis::H2 => 3,
                _ => return Err(Gl2Error::NotInSpan(x.to_string())),
            };
            out[slot] = c;
        }
        Ok(out)
    }

    fn matrix_of(&self, mut f: impl FnMut(&LieElem) -> Result<LieElem, Gl2Error>) -> Result<QMat, Gl2Error> {
        let mut rows = vec![vec![Q::zero(); 4]; 4];
        for (j, b) in self.basis.iter().enumerate() {
            let col = self.coords(&f(b)?)?;
            for (i, v) in col.into_iter().enumerate() {
                rows[i][j] = v;
            }
        }
        Ok(QMat::from_rows(rows))
    }

    /// exp(ad x) on the span; x must be a multiple of e_ℓ or f_ℓ.
    pub fn exp_ad(&self, x: &LieElem) -> Result<QMat, Gl2Error> {
        self.matrix_of(|v| {
            let mut sum = v.clone();
            let mut term = v.clone();
            for n in 1..=4i64 {
                term = self.ctx.bracket(x, &term)?.scaled(&Q::new(1.into(), n.into()));
                sum.add_scaled(&term, &Q::one());
            }
            Ok(sum)
        })
    }

    /// H₁(s) and H₂(s) act on bidegree (a,b) by sᵃ and sᵇ.
    pub fn torus(&self, s1: &Q, s2: &Q) -> Result<QMat, Gl2Error> {
        if s1.is_zero() || s2.is_zero() {
            return Err(Gl2Error::ZeroTorus);
        }
        self.matrix_of(|v| Ok(crate::operators::torus_apply(s1, s2, v)))
    }

    /// Matrix of a symbol on the span. w̃_{ℓ,jk}(s) uses the span's own ĉ.
    pub fn action(&self, sym: &Gl2Symbol) -> Result<QMat, Gl2Error> {
        sym.check()?;
        let own = |i: &ExtIndex| {
            if *i == self.idx {
                Ok(())
            } else {
                Err(Gl2Error::WrongFamily(sym.to_string()))
            }
        };
        match sym {
            Gl2Symbol::X(i, u) => {
                own(i)?;
                self.exp_ad(&self.e().scaled(u))
            }
            Gl2Symbol::Y(i, u) => {
                own(i)?;
                self.exp_ad(&self.f().scaled(u))
            }
            Gl2Symbol::H1(s) => self.torus(s, &Q::one()),
            Gl2Symbol::H2(s) => self.torus(&Q::one(), s),
            Gl2Symbol::Ws(i, s) => {
                own(i)?;
                let x = self.action(&Gl2Symbol::X(*i, s.clone()))?;
                let y = self.action(&Gl2Symbol::Y(*i, -s.recip() / &self.c_hat))?;
                Ok(x.mul(&y).mul(&x))
            }
            Gl2Symbol::W(i) => self.action(&Gl2Symbol::Ws(*i, Q::one())),
            _ => Err(Gl2Error::WrongFamily(sym.to_string())),
        }
    }

    /// The same operator in the standard basis (ē, f̄, h̄₁, h̄₂) = (e, f/ĉ, h₁/(ℓ+1), -h₂/(j-ℓ)).
    pub fn in_standard_basis(&self, m: &QMat) -> QMat {
        let scale = [
            Q::one(),
            self.c_hat.recip(),
            Q::new(1.into(), (self.idx.l + 1).into()),
            Q::new((-1).into(), (self.idx.j - self.idx.l).into()),
        ];
        let rows = (0..4)
            .map(|i| (0..4).map(|j| &m.rows[i][j] * &scale[j] / &scale[i]).collect())
            .collect();
        QMat::from_rows(rows)
    }
}

/// Matrix of a symbol of GL₂(ℓ,j,k) on 𝔤𝔩₂(ℓ,j,k) in the basis (e_ℓ, f_ℓ, h₁, h₂).
pub fn gl2ljk_action(sym: &Gl2Symbol, span: &Gl2Span) -> Result<QMat, Gl2Error> {
    span.action(sym)
}

#[cfg(test)]
mod tests;
