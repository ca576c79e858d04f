//! Operators on truncated completions of 𝔪.
//!
//! A [`Truncation`] fixes an integer grading functional g on the root lattice and a
//! height H; everything is computed modulo components of g-grade above H. All
//! operators used here are g-nondecreasing, so the kept components are exact.
//! When every e-letter of the subset has positive grade the kept space is finite
//! and operators become matrices ([`GradedOp`]); otherwise they are applied to
//! individual vectors through [`FactorWord`].

mod graded;
mod layers;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;

pub(crate) use graded::invert_dense;
pub use graded::{GradedOp, GradedOpJson, TripletJson, WindowBasis, GRADEDOP_SCHEMA};
pub use layers::{
    bch, commutator_factor, factor_map, layer_decompose, recompose, CommutatorFactor, CommutatorReport,
    LayerList,
};

use crate::freelie::{letter_key, lyndon_words_weighted, Sign};
use crate::monster::{AlgebraCtx, AlgebraError, Basis, LieElem};
use crate::roots::{specialize, ExtIndex, GeneratorSubset, PositiveSystemDesc, RootVec};
use crate::scalar::{qpow, Q};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum OpError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("exp(ad x) is not pro-summable here: {0}")]
    NotProSummable(String),
    #[error("operator is not in the unipotent subgroup at level {n0}: deviation at grade {grade}")]
    NotUnipotent { n0: i64, grade: i64 },
    #[error("operators live on different windows")]
    Mismatch,
    #[error("operator is not invertible")]
    Singular,
    #[error("grading {0} is not positive on every e-letter, so the window has no finite basis")]
    NoFiniteBasis(Grading),
    #[error("algebra window {have} too small, need {need}")]
    WindowTooSmall { have: i64, need: i64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("malformed operator data: {0}")]
    Malformed(String),
}

/// An integer functional g(α) = a·x + b·y + Σ t_jk·c_jk, where (x,y) is the
/// specialization of α and c_jk its coefficient on α_jk. The twist separates
/// roots with equal specialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grading {
    pub a: i64,
    pub b: i64,
    pub twist: BTreeMap<(i64, i64), i64>,
}

impl Grading {
    pub fn spec(a: i64, b: i64) -> Self {
        Grading {
            a,
            b,
            twist: BTreeMap::new(),
        }
    }

    /// λ(α) = x + y.
    pub fn lambda() -> Self {
        Grading::spec(1, 1)
    }

    /// The functional of a rational positive system, cleared of denominators.
    pub fn from_desc(desc: &PositiveSystemDesc) -> Option<Self> {
        desc.integer_coefficients().map(|(a, b)| Grading::spec(a, b))
    }

    pub fn letter(&self, idx: ExtIndex) -> i64 {
        self.a * (idx.l + 1) + self.b * (idx.j - idx.l) + self.twist.get(&(idx.j, idx.k)).copied().unwrap_or(0)
    }

    pub fn word(&self, w: &crate::freelie::LyndonWord) -> i64 {
        w.letters().map(|i| self.letter(i)).sum()
    }

    pub fn basis(&self, b: &Basis) -> i64 {
        match b {
            Basis::H1 | Basis::H2 => 0,
            Basis::Em1 => self.a - self.b,
            Basis::Fm1 => self.b - self.a,
            Basis::E(w) => self.word(w),
            Basis::F(w) => -self.word(w),
        }
    }

    pub fn root(&self, r: &RootVec) -> i64 {
        let s = specialize(r);
        let t: i64 = r
            .imag
            .iter()
            .map(|(jk, c)| c * self.twist.get(jk).copied().unwrap_or(0))
            .sum();
        self.a * s.a + self.b * s.b + t
    }

    /// Whether every e-letter of the subset has positive grade.
    pub fn positive_on(&self, s: &GeneratorSubset) -> bool {
        s.ext_indices().into_iter().all(|i| self.letter(i) > 0)
    }

    /// Drops every component of grade above `height`.
    pub fn truncate(&self, x: &LieElem, height: i64) -> LieElem {
        x.filter(|b| self.basis(b) <= height)
    }

    pub fn part(&self, x: &LieElem, g: i64) -> LieElem {
        x.filter(|b| self.basis(b) == g)
    }

    /// Smallest grade carried by x.
    pub fn min_grade(&self, x: &LieElem) -> Option<i64> {
        x.terms().iter().map(|(b, _)| self.basis(b)).min()
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{:+}y", self.a, self.b)?;
        for ((j, k), t) in &self.twist {
            write!(f, "{t:+}c({j},{k})")?;
        }
        Ok(())
    }
}

/// A grading functional with a height cutoff over a fixed algebra context.
pub struct Truncation {
    ctx: Arc<AlgebraCtx>,
    grading: Grading,
    height: i64,
    basis: OnceLock<Result<Arc<WindowBasis>, OpError>>,
}

impl Truncation {
    pub fn new(ctx: Arc<AlgebraCtx>, grading: Grading, height: i64) -> Self {
        Truncation {
            ctx,
            grading,
            height,
            basis: OnceLock::new(),
        }
    }

    /// The λ-window of the context itself.
    pub fn lambda(ctx: Arc<AlgebraCtx>) -> Self {
        let h = ctx.window();
        Truncation::new(ctx, Grading::lambda(), h)
    }

    /// Builds a context over `subset` whose window covers every word of grade ≤ height.
    /// Mixed-sign gradings have no such bound; they get `fallback_window`.
    pub fn for_subset(
        subset: GeneratorSubset,
        grading: Grading,
        height: i64,
        fallback_window: i64,
    ) -> Result<Self, OpError> {
        let window = if grading.positive_on(&subset) {
            required_window(&subset, &grading, height).max(2)
        } else {
            fallback_window
        };
        let ctx = AlgebraCtx::with_subset(subset, window)?;
        Ok(Truncation::new(Arc::new(ctx), grading, height))
    }

    pub fn ctx(&self) -> &AlgebraCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> Arc<AlgebraCtx> {
        self.ctx.clone()
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    /// The finite basis of the window, when the grading allows one.
    pub fn basis(&self) -> Result<Arc<WindowBasis>, OpError> {
        self.basis
            .get_or_init(|| WindowBasis::new(&self.ctx, &self.grading, self.height).map(Arc::new))
            .clone()
    }

    pub fn truncate(&self, x: &LieElem) -> LieElem {
        self.grading.truncate(x, self.height)
    }

    /// [x, y] modulo grades above the height. Products that would leave the algebra
    /// window while staying below the height are reported, never dropped.
    pub fn bracket(&self, x: &LieElem, y: &LieElem) -> Result<LieElem, OpError> {
        let g = &self.grading;
        let positive = g.positive_on(self.ctx.subset());
        let mut out = self.ctx.zero();
        let ys: Vec<(Basis, Q, i64)> = y
            .terms()
            .into_iter()
            .map(|(b, c)| {
                let gb = g.basis(&b);
                (b, c, gb)
            })
            .collect();
        for (a, ca) in x.terms() {
            let ga = g.basis(&a);
            for (b, cb, gb) in &ys {
                if ga + gb > self.height {
                    continue;
                }
                let lam = a.grade() + b.grade();
                if lam.abs() > self.ctx.window() {
                    // A positive grading's window holds every word of grade in
                    // [-height, height], so such a product vanishes.
                    if positive && ga + gb >= -self.height {
                        continue;
                    }
                    return Err(AlgebraError::Overflow(lam).into());
                }
                out.add_scaled(&self.ctx.bracket_basis(&a, b), &(&ca * cb));
            }
        }
        Ok(self.truncate(&out))
    }

    /// Rejects x unless Σ ad(x)ⁿ/n! is summable in this truncation: x must have only
    /// positive grades, or be a multiple of e₋₁ or of f₋₁ of nonnegative grade.
    pub fn check_exponent(&self, x: &LieElem) -> Result<(), OpError> {
        let ts = x.terms();
        let g = &self.grading;
        if ts.iter().all(|(b, _)| g.basis(b) > 0) {
            return Ok(());
        }
        let real = |b: &Basis| matches!(b, Basis::Em1) || matches!(b, Basis::Fm1);
        if ts.len() == 1 && real(&ts[0].0) && g.basis(&ts[0].0) >= 0 {
            return Ok(());
        }
        Err(OpError::NotProSummable(format!("{x} has a component of grade ≤ 0")))
    }

    /// exp(ad x)·v, truncated.
    pub fn exp_apply(&self, x: &LieElem, v: &LieElem) -> Result<LieElem, OpError> {
        self.check_exponent(x)?;
        let mut sum = self.truncate(v);
        let mut term = sum.clone();
        // ad(e₋₁) and ad(f₋₁) are nilpotent on each root string; strictly positive
        // exponents raise the grade, so either way the series stops.
        let cap = 4 * (self.height.abs() + self.ctx.window()) + 64;
        for n in 1..=cap {
            term = self.bracket(x, &term)?.scaled(&Q::new(1.into(), n.into()));
            if term.is_zero() {
                return Ok(sum);
            }
            sum.add_scaled(&term, &Q::one());
        }
        Err(OpError::NotProSummable(format!("series for {x} did not terminate")))
    }

    pub fn exp_ad(&self, x: &LieElem) -> Result<GradedOp, OpError> {
        self.check_exponent(x)?;
        GradedOp::from_fn(self.basis()?, |v| self.exp_apply(x, v))
    }

    pub fn ad_op(&self, x: &LieElem) -> Result<GradedOp, OpError> {
        GradedOp::from_fn(self.basis()?, |v| self.bracket(x, v))
    }

    pub fn identity(&self) -> Result<GradedOp, OpError> {
        Ok(GradedOp::identity(self.basis()?))
    }

    /// Vectors on which two actions are compared: the window basis when finite,
    /// otherwise the generators h₁, h₂, e₋₁, f₋₁ and the letters, which determine an
    /// automorphism.
    pub fn test_vectors(&self) -> Vec<LieElem> {
        match self.basis() {
            Ok(b) => (0..b.len()).map(|i| b.vector(i)).collect(),
            Err(_) => {
                let c = &self.ctx;
                let mut out = vec![c.h1(), c.h2(), c.em1(), c.fm1()];
                for i in c.subset().ext_indices() {
                    out.push(c.make_e(i.l, i.j, i.k).expect("letter of the subset"));
                    out.push(c.make_f(i.l, i.j, i.k).expect("letter of the subset"));
                }
                out
            }
        }
    }

    /// First test vector on which the two actions differ, modulo shifts above the height.
    pub fn compare(
        &self,
        lhs: &dyn Action,
        rhs: &dyn Action,
    ) -> Result<Option<(LieElem, LieElem, LieElem)>, OpError> {
        agree_on(self, lhs, rhs, &self.test_vectors())
    }

    /// Evaluates a factor word as a matrix on the window basis.
    pub fn compile(&self, w: &FactorWord) -> Result<GradedOp, OpError> {
        GradedOp::from_fn(self.basis()?, |v| w.apply(self, v))
    }
}

/// Smallest algebra window containing every word of grade ≤ height.
pub fn required_window(s: &GeneratorSubset, g: &Grading, height: i64) -> i64 {
    let alphabet: Vec<(u64, i64)> = s
        .ext_indices()
        .into_iter()
        .filter(|i| g.letter(*i) > 0)
        .map(|i| (letter_key(i), g.letter(i)))
        .collect();
    lyndon_words_weighted(&alphabet, height)
        .iter()
        .map(|w| w.grade())
        .max()
        .unwrap_or(0)
}

/// One factor of a product of automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// exp(ad x).
    Exp(LieElem),
    /// H₁(s₁)H₂(s₂): multiplies bidegree (a,b) by s₁ᵃ s₂ᵇ.
    Torus(Q, Q),
    /// A precomputed matrix on the window.
    Op(Arc<GradedOp>),
}

impl Factor {
    pub fn inverse(&self) -> Result<Factor, OpError> {
        Ok(match self {
            Factor::Exp(x) => Factor::Exp(x.neg()),
            Factor::Torus(s1, s2) => Factor::Torus(s1.recip(), s2.recip()),
            Factor::Op(m) => Factor::Op(Arc::new(m.inverse()?)),
        })
    }
}

/// A product f₁f₂⋯fₙ; it acts on a vector starting from fₙ.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactorWord {
    pub factors: Vec<Factor>,
}

impl FactorWord {
    pub fn new(factors: Vec<Factor>) -> Self {
        FactorWord { factors }
    }

    pub fn exp(x: LieElem) -> Self {
        FactorWord::new(vec![Factor::Exp(x)])
    }

    pub fn then(mut self, other: &FactorWord) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Result<FactorWord, OpError> {
        let mut out = Vec::with_capacity(self.factors.len());
        for f in self.factors.iter().rev() {
            out.push(f.inverse()?);
        }
        Ok(FactorWord::new(out))
    }

    /// Group commutator ABA⁻¹B⁻¹.
    pub fn commutator(a: &FactorWord, b: &FactorWord) -> Result<FactorWord, OpError> {
        Ok(a.clone().then(b).then(&a.inverse()?).then(&b.inverse()?))
    }

    pub fn apply(&self, t: &Truncation, v: &LieElem) -> Result<LieElem, OpError> {
        let mut cur = t.truncate(v);
        for f in self.factors.iter().rev() {
            cur = match f {
                Factor::Exp(x) => t.exp_apply(x, &cur)?,
                Factor::Torus(s1, s2) => torus_apply(s1, s2, &cur),
                Factor::Op(m) => m.apply(&cur)?,
            };
        }
        Ok(cur)
    }
}

pub fn torus_apply(s1: &Q, s2: &Q, v: &LieElem) -> LieElem {
    let mut out = LieElem::zero(v.window);
    for (b, c) in v.terms() {
        let d = b.bidegree();
        let f = qpow(s1, d.a) * qpow(s2, d.b);
        out.add_basis(b, c * f);
    }
    out
}

/// Anything that can be applied to a vector of a truncation.
pub trait Action {
    fn act(&self, t: &Truncation, v: &LieElem) -> Result<LieElem, OpError>;
}

impl Action for FactorWord {
    fn act(&self, t: &Truncation, v: &LieElem) -> Result<LieElem, OpError> {
        self.apply(t, v)
    }
}

impl Action for GradedOp {
    fn act(&self, _t: &Truncation, v: &LieElem) -> Result<LieElem, OpError> {
        self.apply(v)
    }
}

/// Test vectors for comparing actions when the window has no finite basis: the
/// 𝔤𝔩₂(-1) basis and every word of |λ| ≤ `lambda_bound` in the algebra.
pub fn probe_vectors(ctx: &AlgebraCtx, lambda_bound: i64) -> Vec<LieElem> {
    ctx.full_basis()
        .into_iter()
        .filter(|b| b.grade().abs() <= lambda_bound)
        .map(|b| LieElem::basis(b, Q::one(), ctx.window()))
        .collect()
}

/// Whether two actions agree on every probe, comparing the components of grade at
/// most (probe grade + height); returns the first probe where they differ.
pub fn agree_on(
    t: &Truncation,
    lhs: &dyn Action,
    rhs: &dyn Action,
    probes: &[LieElem],
) -> Result<Option<(LieElem, LieElem, LieElem)>, OpError> {
    let g = t.grading();
    for p in probes {
        let top = g.min_grade(p).unwrap_or(0) + t.height();
        let (l, r) = (g.truncate(&lhs.act(t, p)?, top), g.truncate(&rhs.act(t, p)?, top));
        if l != r {
            return Ok(Some((p.clone(), l, r)));
        }
    }
    Ok(None)
}

/// Which side of the algebra a basis element sits in, for sorting.
pub(crate) fn sign_rank(b: &Basis) -> u8 {
    match b {
        Basis::E(_) => 1,
        Basis::F(_) => 2,
        _ => 0,
    }
}

pub(crate) fn word_basis_of(s: &GeneratorSubset, g: &Grading, height: i64) -> Vec<Basis> {
    let alphabet: Vec<(u64, i64)> = s
        .ext_indices()
        .into_iter()
        .map(|i| (letter_key(i), g.letter(i)))
        .collect();
    let words = lyndon_words_weighted(&alphabet, height);
    let mut out = Vec::with_capacity(2 * words.len());
    for sign in [Sign::E, Sign::F] {
        out.extend(words.iter().map(|w| match sign {
            Sign::E => Basis::E(w.clone()),
            Sign::F => Basis::F(w.clone()),
        }));
    }
    out
}

#[cfg(test)]
mod tests;
