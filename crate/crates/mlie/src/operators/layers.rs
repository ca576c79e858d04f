//! Layer decomposition, BCH by log extraction, and commutator factorization.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{Action, Factor, FactorWord, OpError, Truncation};
use crate::monster::LieElem;
use crate::roots::{root_span, RootVec};
use crate::scalar::{qpow, Q};

/// φ = ⋯exp(ad x₂)exp(ad x₁): homogeneous layers with strictly increasing grades,
/// the lowest acting first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerList {
    pub n0: i64,
    pub layers: Vec<(i64, LieElem)>,
}

impl LayerList {
    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// The φ(h₁) - h₁ deviation of an action.
fn h1_deviation(t: &Truncation, phi: &dyn Action) -> Result<LieElem, OpError> {
    let h1 = t.ctx().h1();
    Ok(phi.act(t, &h1)?.sub(&h1))
}

/// The element z of one grade with exp(ad z)(h₁) - h₁ ≡ d: each component is
/// divided by -α(h₁).
fn undo_h1(d: &LieElem) -> Result<LieElem, OpError> {
    let mut out = LieElem::zero(d.window);
    for (b, c) in d.terms() {
        let a = b.bidegree().a;
        if a == 0 {
            return Err(OpError::Unsupported(format!("{b} is killed by ad h1")));
        }
        out.add_basis(b, -c / Q::from_integer(a.into()));
    }
    Ok(out)
}

/// An action followed (on the right) by the given factors.
struct Peeled<'a> {
    phi: &'a dyn Action,
    tail: FactorWord,
}

impl Action for Peeled<'_> {
    fn act(&self, t: &Truncation, v: &LieElem) -> Result<LieElem, OpError> {
        let w = self.tail.apply(t, v)?;
        self.phi.act(t, &w)
    }
}

/// Smallest shift grade(φ(y) - y) - grade(y) over the test vectors.
fn lowest_shift(t: &Truncation, phi: &dyn Action) -> Result<Option<i64>, OpError> {
    let g = t.grading();
    let mut low: Option<i64> = None;
    for v in t.test_vectors() {
        let k = g.min_grade(&v).unwrap_or(0);
        let d = phi.act(t, &v)?.sub(&v);
        if let Some(m) = g.min_grade(&d) {
            low = Some(low.map_or(m - k, |l: i64| l.min(m - k)));
        }
    }
    Ok(low)
}

/// Writes φ ∈ Û⁺ₙ₀ as a product of exponentials of homogeneous layers, reading each
/// layer off the lowest deviation of φ(h₁) after peeling the layers below it.
pub fn layer_decompose(t: &Truncation, phi: &dyn Action, n0: i64) -> Result<LayerList, OpError> {
    if let Some(shift) = lowest_shift(t, phi)? {
        if shift < n0 {
            return Err(OpError::NotUnipotent { n0, grade: shift });
        }
    }
    let g = t.grading();
    let mut peeled = Peeled {
        phi,
        tail: FactorWord::default(),
    };
    let mut layers = Vec::new();
    loop {
        let d = h1_deviation(t, &peeled)?;
        let Some(m) = g.min_grade(&d) else { break };
        if layers.last().is_some_and(|(n, _)| m <= *n) || m < n0 {
            return Err(OpError::NotUnipotent { n0, grade: m });
        }
        let x = undo_h1(&g.part(&d, m))?;
        // φ·exp(-x₁)⋯exp(-xₙ): the newest inverse acts first.
        peeled.tail.factors.push(Factor::Exp(x.neg()));
        layers.push((m, x));
    }
    if let Some((v, l, r)) = t.compare(&peeled, &FactorWord::default())? {
        return Err(OpError::Unsupported(format!(
            "residual after peeling moves {v}: {l} vs {r}"
        )));
    }
    Ok(LayerList { n0, layers })
}

/// ∏ exp(ad xₙ) with the highest layer leftmost.
pub fn recompose(layers: &LayerList) -> FactorWord {
    FactorWord::new(
        layers
            .layers
            .iter()
            .rev()
            .map(|(_, x)| Factor::Exp(x.clone()))
            .collect(),
    )
}

/// z with exp(ad x)exp(ad y) = exp(ad z) in the truncation, found by repeatedly
/// extracting the lowest deviation of exp(ad x)exp(ad y)exp(-ad z).
pub fn bch(t: &Truncation, x: &LieElem, y: &LieElem) -> Result<LieElem, OpError> {
    let g = t.grading();
    for w in [x, y] {
        if g.min_grade(w).is_some_and(|m| m <= 0) {
            return Err(OpError::NotProSummable(format!("{w} is not strictly positive")));
        }
    }
    let prod = FactorWord::new(vec![Factor::Exp(x.clone()), Factor::Exp(y.clone())]);
    let mut z = t.ctx().zero();
    let mut last = 0;
    loop {
        let psi = prod.clone().then(&FactorWord::exp(z.neg()));
        let d = h1_deviation(t, &psi)?;
        let Some(m) = g.min_grade(&d) else { break };
        if m <= last {
            return Err(OpError::NotUnipotent { n0: last + 1, grade: m });
        }
        z.add_scaled(&undo_h1(&g.part(&d, m))?, &Q::one());
        last = m;
    }
    Ok(z)
}

/// One factor exp(uⁱvʲ ad z) of a group commutator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorFactor {
    pub root: RootVec,
    pub grade: i64,
    pub i: i64,
    pub j: i64,
    /// The coefficient of uⁱvʲ, independent of u and v.
    pub z: LieElem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorReport {
    pub alpha: RootVec,
    pub beta: RootVec,
    /// Factors in product order; the last one acts first.
    pub factors: Vec<CommutatorFactor>,
    /// z_{α+β} equals [x, y].
    pub leading_ok: bool,
    /// The product of the factors equals the commutator on every test vector.
    pub recomposition_ok: bool,
    /// Re-extraction at other (u, v) gives the same coefficients.
    pub polynomial_ok: bool,
    /// Every extracted root lies in Σ(α,β).
    pub span_ok: bool,
    /// Roots of Σ(α,β) in the algebra window but above the height.
    pub beyond_height: BTreeSet<RootVec>,
}

impl CommutatorReport {
    pub fn all_ok(&self) -> bool {
        self.leading_ok && self.recomposition_ok && self.polynomial_ok && self.span_ok
    }

    pub fn factor(&self, root: &RootVec) -> Option<&CommutatorFactor> {
        self.factors.iter().find(|f| &f.root == root)
    }

    /// ∏ exp(uⁱvʲ ad z_γ) at the given parameters.
    pub fn product(&self, u: &Q, v: &Q) -> FactorWord {
        FactorWord::new(
            self.factors
                .iter()
                .map(|f| Factor::Exp(f.z.scaled(&(qpow(u, f.i) * qpow(v, f.j)))))
                .collect(),
        )
    }
}

fn single_root(x: &LieElem) -> Result<RootVec, OpError> {
    let roots = x.by_root();
    match roots.keys().collect::<Vec<_>>().as_slice() {
        [r] if !r.is_zero() => Ok((*r).clone()),
        _ => Err(OpError::Malformed(format!("{x} is not a root vector"))),
    }
}

/// (i, j) with γ = iα + jβ, searching up to `bound`.
fn coordinates(gamma: &RootVec, alpha: &RootVec, beta: &RootVec, bound: i64) -> Option<(i64, i64)> {
    (0..=bound)
        .flat_map(|i| (0..=bound).map(move |j| (i, j)))
        .find(|&(i, j)| alpha.scale(i).add(&beta.scale(j)) == *gamma)
}

/// Root-by-root factors of (exp(u ad x), exp(v ad y)) in peel order, lowest first.
fn extract(
    t: &Truncation,
    x: &LieElem,
    y: &LieElem,
    u: &Q,
    v: &Q,
) -> Result<Vec<(RootVec, i64, LieElem)>, OpError> {
    let g = t.grading();
    let comm = FactorWord::commutator(&FactorWord::exp(x.scaled(u)), &FactorWord::exp(y.scaled(v)))?;
    let mut peeled = Peeled {
        phi: &comm,
        tail: FactorWord::default(),
    };
    let mut out: Vec<(RootVec, i64, LieElem)> = Vec::new();
    loop {
        let d = h1_deviation(t, &peeled)?;
        let Some(m) = g.min_grade(&d) else { break };
        if out.last().is_some_and(|(_, n, _)| m <= *n) {
            return Err(OpError::NotUnipotent { n0: 1, grade: m });
        }
        for (root, part) in g.part(&d, m).by_root() {
            let z = undo_h1(&part)?;
            peeled.tail.factors.push(Factor::Exp(z.neg()));
            out.push((root, m, z));
        }
    }
    Ok(out)
}

/// Factors the group commutator (exp(u ad x), exp(v ad y)) of two root vectors as
/// ∏ exp(uⁱvʲ ad z_γ) over γ = iα + jβ, ordered by grade and then by root.
pub fn commutator_factor(
    t: &Truncation,
    x: &LieElem,
    y: &LieElem,
    u: &Q,
    v: &Q,
) -> Result<CommutatorReport, OpError> {
    let (alpha, beta) = (single_root(x)?, single_root(y)?);
    let g = t.grading();
    for r in [&alpha, &beta] {
        if g.root(r) <= 0 {
            return Err(OpError::Unsupported(format!("{r} is not positive for {g}")));
        }
    }
    if u.is_zero() || v.is_zero() {
        return Err(OpError::Unsupported("parameters must be nonzero".into()));
    }
    let bound = t.height() / g.root(&alpha).min(g.root(&beta)) + 1;
    let normalize = |raw: Vec<(RootVec, i64, LieElem)>, u: &Q, v: &Q| -> Result<Vec<CommutatorFactor>, OpError> {
        raw.into_iter()
            .rev()
            .map(|(root, grade, z)| {
                let (i, j) = coordinates(&root, &alpha, &beta, bound)
                    .ok_or_else(|| OpError::Unsupported(format!("{root} is not in the span of α and β")))?;
                let s = qpow(u, i) * qpow(v, j);
                Ok(CommutatorFactor {
                    root,
                    grade,
                    i,
                    j,
                    z: z.scaled(&s.recip()),
                })
            })
            .collect()
    };
    let factors = normalize(extract(t, x, y, u, v)?, u, v)?;

    let mut polynomial_ok = true;
    for (u2, v2) in [(Q::one(), Q::one()), (Q::from_integer((-2).into()), Q::new(3.into(), 2.into()))] {
        let (u2, v2) = (&u2 * u, &v2 * v);
        if normalize(extract(t, x, y, &u2, &v2)?, &u2, &v2)? != factors {
            polynomial_ok = false;
        }
    }

    let sum = alpha.add(&beta);
    let lead = t.bracket(x, y)?;
    let leading_ok = match factors.iter().find(|f| f.root == sum) {
        Some(f) => f.z == lead,
        None => lead.is_zero(),
    };

    let span = root_span(&alpha, &beta, t.ctx().window(), false).map_err(crate::monster::AlgebraError::from)?;
    let span_ok = factors.iter().all(|f| span.sigma.contains(&f.root));
    let beyond_height = span
        .sigma
        .iter()
        .filter(|r| g.root(r) > t.height())
        .cloned()
        .collect();

    let mut report = CommutatorReport {
        alpha,
        beta,
        factors,
        leading_ok,
        recomposition_ok: false,
        polynomial_ok,
        span_ok,
        beyond_height,
    };
    let comm = FactorWord::commutator(&FactorWord::exp(x.scaled(u)), &FactorWord::exp(y.scaled(v)))?;
    report.recomposition_ok = t.compare(&comm, &report.product(u, v))?.is_none();
    Ok(report)
}

/// The factors as a map γ → z_γ.
pub fn factor_map(report: &CommutatorReport) -> BTreeMap<RootVec, LieElem> {
    report.factors.iter().map(|f| (f.root.clone(), f.z.clone())).collect()
}
