//! Finite window bases and column-sparse operators on them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{sign_rank, word_basis_of, Grading, OpError};
use crate::monster::{AlgebraCtx, Basis, LieElem};
use crate::roots::GeneratorSubset;
use crate::scalar::{fmt_q, parse_q, Q};

/// The basis vectors of grade in [-height, height] for a grading positive on every
/// e-letter, sorted by grade and then h₁, h₂, e₋₁, f₋₁, e-words, f-words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowBasis {
    subset: GeneratorSubset,
    grading: Grading,
    height: i64,
    window: i64,
    elems: Vec<Basis>,
    grades: Vec<i64>,
    index: HashMap<Basis, usize>,
}

impl WindowBasis {
    pub fn new(ctx: &AlgebraCtx, grading: &Grading, height: i64) -> Result<Self, OpError> {
        let subset = ctx.subset().clone();
        if !grading.positive_on(&subset) {
            return Err(OpError::NoFiniteBasis(grading.clone()));
        }
        let mut elems = vec![Basis::H1, Basis::H2, Basis::Em1, Basis::Fm1];
        elems.retain(|b| grading.basis(b).abs() <= height);
        elems.extend(word_basis_of(&subset, grading, height));
        let need = elems.iter().map(|b| b.grade().abs()).max().unwrap_or(0);
        if need > ctx.window() {
            return Err(OpError::WindowTooSmall {
                have: ctx.window(),
                need,
            });
        }
        elems.sort_by(|x, y| {
            (grading.basis(x), sign_rank(x))
                .cmp(&(grading.basis(y), sign_rank(y)))
                .then_with(|| x.cmp(y))
        });
        let grades = elems.iter().map(|b| grading.basis(b)).collect();
        let index = elems.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Ok(WindowBasis {
            subset,
            grading: grading.clone(),
            height,
            window: ctx.window(),
            elems,
            grades,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Basis] {
        &self.elems
    }

    pub fn grade_of(&self, i: usize) -> i64 {
        self.grades[i]
    }

    pub fn index_of(&self, b: &Basis) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn subset(&self) -> &GeneratorSubset {
        &self.subset
    }

    pub fn vector(&self, i: usize) -> LieElem {
        LieElem::basis(self.elems[i].clone(), Q::one(), self.window)
    }

    /// Coordinates of x; components outside the window must lie above the height.
    pub fn coords(&self, x: &LieElem) -> Result<BTreeMap<usize, Q>, OpError> {
        let mut out = BTreeMap::new();
        for (b, c) in x.terms() {
            match self.index_of(&b) {
                Some(i) => {
                    out.insert(i, c);
                }
                None if self.grading.basis(&b) > self.height => {}
                None => return Err(OpError::Malformed(format!("{b} is not in the window basis"))),
            }
        }
        Ok(out)
    }

    pub fn elem(&self, coords: &BTreeMap<usize, Q>) -> LieElem {
        let mut out = LieElem::zero(self.window);
        for (i, c) in coords {
            out.add_basis(self.elems[*i].clone(), c.clone());
        }
        out
    }

    /// Indices grouped by grade, in basis order.
    pub fn blocks(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, g) in self.grades.iter().enumerate() {
            out.entry(*g).or_default().push(i);
        }
        out
    }
}

/// A linear operator on a window, stored by columns: column j is the image of basis
/// vector j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedOp {
    basis: Arc<WindowBasis>,
    cols: Vec<BTreeMap<usize, Q>>,
}

pub const GRADEDOP_SCHEMA: &str = "mlie.gradedop/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletJson(pub usize, pub usize, pub String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedOpJson {
    pub schema: String,
    pub subset: String,
    pub grading: [i64; 2],
    pub twist: Vec<[i64; 3]>,
    pub height: i64,
    pub window: i64,
    /// source grade → target grade → (row, column, value) with row and column
    /// counted inside their grade blocks.
    pub blocks: BTreeMap<String, BTreeMap<String, Vec<TripletJson>>>,
}

impl GradedOp {
    pub fn identity(basis: Arc<WindowBasis>) -> Self {
        let cols = (0..basis.len())
            .map(|i| BTreeMap::from([(i, Q::one())]))
            .collect();
        GradedOp { basis, cols }
    }

    pub fn zero(basis: Arc<WindowBasis>) -> Self {
        let cols = vec![BTreeMap::new(); basis.len()];
        GradedOp { basis, cols }
    }

    /// Column j is f(basis vector j).
    pub fn from_fn(
        basis: Arc<WindowBasis>,
        mut f: impl FnMut(&LieElem) -> Result<LieElem, OpError>,
    ) -> Result<Self, OpError> {
        let mut cols = Vec::with_capacity(basis.len());
        for i in 0..basis.len() {
            let img = f(&basis.vector(i))?;
            cols.push(basis.coords(&img)?);
        }
        Ok(GradedOp { basis, cols })
    }

    pub fn basis(&self) -> &Arc<WindowBasis> {
        &self.basis
    }

    pub fn entry(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, Q> {
        &self.cols[col]
    }

    fn same_window(&self, other: &GradedOp) -> Result<(), OpError> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis {
            Ok(())
        } else {
            Err(OpError::Mismatch)
        }
    }

    pub fn apply(&self, x: &LieElem) -> Result<LieElem, OpError> {
        let v = self.basis.coords(x)?;
        Ok(self.basis.elem(&self.apply_coords(&v)))
    }

    fn apply_coords(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, c) in v {
            for (i, a) in &self.cols[*j] {
                let e = out.entry(*i).or_insert_with(Q::zero);
                *e += a * c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &GradedOp) -> Result<GradedOp, OpError> {
        self.same_window(other)?;
        let cols = other.cols.iter().map(|c| self.apply_coords(c)).collect();
        Ok(GradedOp {
            basis: self.basis.clone(),
            cols,
        })
    }

    pub fn add(&self, other: &GradedOp) -> Result<GradedOp, OpError> {
        self.same_window(other)?;
        let mut cols = self.cols.clone();
        for (c, o) in cols.iter_mut().zip(&other.cols) {
            for (i, v) in o {
                let e = c.entry(*i).or_insert_with(Q::zero);
                *e += v;
            }
            c.retain(|_, v| !v.is_zero());
        }
        Ok(GradedOp {
            basis: self.basis.clone(),
            cols,
        })
    }

    pub fn scaled(&self, s: &Q) -> GradedOp {
        let cols = if s.is_zero() {
            vec![BTreeMap::new(); self.cols.len()]
        } else {
            self.cols
                .iter()
                .map(|c| c.iter().map(|(i, v)| (*i, v * s)).collect())
                .collect()
        };
        GradedOp {
            basis: self.basis.clone(),
            cols,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, c)| c.len() == 1 && c.get(&j).is_some_and(One::is_one))
    }

    /// Whether every entry maps a grade up or keeps it.
    pub fn is_nondecreasing(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, c)| {
            c.keys()
                .all(|&i| self.basis.grade_of(i) >= self.basis.grade_of(j))
        })
    }

    /// Equality modulo operators that raise every grade by more than `shift`: entries
    /// from grade k to grade k′ are compared when k′ - k ≤ shift.
    pub fn equal_up_to(&self, other: &GradedOp, shift: i64) -> Result<bool, OpError> {
        self.same_window(other)?;
        let b = &self.basis;
        Ok(self.cols.iter().zip(&other.cols).enumerate().all(|(j, (x, y))| {
            let top = b.grade_of(j) + shift;
            let lo = |c: &BTreeMap<usize, Q>| -> Vec<(usize, Q)> {
                c.iter()
                    .filter(|(i, _)| b.grade_of(**i) <= top)
                    .map(|(i, v)| (*i, v.clone()))
                    .collect()
            };
            lo(x) == lo(y)
        }))
    }

    /// First column where the operators differ, as (source, self image, other image).
    pub fn first_difference(&self, other: &GradedOp) -> Option<(Basis, LieElem, LieElem)> {
        (0..self.cols.len()).find(|&j| self.cols[j] != other.cols[j]).map(|j| {
            (
                self.basis.elems()[j].clone(),
                self.basis.elem(&self.cols[j]),
                self.basis.elem(&other.cols[j]),
            )
        })
    }

    /// Inverse of a grade-nondecreasing operator: invert each diagonal block, then
    /// solve upward through the grades.
    pub fn inverse(&self) -> Result<GradedOp, OpError> {
        if !self.is_nondecreasing() {
            return self.inverse_dense();
        }
        let b = &self.basis;
        let blocks: Vec<Vec<usize>> = b.blocks().into_values().collect();
        let n = b.len();
        let mut inv: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); n];
        let mut diag_inv: Vec<Vec<Vec<Q>>> = Vec::with_capacity(blocks.len());
        for blk in &blocks {
            let m: Vec<Vec<Q>> = blk
                .iter()
                .map(|&r| blk.iter().map(|&c| self.entry(r, c)).collect())
                .collect();
            diag_inv.push(invert_dense(m).ok_or(OpError::Singular)?);
        }
        // Column by column: A X = I, X lower block-triangular in grade order.
        for (kb, blk) in blocks.iter().enumerate() {
            for (ci, &col) in blk.iter().enumerate() {
                // X restricted to block kb, column col: D_k^{-1} e_col
                let mut x: BTreeMap<usize, Q> = BTreeMap::new();
                for (ri, &row) in blk.iter().enumerate() {
                    let v = diag_inv[kb][ri][ci].clone();
                    if !v.is_zero() {
                        x.insert(row, v);
                    }
                }
                for (ib, iblk) in blocks.iter().enumerate().skip(kb + 1) {
                    // rhs = -Σ_{m<i} A_{i,m} X_{m}
                    let mut rhs = vec![Q::zero(); iblk.len()];
                    let pos: HashMap<usize, usize> = iblk.iter().enumerate().map(|(p, &r)| (r, p)).collect();
                    for (m, xv) in &x {
                        for (r, a) in &self.cols[*m] {
                            if let Some(&p) = pos.get(r) {
                                rhs[p] -= a * xv;
                            }
                        }
                    }
                    for (ri, &row) in iblk.iter().enumerate() {
                        let mut acc = Q::zero();
                        for (p, r) in rhs.iter().enumerate() {
                            if !r.is_zero() {
                                acc += &diag_inv[ib][ri][p] * r;
                            }
                        }
                        if !acc.is_zero() {
                            x.insert(row, acc);
                        }
                    }
                }
                inv[col] = x;
            }
        }
        Ok(GradedOp {
            basis: self.basis.clone(),
            cols: inv,
        })
    }

    fn inverse_dense(&self) -> Result<GradedOp, OpError> {
        let n = self.basis.len();
        let m: Vec<Vec<Q>> = (0..n).map(|r| (0..n).map(|c| self.entry(r, c)).collect()).collect();
        let inv = invert_dense(m).ok_or(OpError::Singular)?;
        let cols = (0..n)
            .map(|c| {
                (0..n)
                    .filter(|&r| !inv[r][c].is_zero())
                    .map(|r| (r, inv[r][c].clone()))
                    .collect()
            })
            .collect();
        Ok(GradedOp {
            basis: self.basis.clone(),
            cols,
        })
    }

    /// Whether op([b₁,b₂]) = [op(b₁), op(b₂)] for basis pairs whose bracket lies in the
    /// window, compared in the grades the truncation determines exactly; returns the
    /// first failing pair.
    pub fn automorphism_defect(
        &self,
        t: &super::Truncation,
    ) -> Result<Option<(Basis, Basis)>, OpError> {
        let b = &self.basis;
        let n = b.len();
        let h = b.height();
        let images: Vec<LieElem> = (0..n).map(|j| b.elem(&self.cols[j])).collect();
        for i in 0..n {
            for j in i + 1..n {
                let (gi, gj) = (b.grade_of(i), b.grade_of(j));
                if (gi + gj).abs() > h {
                    continue;
                }
                let top = h + gi.min(gj).min(0);
                let g = b.grading();
                let lhs = g.truncate(&self.apply(&t.bracket(&b.vector(i), &b.vector(j))?)?, top);
                let rhs = g.truncate(&t.bracket(&images[i], &images[j])?, top);
                if lhs != rhs {
                    return Ok(Some((b.elems()[i].clone(), b.elems()[j].clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> GradedOpJson {
        let b = &self.basis;
        let blocks = b.blocks();
        let local: HashMap<usize, usize> = blocks
            .values()
            .flat_map(|v| v.iter().enumerate().map(|(p, &i)| (i, p)))
            .collect();
        let mut out: BTreeMap<String, BTreeMap<String, Vec<TripletJson>>> = BTreeMap::new();
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                out.entry(b.grade_of(j).to_string())
                    .or_default()
                    .entry(b.grade_of(*i).to_string())
                    .or_default()
                    .push(TripletJson(local[i], local[&j], fmt_q(v)));
            }
        }
        GradedOpJson {
            schema: GRADEDOP_SCHEMA.to_string(),
            subset: b.subset().to_string(),
            grading: [b.grading().a, b.grading().b],
            twist: b.grading().twist.iter().map(|(&(j, k), &t)| [j, k, t]).collect(),
            height: b.height(),
            window: b.window,
            blocks: out,
        }
    }

    /// Rebuilds an operator on the window described by the JSON, which must match `basis`.
    pub fn from_json(j: &GradedOpJson, basis: Arc<WindowBasis>) -> Result<GradedOp, OpError> {
        let bad = |m: &str| OpError::Malformed(m.to_string());
        if j.schema != GRADEDOP_SCHEMA {
            return Err(bad("unknown schema"));
        }
        if j.subset != basis.subset().to_string()
            || j.grading != [basis.grading().a, basis.grading().b]
            || j.height != basis.height()
        {
            return Err(OpError::Mismatch);
        }
        let blocks = basis.blocks();
        let mut op = GradedOp::zero(basis.clone());
        for (src, targets) in &j.blocks {
            let sg: i64 = src.parse().map_err(|_| bad("grade key"))?;
            let sb = blocks.get(&sg).ok_or_else(|| bad("source grade"))?;
            for (tgt, trips) in targets {
                let tg: i64 = tgt.parse().map_err(|_| bad("grade key"))?;
                let tb = blocks.get(&tg).ok_or_else(|| bad("target grade"))?;
                for TripletJson(r, c, v) in trips {
                    let (&row, &col) = (tb.get(*r).ok_or_else(|| bad("row"))?, sb.get(*c).ok_or_else(|| bad("col"))?);
                    let v = parse_q(v).ok_or_else(|| bad("rational"))?;
                    if !v.is_zero() {
                        op.cols[col].insert(row, v);
                    }
                }
            }
        }
        Ok(op)
    }
}

/// Gauss-Jordan inverse of a square matrix.
pub(crate) fn invert_dense(mut m: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let piv = m[c][c].recip();
        for k in 0..n {
            m[c][k] = &m[c][k] * &piv;
            inv[c][k] = &inv[c][k] * &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..n {
                    let (a, b) = (&m[c][k] * &f, &inv[c][k] * &f);
                    m[r][k] -= a;
                    inv[r][k] -= b;
                }
            }
        }
    }
    Some(inv)
}
