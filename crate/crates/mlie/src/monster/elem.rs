//! Elements of the truncated algebra: 𝔤𝔩₂(-1) coordinates plus E- and F-word combinations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::freelie::{key_index, letter_key, FreeCombo, LyndonWord, Sign};
use crate::roots::{ExtIndex, RootVec, SpecRoot};
use crate::scalar::{fmt_q, parse_q, Q};

/// A basis vector of 𝔪 in the chosen model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    H1,
    H2,
    Em1,
    Fm1,
    E(LyndonWord),
    F(LyndonWord),
}

impl Basis {
    pub fn grade(&self) -> i64 {
        match self {
            Basis::E(w) => w.grade(),
            Basis::F(w) => -w.grade(),
            _ => 0,
        }
    }

    pub fn bidegree(&self) -> SpecRoot {
        match self {
            Basis::H1 | Basis::H2 => SpecRoot::new(0, 0),
            Basis::Em1 => SpecRoot::new(1, -1),
            Basis::Fm1 => SpecRoot::new(-1, 1),
            Basis::E(w) => w.bidegree(),
            Basis::F(w) => w.bidegree().neg(),
        }
    }

    pub fn root(&self) -> RootVec {
        match self {
            Basis::H1 | Basis::H2 => RootVec::zero(),
            Basis::Em1 => RootVec::alpha_neg1(),
            Basis::Fm1 => RootVec::alpha_neg1().neg(),
            Basis::E(w) => w.root(),
            Basis::F(w) => w.root().neg(),
        }
    }

    fn gl2_slot(&self) -> Option<usize> {
        match self {
            Basis::H1 => Some(0),
            Basis::H2 => Some(1),
            Basis::Em1 => Some(2),
            Basis::Fm1 => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::H1 => write!(f, "h1"),
            Basis::H2 => write!(f, "h2"),
            Basis::Em1 => write!(f, "e(-1)"),
            Basis::Fm1 => write!(f, "f(-1)"),
            Basis::E(w) => write!(f, "{}", w.display_with(Sign::E)),
            Basis::F(w) => write!(f, "{}", w.display_with(Sign::F)),
        }
    }
}

/// Exact combination of h₁, h₂, e₋₁, f₋₁ and Lyndon words in e- and f-letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieElem {
    pub gl2: [Q; 4],
    pub pos: FreeCombo,
    pub neg: FreeCombo,
    pub window: i64,
}

impl LieElem {
    pub fn zero(window: i64) -> Self {
        LieElem {
            gl2: [Q::zero(), Q::zero(), Q::zero(), Q::zero()],
            pos: FreeCombo::new(),
            neg: FreeCombo::new(),
            window,
        }
    }

    pub fn basis(b: Basis, c: Q, window: i64) -> Self {
        let mut out = LieElem::zero(window);
        out.add_basis(b, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.gl2.iter().all(Zero::is_zero) && self.pos.is_zero() && self.neg.is_zero()
    }

    pub fn add_basis(&mut self, b: Basis, c: Q) {
        if let Some(i) = b.gl2_slot() {
            self.gl2[i] += c;
            return;
        }
        match b {
            Basis::E(w) => self.pos.add_term(w, c),
            Basis::F(w) => self.neg.add_term(w, c),
            _ => unreachable!(),
        }
    }

    pub fn coeff(&self, b: &Basis) -> Q {
        if let Some(i) = b.gl2_slot() {
            return self.gl2[i].clone();
        }
        match b {
            Basis::E(w) => self.pos.coeff(w),
            Basis::F(w) => self.neg.coeff(w),
            _ => unreachable!(),
        }
    }

    pub fn terms(&self) -> Vec<(Basis, Q)> {
        let mut out = Vec::new();
        for (i, b) in [Basis::H1, Basis::H2, Basis::Em1, Basis::Fm1].into_iter().enumerate() {
            if !self.gl2[i].is_zero() {
                out.push((b, self.gl2[i].clone()));
            }
        }
        out.extend(self.pos.terms().map(|(w, c)| (Basis::E(w.clone()), c.clone())));
        out.extend(self.neg.terms().map(|(w, c)| (Basis::F(w.clone()), c.clone())));
        out
    }

    pub fn add_scaled(&mut self, other: &LieElem, s: &Q) {
        if s.is_zero() {
            return;
        }
        for i in 0..4 {
            self.gl2[i] += &other.gl2[i] * s;
        }
        self.pos.add_scaled(&other.pos, s);
        self.neg.add_scaled(&other.neg, s);
    }

    pub fn add(&self, other: &LieElem) -> LieElem {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &LieElem) -> LieElem {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scaled(&self, s: &Q) -> LieElem {
        let mut out = LieElem::zero(self.window);
        out.add_scaled(self, s);
        out
    }

    pub fn neg(&self) -> LieElem {
        self.scaled(&-Q::one())
    }

    pub fn with_window(&self, window: i64) -> LieElem {
        let mut out = self.clone();
        out.window = window;
        out
    }

    /// Keeps only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Basis) -> bool) -> LieElem {
        let mut out = LieElem::zero(self.window);
        for (b, c) in self.terms() {
            if keep(&b) {
                out.add_basis(b, c);
            }
        }
        out
    }

    pub fn grade_part(&self, g: i64) -> LieElem {
        self.filter(|b| b.grade() == g)
    }

    pub fn max_abs_grade(&self) -> i64 {
        self.terms().iter().map(|(b, _)| b.grade().abs()).max().unwrap_or(0)
    }

    pub fn by_grade(&self) -> BTreeMap<i64, LieElem> {
        let mut out: BTreeMap<i64, LieElem> = BTreeMap::new();
        for (b, c) in self.terms() {
            out.entry(b.grade())
                .or_insert_with(|| LieElem::zero(self.window))
                .add_basis(b, c);
        }
        out
    }

    /// Components grouped by root in Q; the Cartan part sits at the zero vector.
    pub fn by_root(&self) -> BTreeMap<RootVec, LieElem> {
        let mut out: BTreeMap<RootVec, LieElem> = BTreeMap::new();
        for (b, c) in self.terms() {
            out.entry(b.root())
                .or_insert_with(|| LieElem::zero(self.window))
                .add_basis(b, c);
        }
        out
    }

    /// The common bidegree when every term shares one.
    pub fn homogeneous_bidegree(&self) -> Option<SpecRoot> {
        let ts = self.terms();
        let first = ts.first()?.0.bidegree();
        ts.iter().all(|(b, _)| b.bidegree() == first).then_some(first)
    }

    pub fn to_json(&self) -> LieElemJson {
        let words = |combo: &FreeCombo| {
            combo
                .terms()
                .map(|(w, c)| WordTermJson {
                    word: w.letters().map(|i| [i.l, i.j, i.k]).collect(),
                    c: fmt_q(c),
                })
                .collect()
        };
        LieElemJson {
            schema: LIEELEM_SCHEMA.to_string(),
            window: self.window,
            h1: fmt_q(&self.gl2[0]),
            h2: fmt_q(&self.gl2[1]),
            em1: fmt_q(&self.gl2[2]),
            fm1: fmt_q(&self.gl2[3]),
            pos: words(&self.pos),
            neg: words(&self.neg),
        }
    }

    pub fn from_json(j: &LieElemJson) -> Option<LieElem> {
        if j.schema != LIEELEM_SCHEMA {
            return None;
        }
        let mut out = LieElem::zero(j.window);
        for (i, s) in [&j.h1, &j.h2, &j.em1, &j.fm1].into_iter().enumerate() {
            out.gl2[i] = parse_q(s)?;
        }
        for (terms, sign) in [(&j.pos, Sign::E), (&j.neg, Sign::F)] {
            for t in terms {
                let keys = t
                    .word
                    .iter()
                    .map(|&[l, jj, k]| {
                        let idx = ExtIndex::new(l, jj, k);
                        idx.is_valid().then(|| letter_key(idx))
                    })
                    .collect::<Option<Vec<_>>>()?;
                let w = LyndonWord::from_keys(keys)?;
                let c = parse_q(&t.c)?;
                out.add_basis(if sign == Sign::E { Basis::E(w) } else { Basis::F(w) }, c);
            }
        }
        Some(out)
    }
}

pub const LIEELEM_SCHEMA: &str = "mlie.lieelem/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTermJson {
    pub word: Vec<[i64; 3]>,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieElemJson {
    pub schema: String,
    pub window: i64,
    pub h1: String,
    pub h2: String,
    pub em1: String,
    pub fm1: String,
    pub pos: Vec<WordTermJson>,
    pub neg: Vec<WordTermJson>,
}

impl fmt::Display for LieElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = self.terms();
        if ts.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in ts.iter().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_q(&mag))?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Parses a run of letters `e(l,j,k)e(l,j,k)...` of one sign into a Lyndon word.
pub(crate) fn parse_word(s: &str) -> Option<(Sign, LyndonWord)> {
    let mut sign = None;
    let mut keys = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let sg = match rest.as_bytes()[0] {
            b'e' => Sign::E,
            b'f' => Sign::F,
            _ => return None,
        };
        if *sign.get_or_insert(sg) != sg {
            return None;
        }
        let close = rest.find(')')?;
        let inner = rest.get(2..close)?;
        if !rest[1..].starts_with('(') {
            return None;
        }
        let nums = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().ok())
            .collect::<Option<Vec<_>>>()?;
        let idx = match nums.as_slice() {
            [l, j, k] => ExtIndex::new(*l, *j, *k),
            _ => return None,
        };
        if !idx.is_valid() {
            return None;
        }
        keys.push(letter_key(idx));
        rest = &rest[close + 1..];
    }
    Some((sign?, LyndonWord::from_keys(keys)?))
}

pub(crate) fn word_letters(w: &LyndonWord) -> Vec<ExtIndex> {
    w.keys().iter().map(|&k| key_index(k)).collect()
}
