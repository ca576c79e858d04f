//! Lyndon bases of the free Lie algebras n±_im, rewriting of brackets into that
//! basis, and Witt-type dimension counting.
//!
//! Letters are ordered lexicographically by (j, k, ℓ). A Lyndon word w of length at
//! least two with standard factorization w = uv stands for the bracket [b(u), b(v)].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::roots::{ExtIndex, GeneratorSubset, RootVec, SpecRoot};
use crate::scalar::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    E,
    F,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::E => 1,
            Sign::F => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::E => Sign::F,
            Sign::F => Sign::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub idx: ExtIndex,
    pub sign: Sign,
}

impl Letter {
    pub fn grade(&self) -> i64 {
        self.sign.factor() * (self.idx.j + 1)
    }
}

/// Packs (j, k, ℓ) so that integer order is the letter order.
pub fn letter_key(idx: ExtIndex) -> u64 {
    debug_assert!(idx.is_valid() && idx.j < (1 << 23) && idx.k < (1 << 24) && idx.l < (1 << 16));
    ((idx.j as u64) << 40) | ((idx.k as u64) << 16) | idx.l as u64
}

pub fn key_index(key: u64) -> ExtIndex {
    ExtIndex::new((key & 0xffff) as i64, (key >> 40) as i64, ((key >> 16) & 0xff_ffff) as i64)
}

/// A Lyndon word over the packed letters. The sign is carried by the container.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Arc<[u64]>);

impl LyndonWord {
    pub fn letter(idx: ExtIndex) -> Self {
        LyndonWord(Arc::from(vec![letter_key(idx)]))
    }

    /// Accepts only Lyndon sequences.
    pub fn from_keys(keys: Vec<u64>) -> Option<Self> {
        (!keys.is_empty() && is_lyndon(&keys)).then(|| LyndonWord(Arc::from(keys)))
    }

    pub fn keys(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_letter(&self) -> bool {
        self.0.len() == 1
    }

    pub fn letters(&self) -> impl Iterator<Item = ExtIndex> + '_ {
        self.0.iter().map(|&k| key_index(k))
    }

    pub fn first_letter(&self) -> ExtIndex {
        key_index(self.0[0])
    }

    /// Unsigned λ-grade Σ (j+1).
    pub fn grade(&self) -> i64 {
        self.letters().map(|i| i.j + 1).sum()
    }

    /// Unsigned specialized bidegree Σ (ℓ+1, j-ℓ).
    pub fn bidegree(&self) -> SpecRoot {
        self.letters()
            .fold(SpecRoot::new(0, 0), |acc, i| acc.add(&i.spec()))
    }

    /// Unsigned root Σ α_{ℓ,jk} in Q.
    pub fn root(&self) -> RootVec {
        self.letters().fold(RootVec::zero(), |acc, i| acc.add(&i.root()))
    }

    /// w = uv with v the longest proper Lyndon suffix.
    pub fn std_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        let w = &self.0;
        (1..w.len()).find(|&i| is_lyndon(&w[i..])).map(|i| {
            (
                LyndonWord(Arc::from(&w[..i])),
                LyndonWord(Arc::from(&w[i..])),
            )
        })
    }

    /// Concatenation; the caller guarantees the result is Lyndon.
    fn concat(&self, other: &LyndonWord) -> LyndonWord {
        let mut v = self.0.to_vec();
        v.extend_from_slice(&other.0);
        LyndonWord(Arc::from(v))
    }

    pub fn display_with(&self, sign: Sign) -> String {
        let c = match sign {
            Sign::E => 'e',
            Sign::F => 'f',
        };
        self.letters()
            .map(|i| format!("{c}({},{},{})", i.l, i.j, i.k))
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters()
            .map(|i| format!("({},{},{})", i.l, i.j, i.k))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// True iff `w` is strictly smaller than each of its proper suffixes.
pub fn is_lyndon(w: &[u64]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Sparse combination of Lyndon words with rational coefficients; zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeCombo(BTreeMap<LyndonWord, Q>);

impl FreeCombo {
    pub fn new() -> Self {
        FreeCombo(BTreeMap::new())
    }

    pub fn single(w: LyndonWord, c: Q) -> Self {
        let mut out = FreeCombo::new();
        out.add_term(w, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &Q)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, w: &LyndonWord) -> Q {
        self.0.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, w: LyndonWord, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FreeCombo, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (w, c) in &other.0 {
            self.add_term(w.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> FreeCombo {
        let mut out = FreeCombo::new();
        out.add_scaled(self, s);
        out
    }

    /// Components of unsigned λ-grade `g`.
    pub fn grade_part(&self, g: i64) -> FreeCombo {
        FreeCombo(
            self.0
                .iter()
                .filter(|(w, _)| w.grade() == g)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        )
    }

    /// Components grouped by unsigned bidegree.
    pub fn by_bidegree(&self) -> BTreeMap<SpecRoot, FreeCombo> {
        let mut out: BTreeMap<SpecRoot, FreeCombo> = BTreeMap::new();
        for (w, c) in &self.0 {
            out.entry(w.bidegree()).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn max_grade(&self) -> i64 {
        self.0.keys().map(|w| w.grade()).max().unwrap_or(0)
    }

    pub fn into_map(self) -> BTreeMap<LyndonWord, Q> {
        self.0
    }
}

/// Lyndon words over `alphabet` with total weight at most `max_weight`; every letter
/// weight must be positive. Built as a Hall set: uv with u < v Lyndon and either u a
/// letter or the right standard factor of u at least v.
pub fn lyndon_words_weighted(alphabet: &[(u64, i64)], max_weight: i64) -> Vec<LyndonWord> {
    let weight: HashMap<u64, i64> = alphabet.iter().cloned().collect();
    let wt = |w: &LyndonWord| -> i64 { w.keys().iter().map(|k| weight[k]).sum() };
    let mut by_weight: BTreeMap<i64, Vec<(LyndonWord, Option<LyndonWord>)>> = BTreeMap::new();
    for &(k, w) in alphabet {
        assert!(w > 0, "letter weights must be positive");
        if w <= max_weight {
            by_weight
                .entry(w)
                .or_default()
                .push((LyndonWord(Arc::from(vec![k])), None));
        }
    }
    for g in 1..=max_weight {
        let mut new = Vec::new();
        for gu in 1..g {
            let gv = g - gu;
            let (Some(us), Some(vs)) = (by_weight.get(&gu), by_weight.get(&gv)) else {
                continue;
            };
            for (u, u_right) in us {
                for (v, _) in vs {
                    if u < v && u_right.as_ref().is_none_or(|r| r >= v) {
                        new.push((u.concat(v), Some(v.clone())));
                    }
                }
            }
        }
        if !new.is_empty() {
            by_weight.entry(g).or_default().extend(new);
        }
    }
    let mut out: Vec<LyndonWord> = by_weight.into_values().flatten().map(|(w, _)| w).collect();
    out.sort_by(|a, b| wt(a).cmp(&wt(b)).then_with(|| a.cmp(b)));
    out
}

/// All Lyndon words over S's letters with λ-grade at most `max_grade`, grouped by signed
/// specialized bidegree.
pub fn lyndon_basis(
    s: &GeneratorSubset,
    sign: Sign,
    max_grade: i64,
) -> BTreeMap<SpecRoot, Vec<LyndonWord>> {
    let alphabet: Vec<(u64, i64)> = s
        .ext_indices()
        .into_iter()
        .map(|i| (letter_key(i), i.j + 1))
        .collect();
    let mut out: BTreeMap<SpecRoot, Vec<LyndonWord>> = BTreeMap::new();
    for w in lyndon_words_weighted(&alphabet, max_grade) {
        let b = w.bidegree();
        let b = if sign == Sign::F { b.neg() } else { b };
        out.entry(b).or_default().push(w);
    }
    out
}

/// Memoized rewriting of brackets of Lyndon basis elements.
#[derive(Default)]
pub struct FreeLie {
    memo: Mutex<HashMap<(LyndonWord, LyndonWord), FreeCombo>>,
}

impl FreeLie {
    pub fn new() -> Self {
        FreeLie::default()
    }

    /// [b(u), b(v)] in the Lyndon basis, without truncation.
    pub fn bracket_words(&self, u: &LyndonWord, v: &LyndonWord) -> FreeCombo {
        match u.cmp(v) {
            std::cmp::Ordering::Equal => FreeCombo::new(),
            std::cmp::Ordering::Greater => self.bracket_words(v, u).scaled(&-Q::one()),
            std::cmp::Ordering::Less => {
                let key = (u.clone(), v.clone());
                if let Some(hit) = self.memo.lock().unwrap().get(&key) {
                    return hit.clone();
                }
                let out = self.bracket_ordered(u, v);
                self.memo.lock().unwrap().insert(key, out.clone());
                out
            }
        }
    }

    fn bracket_ordered(&self, u: &LyndonWord, v: &LyndonWord) -> FreeCombo {
        let Some((u1, u2)) = u.std_factorization() else {
            return FreeCombo::single(u.concat(v), Q::one());
        };
        if u2 >= *v {
            return FreeCombo::single(u.concat(v), Q::one());
        }
        // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
        let mut out = self.bracket_word_combo(&u1, &self.bracket_words(&u2, v));
        let t = self.bracket_word_combo(&u2, &self.bracket_words(&u1, v));
        out.add_scaled(&t, &-Q::one());
        out
    }

    pub fn bracket_word_combo(&self, u: &LyndonWord, x: &FreeCombo) -> FreeCombo {
        let mut out = FreeCombo::new();
        for (w, c) in x.terms() {
            out.add_scaled(&self.bracket_words(u, w), c);
        }
        out
    }

    /// Bilinear bracket; products whose grade exceeds `window` are dropped and flagged.
    pub fn bracket_free(&self, x: &FreeCombo, y: &FreeCombo, window: i64) -> (FreeCombo, bool) {
        let mut out = FreeCombo::new();
        let mut truncated = false;
        for (u, cu) in x.terms() {
            for (v, cv) in y.terms() {
                if u.grade() + v.grade() > window {
                    truncated = true;
                    continue;
                }
                out.add_scaled(&self.bracket_words(u, v), &(cu * cv));
            }
        }
        (out, truncated)
    }

    pub fn cache_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }
}

/// Dimension of the bidegree-(m,n) part of the free Lie algebra whose generators at
/// bidegree (a,b) number `gencount(a,b)`. Uses -log(1-g) = Σ_β P(β)x^β and
/// dim L_β = Σ_{d | β} μ(d)/d · P(β/d).
pub fn graded_dim_witt(m: i64, n: i64, gencount: &dyn Fn(i64, i64) -> BigInt) -> BigInt {
    assert!(m >= 1 && n >= 1, "bidegree must be positive");
    let (mu, nu) = (m as usize, n as usize);
    let mut g = vec![vec![BigInt::zero(); nu + 1]; mu + 1];
    for (a, row) in g.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            if a + b > 0 {
                *cell = gencount(a as i64, b as i64);
            }
        }
    }
    // P(β) for every β ≤ (m,n), from the powers of g
    let mut p = vec![vec![BigRational::zero(); nu + 1]; mu + 1];
    let mut power = g.clone();
    for k in 1..=(m + n) {
        for a in 0..=mu {
            for b in 0..=nu {
                if !power[a][b].is_zero() {
                    p[a][b] += BigRational::new(power[a][b].clone(), BigInt::from(k));
                }
            }
        }
        power = mul2(&power, &g, mu, nu);
    }
    let gcd = m.gcd(&n);
    let mut acc = BigRational::zero();
    for d in 1..=gcd {
        if gcd % d != 0 {
            continue;
        }
        let mob = mobius(d);
        if mob == 0 {
            continue;
        }
        let term = &p[(m / d) as usize][(n / d) as usize] * BigRational::new(BigInt::from(mob), BigInt::from(d));
        acc += term;
    }
    assert!(acc.is_integer(), "Witt count must be integral");
    acc.to_integer()
}

/// gencount(a,b) = c(a+b-1) for a, b ≥ 1: the letters e_{ℓ,jk} of 𝔪 sit at (ℓ+1, j-ℓ).
pub fn true_gencounts(
    table: &crate::jfun::JCoeffTable,
) -> impl Fn(i64, i64) -> BigInt + '_ {
    move |a, b| {
        if a >= 1 && b >= 1 {
            table.get(a + b - 1).cloned().expect("J table too short for gencount")
        } else {
            BigInt::zero()
        }
    }
}

fn mul2(x: &[Vec<BigInt>], y: &[Vec<BigInt>], mu: usize, nu: usize) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::zero(); nu + 1]; mu + 1];
    for a in 0..=mu {
        for b in 0..=nu {
            if x[a][b].is_zero() {
                continue;
            }
            for c in 0..=(mu - a) {
                for d in 0..=(nu - b) {
                    if !y[c][d].is_zero() {
                        out[a + c][b + d] += &x[a][b] * &y[c][d];
                    }
                }
            }
        }
    }
    out
}

fn mobius(mut n: i64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn w(idx: &[(i64, i64, i64)]) -> LyndonWord {
        LyndonWord::from_keys(idx.iter().map(|&(l, j, k)| letter_key(ExtIndex::new(l, j, k))).collect())
            .unwrap()
    }

    #[test]
    fn basis_examples() {
        let s = GeneratorSubset::new(vec![(1, 2)]).unwrap();
        let b = lyndon_basis(&s, Sign::E, 4);
        assert_eq!(b[&SpecRoot::new(1, 1)].len(), 2);
        assert_eq!(b[&SpecRoot::new(2, 2)], vec![w(&[(0, 1, 1), (0, 1, 2)])]);
        assert_eq!(b.values().map(Vec::len).sum::<usize>(), 3);

        let s = GeneratorSubset::new(vec![(2, 1)]).unwrap();
        let b = lyndon_basis(&s, Sign::E, 3);
        assert_eq!(b.values().map(Vec::len).sum::<usize>(), 2);

        assert!(lyndon_basis(&GeneratorSubset::empty(), Sign::E, 8).is_empty());
        let f = lyndon_basis(&GeneratorSubset::new(vec![(1, 1)]).unwrap(), Sign::F, 2);
        assert!(f.contains_key(&SpecRoot::new(-1, -1)));
    }

    #[test]
    fn factorization() {
        let x = w(&[(0, 1, 1), (0, 1, 1), (0, 2, 1)]);
        let (u, v) = x.std_factorization().unwrap();
        assert_eq!(u, w(&[(0, 1, 1)]));
        assert_eq!(v, w(&[(0, 1, 1), (0, 2, 1)]));
    }

    #[test]
    fn small_brackets() {
        let fl = FreeLie::new();
        let a = w(&[(0, 1, 1)]);
        let b = w(&[(0, 1, 2)]);
        assert!(fl.bracket_words(&a, &a).is_zero());
        assert_eq!(fl.bracket_words(&a, &b), FreeCombo::single(w(&[(0, 1, 1), (0, 1, 2)]), q(1)));
        assert_eq!(fl.bracket_words(&b, &a), FreeCombo::single(w(&[(0, 1, 1), (0, 1, 2)]), q(-1)));
    }

    #[test]
    fn jacobi_on_three_letters() {
        let fl = FreeLie::new();
        let xs = [w(&[(0, 1, 1)]), w(&[(0, 1, 2)]), w(&[(0, 2, 1)])];
        let one = |x: &LyndonWord| FreeCombo::single(x.clone(), q(1));
        let mut total = FreeCombo::new();
        for i in 0..3 {
            let (x, y, z) = (&xs[i], &xs[(i + 1) % 3], &xs[(i + 2) % 3]);
            let (yz, _) = fl.bracket_free(&one(y), &one(z), 100);
            let (t, _) = fl.bracket_free(&one(x), &yz, 100);
            total.add_scaled(&t, &q(1));
        }
        assert!(total.is_zero());
    }

    #[test]
    fn truncation_is_flagged() {
        let fl = FreeLie::new();
        let a = FreeCombo::single(w(&[(0, 1, 1)]), q(1));
        let b = FreeCombo::single(w(&[(0, 2, 1)]), q(1));
        let (out, trunc) = fl.bracket_free(&a, &b, 4);
        assert!(out.is_zero() && trunc);
    }

    #[test]
    fn witt_true_counts() {
        let t = crate::jfun::j_coefficients(6).unwrap();
        let g = true_gencounts(&t);
        assert_eq!(graded_dim_witt(1, 1, &g), BigInt::from(196884));
        let two_two = graded_dim_witt(2, 2, &g);
        assert_eq!(two_two, BigInt::from(20245856256u64));
        assert_eq!(
            two_two,
            crate::scalar::binom(196884, 2) + BigInt::from(864299970u64)
        );
        assert_eq!(&graded_dim_witt(2, 3, &g), t.get(6).unwrap());
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
