//! Index sets, the root lattice Q, specialization onto II₁,₁, root membership,
//! root spans, the real reflection and positive root systems.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::jfun::{JCoeffTable, JfunError};
use crate::scalar::{q, Q};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum RootError {
    #[error("window must be nonnegative, got {0}")]
    NegativeWindow(i64),
    #[error("{0} is not a root")]
    NotARoot(RootVec),
    #[error("functional vanishes on the specialized root ({0}, {1})")]
    Vanishes(i64, i64),
    #[error("no positive root system found containing {0} and {1}")]
    SearchExhausted(RootVec, RootVec),
    #[error("cannot parse root expression: {0}")]
    Parse(String),
    #[error("invalid generator subset: {0}")]
    BadSubset(String),
    #[error(transparent)]
    Table(#[from] JfunError),
}

/// An index of I: the real index (-1,1) or an imaginary index (j,k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenIndex {
    Re,
    Im(i64, i64),
}

impl GenIndex {
    fn j(self) -> i64 {
        match self {
            GenIndex::Re => -1,
            GenIndex::Im(j, _) => j,
        }
    }
}

/// An element (ℓ,j,k) of the extended index set, 0 ≤ ℓ < j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtIndex {
    pub l: i64,
    pub j: i64,
    pub k: i64,
}

impl ExtIndex {
    pub fn new(l: i64, j: i64, k: i64) -> Self {
        ExtIndex { l, j, k }
    }

    pub fn is_valid(&self) -> bool {
        self.j >= 1 && self.k >= 1 && 0 <= self.l && self.l < self.j
    }

    /// α_{ℓ,jk} = ℓα₋₁ + α_{jk}.
    pub fn root(&self) -> RootVec {
        RootVec::ext(self.l, self.j, self.k)
    }

    pub fn spec(&self) -> SpecRoot {
        SpecRoot::new(self.l + 1, self.j - self.l)
    }
}

/// Sparse integer vector ℓα₋₁ + Σ c_{jk} α_{jk}; zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVec {
    pub coeff_neg1: i64,
    pub imag: BTreeMap<(i64, i64), i64>,
}

impl RootVec {
    pub fn zero() -> Self {
        RootVec::default()
    }

    pub fn alpha_neg1() -> Self {
        RootVec {
            coeff_neg1: 1,
            imag: BTreeMap::new(),
        }
    }

    pub fn simple(j: i64, k: i64) -> Self {
        RootVec::ext(0, j, k)
    }

    pub fn ext(l: i64, j: i64, k: i64) -> Self {
        let mut imag = BTreeMap::new();
        imag.insert((j, k), 1);
        RootVec {
            coeff_neg1: l,
            imag,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_neg1 == 0 && self.imag.is_empty()
    }

    pub fn add(&self, other: &RootVec) -> RootVec {
        let mut out = self.clone();
        out.coeff_neg1 += other.coeff_neg1;
        for (&key, &c) in &other.imag {
            let e = out.imag.entry(key).or_insert(0);
            *e += c;
            if *e == 0 {
                out.imag.remove(&key);
            }
        }
        out
    }

    pub fn scale(&self, s: i64) -> RootVec {
        if s == 0 {
            return RootVec::zero();
        }
        RootVec {
            coeff_neg1: self.coeff_neg1 * s,
            imag: self.imag.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }

    pub fn neg(&self) -> RootVec {
        self.scale(-1)
    }

    pub fn sub(&self, other: &RootVec) -> RootVec {
        self.add(&other.neg())
    }

    /// λ-grade a+b of the specialization (a,b).
    pub fn lambda(&self) -> i64 {
        specialize(self).lambda()
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.coeff_neg1 != 0 {
            terms.push((self.coeff_neg1, "a(-1)".to_string()));
        }
        for (&(j, k), &c) in &self.imag {
            terms.push((c, format!("a({j},{k})")));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, name)) in terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

impl FromStr for RootVec {
    type Err = RootError;

    /// Grammar: `l*a(-1) + c1*a(j1,k1) - ...`; `a(l,j,k)` abbreviates ℓα₋₁ + α_{jk}.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RootError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = RootVec::zero();
        for (sgn, term) in split_signed_terms(&compact).ok_or_else(err)? {
            let (coef, atom) = match term.split_once('*') {
                Some((c, a)) => (c.parse::<i64>().map_err(|_| err())?, a),
                None => (1, term),
            };
            let inner = atom
                .strip_prefix("a(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(err)?;
            let nums = inner
                .split(',')
                .map(|t| t.parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err())?;
            let piece = match nums.as_slice() {
                [-1] => RootVec::alpha_neg1(),
                [j, k] if *j >= 1 && *k >= 1 => RootVec::simple(*j, *k),
                [l, j, k] if ExtIndex::new(*l, *j, *k).is_valid() => RootVec::ext(*l, *j, *k),
                _ => return Err(err()),
            };
            out = out.add(&piece.scale(sgn * coef));
        }
        Ok(out)
    }
}

/// Splits `x+y-z` into signed terms, ignoring signs nested inside parentheses.
pub(crate) fn split_signed_terms(s: &str) -> Option<Vec<(i64, &str)>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i64;
    let mut i = 0usize;
    if bytes.first() == Some(&b'-') {
        sign = -1;
        start = 1;
        i = 1;
    } else if bytes.first() == Some(&b'+') {
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'*' | b'/') => {
                out.push((sign, &s[start..i]));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if start >= bytes.len() || depth != 0 {
        return None;
    }
    out.push((sign, &s[start..]));
    Some(out)
}

/// A point of II₁,₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpecRoot {
    pub a: i64,
    pub b: i64,
}

impl SpecRoot {
    pub fn new(a: i64, b: i64) -> Self {
        SpecRoot { a, b }
    }

    pub fn lambda(&self) -> i64 {
        self.a + self.b
    }

    /// ⟨(a,b),(a',b')⟩ = -(ab' + a'b).
    pub fn form(&self, other: &SpecRoot) -> i64 {
        -(self.a * other.b + other.a * self.b)
    }

    pub fn neg(&self) -> SpecRoot {
        SpecRoot::new(-self.a, -self.b)
    }

    pub fn add(&self, o: &SpecRoot) -> SpecRoot {
        SpecRoot::new(self.a + o.a, self.b + o.b)
    }

    /// Membership in the specialized root system: (±1,∓1) or both coordinates of one nonzero sign.
    pub fn is_root(&self) -> bool {
        (self.a == 1 && self.b == -1)
            || (self.a == -1 && self.b == 1)
            || (self.a > 0 && self.b > 0)
            || (self.a < 0 && self.b < 0)
    }
}

/// A finite choice of imaginary generators: K_j copies at each listed j.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSubset {
    entries: Vec<(i64, i64)>,
}

impl GeneratorSubset {
    pub fn new(mut entries: Vec<(i64, i64)>) -> Result<Self, RootError> {
        entries.sort();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(RootError::BadSubset(format!("repeated j={}", w[0].0)));
            }
        }
        if let Some(&(j, kj)) = entries.iter().find(|&&(j, kj)| j < 1 || kj < 1) {
            return Err(RootError::BadSubset(format!("entry ({j},{kj})")));
        }
        Ok(GeneratorSubset { entries })
    }

    pub fn empty() -> Self {
        GeneratorSubset {
            entries: Vec::new(),
        }
    }

    /// j ≤ 3 with two generators at j = 1, so pairs with k ≠ q occur.
    pub fn default_desk() -> Self {
        GeneratorSubset::new(vec![(1, 2), (2, 1), (3, 1)]).unwrap()
    }

    pub fn entries(&self) -> &[(i64, i64)] {
        &self.entries
    }

    pub fn max_j(&self) -> i64 {
        self.entries.last().map_or(0, |e| e.0)
    }

    pub fn contains(&self, idx: &ExtIndex) -> bool {
        idx.is_valid()
            && self
                .entries
                .iter()
                .any(|&(j, kj)| j == idx.j && idx.k <= kj)
    }

    /// Simple imaginary indices (j,k).
    pub fn simple_indices(&self) -> Vec<(i64, i64)> {
        self.entries
            .iter()
            .flat_map(|&(j, kj)| (1..=kj).map(move |k| (j, k)))
            .collect()
    }

    /// Extended indices sorted lexicographically by (j,k,ℓ).
    pub fn ext_indices(&self) -> Vec<ExtIndex> {
        self.simple_indices()
            .into_iter()
            .flat_map(|(j, k)| (0..j).map(move |l| ExtIndex::new(l, j, k)))
            .collect()
    }

    pub fn validate(&self, table: &JCoeffTable) -> Result<(), RootError> {
        for &(j, kj) in &self.entries {
            let c = table.get(j)?;
            if BigInt::from(kj) > *c {
                return Err(RootError::BadSubset(format!("K_{j}={kj} exceeds c({j})={c}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(j, k)| format!("{j}:{k}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GeneratorSubset {
    type Err = RootError;

    /// `j:K_j,j:K_j,...`; a bare `j` means K_j = 1; an empty string is the empty subset.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(GeneratorSubset::empty());
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let bad = || RootError::BadSubset(s.to_string());
            let (j, kj) = match part.split_once(':') {
                Some((j, k)) => (j.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
                None => (part.trim().parse().map_err(|_| bad())?, 1),
            };
            entries.push((j, kj));
        }
        GeneratorSubset::new(entries)
    }
}

/// a_{jk,pq} = -(j+p), with the real index counted as j = -1.
pub fn cartan_entry(x: GenIndex, y: GenIndex) -> i64 {
    -(x.j() + y.j())
}

/// The bilinear extension of [`cartan_entry`] to Q.
pub fn q_form(x: &RootVec, y: &RootVec) -> i64 {
    let terms = |r: &RootVec| {
        let mut v = vec![(GenIndex::Re, r.coeff_neg1)];
        v.extend(r.imag.iter().map(|(&(j, k), &c)| (GenIndex::Im(j, k), c)));
        v
    };
    let (tx, ty) = (terms(x), terms(y));
    tx.iter()
        .flat_map(|&(a, ca)| ty.iter().map(move |&(b, cb)| ca * cb * cartan_entry(a, b)))
        .sum()
}

/// α₋₁ ↦ (1,-1), α_{jk} ↦ (1,j).
pub fn specialize(alpha: &RootVec) -> SpecRoot {
    let mut a = alpha.coeff_neg1;
    let mut b = -alpha.coeff_neg1;
    for (&(j, _), &c) in &alpha.imag {
        a += c;
        b += c * j;
    }
    SpecRoot::new(a, b)
}

/// Membership in Δ⁺_im, by the three conditions on ℓ and the c_{jk}.
pub fn is_positive_imaginary_root(alpha: &RootVec) -> bool {
    let l = alpha.coeff_neg1;
    let cs: Vec<(i64, i64)> = alpha.imag.iter().map(|(&(j, _), &c)| (j, c)).collect();
    if l < 0 || cs.is_empty() || cs.iter().any(|&(_, c)| c < 0) {
        return false;
    }
    let bound: i64 = cs.iter().map(|&(j, c)| (j - 1) * c).sum();
    if l > bound {
        return false;
    }
    if let [(j, c)] = cs.as_slice() {
        return *c == 1 || (0 < l && l < (j - 1) * c);
    }
    true
}

pub fn is_root(alpha: &RootVec) -> bool {
    let re = alpha.imag.is_empty() && alpha.coeff_neg1.abs() == 1;
    re || is_positive_imaginary_root(alpha) || is_positive_imaginary_root(&alpha.neg())
}

/// dim 𝔪_{(m,n)} read off the specialized root.
pub fn root_mult_spec(r: SpecRoot, table: &JCoeffTable) -> Result<BigInt, RootError> {
    let (m, n) = (r.a, r.b);
    if (m, n) == (1, -1) || (m, n) == (-1, 1) {
        return Ok(BigInt::from(1));
    }
    if (m >= 1 && n >= 1) || (m <= -1 && n <= -1) {
        return Ok(table.get(m * n)?.clone());
    }
    Ok(BigInt::zero())
}

/// The root span Σ(α,β) restricted to |λ| ≤ window, plus S(α,β) on request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpan {
    pub sigma: BTreeSet<RootVec>,
    pub s_set: Option<BTreeSet<RootVec>>,
}

pub fn root_span(
    alpha: &RootVec,
    beta: &RootVec,
    window: i64,
    compare_s: bool,
) -> Result<RootSpan, RootError> {
    if window < 0 {
        return Err(RootError::NegativeWindow(window));
    }
    for r in [alpha, beta] {
        if !is_root(r) {
            return Err(RootError::NotARoot(r.clone()));
        }
    }
    let in_window = |g: &RootVec| g.lambda().abs() <= window && is_root(g);
    let mut sigma = BTreeSet::new();
    let mut queue = VecDeque::new();
    let first = alpha.add(beta);
    if in_window(&first) {
        sigma.insert(first.clone());
        queue.push_back(first);
    }
    while let Some(g) = queue.pop_front() {
        for step in [alpha, beta] {
            let next = g.add(step);
            if in_window(&next) && sigma.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let s_set = compare_s.then(|| {
        let bound = 2 * window + 4;
        let mut s = BTreeSet::new();
        for a in 1..=bound {
            for b in 1..=bound {
                let g = alpha.scale(a).add(&beta.scale(b));
                if in_window(&g) {
                    s.insert(g);
                }
            }
        }
        s
    });
    Ok(RootSpan { sigma, s_set })
}

/// The reflection in α₋₁: the α₋₁ coefficient becomes Σ(j-1)c_{jk} - ℓ.
pub fn reflect(alpha: &RootVec) -> RootVec {
    let mut out = alpha.clone();
    let s: i64 = alpha.imag.iter().map(|(&(j, _), &c)| (j - 1) * c).sum();
    out.coeff_neg1 = s - alpha.coeff_neg1;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecReflection {
    Re,
    Im,
}

pub fn reflect_spec(which: SpecReflection, r: SpecRoot) -> SpecRoot {
    match which {
        SpecReflection::Re => SpecRoot::new(r.b, r.a),
        SpecReflection::Im => SpecRoot::new(-r.b, -r.a),
    }
}

/// p + r√2 with rational p, r; signs are decided exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub p: Q,
    pub r: Q,
}

impl QuadNum {
    pub fn int(n: i64) -> Self {
        QuadNum { p: q(n), r: q(0) }
    }

    pub fn sqrt2(p: Q, r: Q) -> Self {
        QuadNum { p, r }
    }

    pub fn is_rational(&self) -> bool {
        self.r.is_zero()
    }

    pub fn mul_int(&self, n: i64) -> QuadNum {
        QuadNum {
            p: &self.p * q(n),
            r: &self.r * q(n),
        }
    }

    pub fn add(&self, o: &QuadNum) -> QuadNum {
        QuadNum {
            p: &self.p + &o.p,
            r: &self.r + &o.r,
        }
    }

    pub fn signum(&self) -> i32 {
        let sp = sgn(&self.p);
        let sr = sgn(&self.r);
        if sr == 0 {
            return sp;
        }
        if sp == 0 || sp == sr {
            return sr;
        }
        // opposite signs: compare p² with 2r²
        let d = &self.p * &self.p - q(2) * &self.r * &self.r;
        sp * sgn(&d)
    }
}

fn sgn(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = crate::scalar::fmt_q(&self.p);
        if self.r.is_zero() {
            write!(f, "{p}")
        } else {
            write!(f, "{p}+{}*sqrt2", crate::scalar::fmt_q(&self.r))
        }
    }
}

/// How a positive root system is cut out of Δ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PositiveSystemDesc {
    StdPos,
    StdNeg,
    ImagPosPlusNegRe,
    ImagNegPlusPosRe,
    /// π(x,y) = a·x + b·y.
    Functional { a: QuadNum, b: QuadNum },
}

impl PositiveSystemDesc {
    pub fn integer(a: i64, b: i64) -> Self {
        PositiveSystemDesc::Functional {
            a: QuadNum::int(a),
            b: QuadNum::int(b),
        }
    }

    /// Coefficients (a,b) of the functional.
    pub fn coefficients(&self) -> (QuadNum, QuadNum) {
        use PositiveSystemDesc::*;
        match self {
            StdPos => (QuadNum::int(1), QuadNum::int(0)),
            StdNeg => (QuadNum::int(-1), QuadNum::int(0)),
            ImagPosPlusNegRe => (QuadNum::int(0), QuadNum::int(1)),
            ImagNegPlusPosRe => (QuadNum::int(0), QuadNum::int(-1)),
            Functional { a, b } => (a.clone(), b.clone()),
        }
    }

    /// Integer coefficients when the functional is rational, cleared of denominators.
    pub fn integer_coefficients(&self) -> Option<(i64, i64)> {
        let (a, b) = self.coefficients();
        if !a.is_rational() || !b.is_rational() {
            return None;
        }
        let l = num_integer::Integer::lcm(a.p.denom(), b.p.denom());
        let ai = crate::scalar::to_i64(&(&a.p * Q::from_integer(l.clone())))?;
        let bi = crate::scalar::to_i64(&(&b.p * Q::from_integer(l)))?;
        Some((ai, bi))
    }

    pub fn eval(&self, r: SpecRoot) -> QuadNum {
        let (a, b) = self.coefficients();
        a.mul_int(r.a).add(&b.mul_int(r.b))
    }
}

impl fmt::Display for PositiveSystemDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PositiveSystemDesc::*;
        match self {
            StdPos => write!(f, "StdPos"),
            StdNeg => write!(f, "StdNeg"),
            ImagPosPlusNegRe => write!(f, "ImagPosPlusNegRe"),
            ImagNegPlusPosRe => write!(f, "ImagNegPlusPosRe"),
            Functional { a, b } => write!(f, "Functional({a},{b})"),
        }
    }
}

/// A positive system validated on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSystem {
    pub desc: PositiveSystemDesc,
    pub window: i64,
}

impl PositiveSystem {
    pub fn contains_spec(&self, r: SpecRoot) -> bool {
        r.is_root() && self.desc.eval(r).signum() > 0
    }

    pub fn contains(&self, alpha: &RootVec) -> bool {
        is_root(alpha) && self.desc.eval(specialize(alpha)).signum() > 0
    }
}

/// Specialized roots with |λ| ≤ window.
pub fn window_spec_roots(window: i64) -> Vec<SpecRoot> {
    let mut out = Vec::new();
    for a in -window - 1..=window + 1 {
        for b in -window - 1..=window + 1 {
            let r = SpecRoot::new(a, b);
            if r.is_root() && r.lambda().abs() <= window {
                out.push(r);
            }
        }
    }
    out
}

pub fn positive_system(desc: PositiveSystemDesc, window: i64) -> Result<PositiveSystem, RootError> {
    if window < 0 {
        return Err(RootError::NegativeWindow(window));
    }
    // scan the positive half first so the reported witness is the natural one
    let mut roots = window_spec_roots(window);
    roots.sort_by_key(|r| (r.a < 0 || r.b < 0, r.lambda().abs(), r.a));
    if let Some(w) = roots.iter().find(|r| desc.eval(**r).signum() == 0) {
        return Err(RootError::Vanishes(w.a, w.b));
    }
    Ok(PositiveSystem { desc, window })
}

pub fn positive_system_containing(
    alpha: &RootVec,
    beta: &RootVec,
    window: i64,
) -> Result<PositiveSystemDesc, RootError> {
    for r in [alpha, beta] {
        if !is_root(r) {
            return Err(RootError::NotARoot(r.clone()));
        }
    }
    let (sa, sb) = (specialize(alpha), specialize(beta));
    let accept = |d: &PositiveSystemDesc| {
        d.eval(sa).signum() > 0 && d.eval(sb).signum() > 0 && positive_system(d.clone(), window).is_ok()
    };
    use PositiveSystemDesc::*;
    for d in [StdPos, ImagPosPlusNegRe, StdNeg, ImagNegPlusPosRe] {
        if accept(&d) {
            return Ok(d);
        }
    }
    let bound = 4 * window.max(1) + 8;
    for radius in 1..=bound {
        for a in -radius..=radius {
            for b in -radius..=radius {
                if a.abs().max(b.abs()) != radius || num_integer::gcd(a, b) != 1 {
                    continue;
                }
                let d = PositiveSystemDesc::integer(a, b);
                if accept(&d) {
                    return Ok(d);
                }
            }
        }
    }
    for den in 1..=16i64 {
        for num in 1..=16i64 {
            for sa_ in [1, -1] {
                for sr in [1, -1] {
                    let d = Functional {
                        a: QuadNum::int(sa_),
                        b: QuadNum::sqrt2(q(0), crate::scalar::qf(sr * num, den)),
                    };
                    if accept(&d) {
                        return Ok(d);
                    }
                }
            }
        }
    }
    Err(RootError::SearchExhausted(alpha.clone(), beta.clone()))
}
