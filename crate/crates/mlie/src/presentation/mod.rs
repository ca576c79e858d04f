//! The generators and relations of G(𝔪): words in the symbols, the w̃ macros, the
//! relation catalog with its host representations, and the verification driver.

mod eval;
mod instances;

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::gl2groups::{Gl2Error, Gl2Symbol};
use crate::monster::{c_lj, AlgebraError};
use crate::operators::OpError;
use crate::roots::RootError;
use crate::scalar::Q;

pub use eval::{evaluate, verify_all, Evaluator, InstanceReport, PresentationConfig, PresentationReport, Verdict};
pub use instances::relation_instances;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PresError {
    #[error("unknown relation id {0}")]
    UnknownId(String),
    /// The host cannot represent a symbol or cannot be built; not a relation failure.
    #[error("host configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Gl2(#[from] Gl2Error),
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A symbol or its formal inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub sym: Gl2Symbol,
    pub inv: bool,
}

impl Letter {
    pub fn new(sym: Gl2Symbol) -> Self {
        Letter { sym, inv: false }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            sym: self.sym.clone(),
            inv: !self.inv,
        }
    }

    /// The same element written without a formal inverse, when the symbol family is
    /// closed under inversion.
    pub fn normalized(&self) -> Option<Gl2Symbol> {
        if !self.inv {
            return Some(self.sym.clone());
        }
        Some(match &self.sym {
            Gl2Symbol::Xm1(u) => Gl2Symbol::Xm1(-u),
            Gl2Symbol::Ym1(u) => Gl2Symbol::Ym1(-u),
            Gl2Symbol::H1(s) => Gl2Symbol::H1(s.recip()),
            Gl2Symbol::H2(s) => Gl2Symbol::H2(s.recip()),
            Gl2Symbol::X(i, u) => Gl2Symbol::X(*i, -u),
            Gl2Symbol::Y(i, u) => Gl2Symbol::Y(*i, -u),
            _ => return None,
        })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.sym)
        } else {
            write!(f, "{}", self.sym)
        }
    }
}

/// A word in the generators; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupWord(pub Vec<Letter>);

impl GroupWord {
    pub fn of(syms: impl IntoIterator<Item = Gl2Symbol>) -> Self {
        GroupWord(syms.into_iter().map(Letter::new).collect())
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn then(mut self, other: &GroupWord) -> Self {
        self.0.extend(other.0.iter().cloned());
        self
    }

    /// g h g⁻¹.
    pub fn conjugate(g: &GroupWord, h: &GroupWord) -> Self {
        g.clone().then(h).then(&g.inverse())
    }

    /// (a, b) = a b a⁻¹ b⁻¹.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> Self {
        a.clone().then(b).then(&a.inverse()).then(&b.inverse())
    }

    pub fn check(&self) -> Result<(), PresError> {
        for l in &self.0 {
            l.sym.check()?;
        }
        Ok(())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Where a relation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HostKind {
    /// GL₂(-1) acting on a λ-window of the algebra.
    #[serde(rename = "autm-gl2neg1")]
    AutM,
    /// GL₂(ℓ,j,k) acting on 𝔤𝔩₂(ℓ,j,k) by 4×4 matrices.
    #[serde(rename = "autgl2-ljk")]
    AutGl2,
    /// P̂⁺ on a λ-window.
    #[serde(rename = "pplus-window")]
    PPlus,
    /// P̂⁻, evaluated by transporting both words through η into P̂⁺.
    #[serde(rename = "pminus-via-eta")]
    PMinusViaEta,
    /// Û^Π for a positive system chosen per instance.
    #[serde(rename = "upi-window")]
    UPi,
    /// 2×2 matrices.
    #[serde(rename = "ref2x2")]
    Ref2x2,
}

impl HostKind {
    pub fn tag(&self) -> &'static str {
        match self {
            HostKind::AutM => "autm-gl2neg1",
            HostKind::AutGl2 => "autgl2-ljk",
            HostKind::PPlus => "pplus-window",
            HostKind::PMinusViaEta => "pminus-via-eta",
            HostKind::UPi => "upi-window",
            HostKind::Ref2x2 => "ref2x2",
        }
    }
}

impl fmt::Display for HostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationSpec {
    pub id: &'static str,
    pub host: HostKind,
    /// Follows from the others; listed and checked all the same.
    pub derivable: bool,
}

const fn spec(id: &'static str, host: HostKind) -> RelationSpec {
    RelationSpec {
        id,
        host,
        derivable: false,
    }
}

const fn derived(id: &'static str, host: HostKind) -> RelationSpec {
    RelationSpec {
        id,
        host,
        derivable: true,
    }
}

use HostKind::{AutGl2, AutM, PMinusViaEta, PPlus, UPi};

pub const CATALOG: [RelationSpec; 38] = [
    spec("H:1a", AutM),
    spec("H:1b", AutM),
    spec("H:2", AutM),
    spec("Re:0", AutM),
    spec("Re:1a", AutM),
    spec("Re:1b", AutM),
    spec("Re:2", AutM),
    spec("Re:3", AutM),
    spec("Re:4a", AutM),
    spec("Re:4b", AutM),
    spec("Re:5a", AutM),
    spec("Re:5b", AutM),
    spec("Re:6a", AutM),
    spec("Re:6b", AutM),
    spec("Re:6c", AutM),
    spec("Re:6d", AutM),
    spec("Im:0", AutGl2),
    spec("Im:1a", AutGl2),
    spec("Im:1b", AutGl2),
    spec("Im:2", AutGl2),
    spec("Im:3", AutGl2),
    spec("Im:4a", AutGl2),
    spec("Im:4b", AutGl2),
    spec("Im:5a", AutGl2),
    spec("Im:5b", AutGl2),
    spec("Im:6a", AutGl2),
    spec("Im:6b", AutGl2),
    spec("Im:6c", AutGl2),
    spec("Im:6d", AutGl2),
    spec("U:1a", PPlus),
    spec("U:1b", PMinusViaEta),
    spec("U:1c", UPi),
    spec("U:1d", UPi),
    spec("U:2", UPi),
    spec("U:3a", PPlus),
    spec("U:3b", PMinusViaEta),
    derived("U:4a", AutM),
    derived("U:4b", AutGl2),
];

/// The checked-in manifest of relation ids and hosts.
pub const MANIFEST: &str = include_str!("../../data/relations.manifest");

pub fn lookup(id: &str) -> Result<&'static RelationSpec, PresError> {
    CATALOG
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| PresError::UnknownId(id.to_string()))
}

/// The structure constants c_{ℓj} used when writing words, optionally corrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Constants {
    pub negate_c: bool,
}

impl Constants {
    pub fn c(&self, l: i64, j: i64) -> Q {
        let c = c_lj(l, j);
        if self.negate_c {
            -c
        } else {
            c
        }
    }
}

/// Replaces every w̃ symbol by its three-factor definition.
pub fn expand_macros(w: &GroupWord, consts: &Constants) -> GroupWord {
    let mut out = Vec::new();
    for l in &w.0 {
        let three = match &l.sym {
            Gl2Symbol::Wm1s(s) => Some(wm1_word(s)),
            Gl2Symbol::Wm1 => Some(wm1_word(&Q::one())),
            Gl2Symbol::Ws(i, s) => Some(w_word(*i, s, &consts.c(i.l, i.j))),
            Gl2Symbol::W(i) => Some(w_word(*i, &Q::one(), &consts.c(i.l, i.j))),
            _ => None,
        };
        match three {
            Some(word) if l.inv => out.extend(word.inverse().0),
            Some(word) => out.extend(word.0),
            None => out.push(l.clone()),
        }
    }
    GroupWord(out)
}

fn wm1_word(s: &Q) -> GroupWord {
    GroupWord::of([
        Gl2Symbol::Xm1(s.clone()),
        Gl2Symbol::Ym1(-s.recip()),
        Gl2Symbol::Xm1(s.clone()),
    ])
}

fn w_word(i: crate::roots::ExtIndex, s: &Q, c: &Q) -> GroupWord {
    GroupWord::of([
        Gl2Symbol::X(i, s.clone()),
        Gl2Symbol::Y(i, -s.recip() / c),
        Gl2Symbol::X(i, s.clone()),
    ])
}

/// The image of a macro-free word under η: X ↔ Y in each family and torus
/// parameters inverted.
pub fn eta_transport(w: &GroupWord) -> Result<GroupWord, PresError> {
    let mut out = Vec::new();
    for l in &w.0 {
        let sym = match &l.sym {
            Gl2Symbol::Xm1(u) => Gl2Symbol::Ym1(u.clone()),
            Gl2Symbol::Ym1(u) => Gl2Symbol::Xm1(u.clone()),
            Gl2Symbol::H1(s) => Gl2Symbol::H1(s.recip()),
            Gl2Symbol::H2(s) => Gl2Symbol::H2(s.recip()),
            Gl2Symbol::X(i, u) => Gl2Symbol::Y(*i, u.clone()),
            Gl2Symbol::Y(i, u) => Gl2Symbol::X(*i, u.clone()),
            other => return Err(PresError::Config(format!("expand {other} before transport"))),
        };
        out.push(Letter { sym, inv: l.inv });
    }
    Ok(GroupWord(out))
}

/// lhs = rhs, to be checked in `host`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    pub id: String,
    pub index: usize,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
    pub params: Vec<(String, Q)>,
    pub host: eval::Host,
    /// Evaluate the left side with the host's own w̃ rather than the macro.
    pub native_lhs: bool,
}
