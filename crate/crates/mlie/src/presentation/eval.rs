//! Host representations and the verification driver.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    eta_transport, expand_macros, relation_instances, Constants, GroupWord, HostKind, PresError, RelationInstance,
    CATALOG,
};
use crate::gl2groups::{gl2neg1_action, ClosedForm, Gl2Model, Gl2Span, Gl2Symbol, QMat, Ref2x2};
use crate::monster::{AlgebraCtx, LieElem};
use crate::operators::{Action, Factor, Grading, OpError, Truncation};
use crate::roots::{ExtIndex, GeneratorSubset};
use crate::scalar::{fmt_q, Q};

/// A concrete group in which both sides of an instance are evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Host {
    Ref2x2,
    /// Automorphisms of a truncation of the algebra.
    Window {
        kind: HostKind,
        subset: GeneratorSubset,
        grading: Grading,
        height: i64,
    },
    /// 4×4 matrices on 𝔤𝔩₂(ℓ,j,k).
    Span(ExtIndex),
}

impl Host {
    pub fn kind(&self) -> HostKind {
        match self {
            Host::Ref2x2 => HostKind::Ref2x2,
            Host::Window { kind, .. } => *kind,
            Host::Span(_) => HostKind::AutGl2,
        }
    }
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Host::Ref2x2 => write!(f, "ref2x2"),
            Host::Window {
                kind,
                subset,
                grading,
                height,
            } => write!(f, "{kind}[S={subset}; g={grading}; H={height}]"),
            Host::Span(i) => write!(f, "autgl2-ljk({},{},{})", i.l, i.j, i.k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: String },
    /// The host could not evaluate the instance; not evidence against the relation.
    ConfigError { message: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Builds and caches host resources.
pub struct Evaluator {
    pub consts: Constants,
    /// Bracket window for gradings that are not positive on every letter.
    pub fallback_window: i64,
    windows: Mutex<HashMap<(GeneratorSubset, Grading, i64), Arc<Truncation>>>,
    spans: Mutex<HashMap<ExtIndex, Arc<Gl2Span>>>,
}

impl Evaluator {
    pub fn new(consts: Constants, fallback_window: i64) -> Self {
        Evaluator {
            consts,
            fallback_window,
            windows: Mutex::new(HashMap::new()),
            spans: Mutex::new(HashMap::new()),
        }
    }

    fn window(&self, subset: &GeneratorSubset, grading: &Grading, height: i64) -> Result<Arc<Truncation>, PresError> {
        let key = (subset.clone(), grading.clone(), height);
        let mut cache = self.windows.lock().expect("window cache");
        if let Some(t) = cache.get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(Truncation::for_subset(
            subset.clone(),
            grading.clone(),
            height,
            self.fallback_window,
        )?);
        cache.insert(key, t.clone());
        Ok(t)
    }

    fn span(&self, i: ExtIndex) -> Result<Arc<Gl2Span>, PresError> {
        let mut cache = self.spans.lock().expect("span cache");
        if let Some(s) = cache.get(&i) {
            return Ok(s.clone());
        }
        let subset = GeneratorSubset::new(vec![(i.j, i.k)])?;
        let ctx = AlgebraCtx::with_subset(subset, i.j + 1)?;
        let s = Arc::new(Gl2Span::new(Arc::new(ctx), i)?);
        cache.insert(i, s.clone());
        Ok(s)
    }
}

enum HostFactor {
    Plain(Factor),
    /// A GL₂(-1) symbol applied through its closed form, for windows without a basis.
    Closed(Gl2Symbol),
}

struct HostWord(Vec<HostFactor>);

impl Action for HostWord {
    fn act(&self, t: &Truncation, v: &LieElem) -> Result<LieElem, OpError> {
        let mut cur = t.truncate(v);
        for f in self.0.iter().rev() {
            cur = match f {
                HostFactor::Plain(Factor::Exp(x)) => t.exp_apply(x, &cur)?,
                HostFactor::Plain(Factor::Torus(s1, s2)) => crate::operators::torus_apply(s1, s2, &cur),
                HostFactor::Plain(Factor::Op(m)) => m.apply(&cur)?,
                HostFactor::Closed(sym) => {
                    let mut cf = ClosedForm::new(t.ctx(), sym.clone()).map_err(|e| OpError::Unsupported(e.to_string()))?;
                    t.truncate(&cf.image(&cur).map_err(|e| OpError::Unsupported(e.to_string()))?)
                }
            };
        }
        Ok(cur)
    }
}

fn config(e: impl fmt::Display) -> PresError {
    PresError::Config(e.to_string())
}

fn compile_window(t: &Truncation, w: &GroupWord) -> Result<HostWord, PresError> {
    let c = t.ctx();
    let has_basis = t.basis().is_ok();
    let mut out = Vec::new();
    for l in &w.0 {
        let factor = match &l.sym {
            Gl2Symbol::H1(s) | Gl2Symbol::H2(s) => {
                let s = if l.inv { s.recip() } else { s.clone() };
                if matches!(l.sym, Gl2Symbol::H1(_)) {
                    HostFactor::Plain(Factor::Torus(s, Q::one()))
                } else {
                    HostFactor::Plain(Factor::Torus(Q::one(), s))
                }
            }
            Gl2Symbol::X(i, u) | Gl2Symbol::Y(i, u) => {
                let x = if matches!(l.sym, Gl2Symbol::X(..)) {
                    c.make_e(i.l, i.j, i.k)?
                } else {
                    c.make_f(i.l, i.j, i.k)?
                };
                let u = if l.inv { -u } else { u.clone() };
                let x = x.scaled(&u);
                t.check_exponent(&x).map_err(config)?;
                HostFactor::Plain(Factor::Exp(x))
            }
            Gl2Symbol::Xm1(_) | Gl2Symbol::Ym1(_) | Gl2Symbol::Wm1s(_) | Gl2Symbol::Wm1 => {
                if has_basis {
                    let op = gl2neg1_action(&l.sym, t)?;
                    let op = if l.inv { op.inverse()? } else { op };
                    HostFactor::Plain(Factor::Op(Arc::new(op)))
                } else {
                    let sym = l
                        .normalized()
                        .ok_or_else(|| config(format!("{l} has no closed form without a finite window")))?;
                    HostFactor::Closed(sym)
                }
            }
            other => return Err(config(format!("{other} is not an automorphism of the algebra"))),
        };
        out.push(factor);
    }
    Ok(HostWord(out))
}

fn matrix_word(w: &GroupWord, n: usize, mut sym: impl FnMut(&Gl2Symbol) -> Result<QMat, PresError>) -> Result<QMat, PresError> {
    let mut acc = QMat::identity(n);
    for l in &w.0 {
        let m = sym(&l.sym)?;
        let m = if l.inv {
            m.inverse().ok_or_else(|| config(format!("{l} is singular")))?
        } else {
            m
        };
        acc = acc.mul(&m);
    }
    Ok(acc)
}

fn ref2x2(sym: &Gl2Symbol) -> Result<QMat, PresError> {
    let m = Ref2x2;
    Ok(match sym {
        Gl2Symbol::Xm1(u) => m.x(u)?,
        Gl2Symbol::Ym1(u) => m.y(u)?,
        Gl2Symbol::H1(s) => m.h1(s)?,
        Gl2Symbol::H2(s) => m.h2(s)?,
        Gl2Symbol::Wm1s(s) => m.w(s)?,
        Gl2Symbol::Wm1 => m.w(&Q::one())?,
        other => return Err(config(format!("{other} has no 2x2 image"))),
    })
}

fn try_evaluate(inst: &RelationInstance, ev: &Evaluator) -> Result<Verdict, PresError> {
    inst.lhs.check()?;
    inst.rhs.check()?;
    let lhs = if inst.native_lhs {
        inst.lhs.clone()
    } else {
        expand_macros(&inst.lhs, &ev.consts)
    };
    let rhs = expand_macros(&inst.rhs, &ev.consts);
    let differ = |a: &QMat, b: &QMat| {
        if a == b {
            Verdict::Holds
        } else {
            Verdict::Fails {
                witness: format!("lhs {a} vs rhs {b}"),
            }
        }
    };
    match &inst.host {
        Host::Ref2x2 => Ok(differ(&matrix_word(&lhs, 2, ref2x2)?, &matrix_word(&rhs, 2, ref2x2)?)),
        Host::Span(i) => {
            let span = ev.span(*i)?;
            let act = |s: &Gl2Symbol| span.action(s).map_err(|e| match e {
                crate::gl2groups::Gl2Error::WrongFamily(m) => config(format!("{m} is not in GL2{i:?}")),
                other => other.into(),
            });
            Ok(differ(&matrix_word(&lhs, 4, act)?, &matrix_word(&rhs, 4, act)?))
        }
        Host::Window {
            kind,
            subset,
            grading,
            height,
        } => {
            let t = ev.window(subset, grading, *height)?;
            let (lhs, rhs) = if *kind == HostKind::PMinusViaEta {
                (eta_transport(&lhs)?, eta_transport(&rhs)?)
            } else {
                (lhs, rhs)
            };
            let (l, r) = (compile_window(&t, &lhs)?, compile_window(&t, &rhs)?);
            match t.compare(&l, &r).map_err(config)? {
                None => Ok(Verdict::Holds),
                Some((v, a, b)) => Ok(Verdict::Fails {
                    witness: format!("on {v}: lhs gives {a}, rhs gives {b}"),
                }),
            }
        }
    }
}

/// Evaluates one instance; host problems become `ConfigError`.
pub fn evaluate(inst: &RelationInstance, ev: &Evaluator) -> Verdict {
    match try_evaluate(inst, ev) {
        Ok(v) => v,
        Err(e) => Verdict::ConfigError { message: e.to_string() },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationConfig {
    /// Relation ids to check; `None` means the whole catalog.
    pub relations: Option<Vec<String>>,
    pub subset: GeneratorSubset,
    pub height: i64,
    pub samples: usize,
    pub seed: u64,
    pub negate_c: bool,
    pub fallback_window: i64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for PresentationConfig {
    fn default() -> Self {
        PresentationConfig {
            relations: None,
            subset: GeneratorSubset::default_desk(),
            height: 8,
            samples: 5,
            seed: 1,
            negate_c: false,
            fallback_window: 24,
            threads: None,
        }
    }
}

impl PresentationConfig {
    fn repro(&self, id: &str, index: usize) -> String {
        format!(
            "mlie verify presentation --relations {id} --subset {} --window {} --samples {} --seed {}{} # instance {index}",
            self.subset,
            self.height,
            self.samples,
            self.seed,
            if self.negate_c { " --negate-c" } else { "" }
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub id: String,
    pub index: usize,
    pub host: String,
    pub params: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub repro: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub config: PresentationConfig,
    pub instances: Vec<InstanceReport>,
}

impl PresentationReport {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceReport> {
        self.instances.iter().filter(|r| matches!(r.verdict, Verdict::Fails { .. }))
    }

    pub fn config_errors(&self) -> impl Iterator<Item = &InstanceReport> {
        self.instances.iter().filter(|r| matches!(r.verdict, Verdict::ConfigError { .. }))
    }

    /// 0 when everything holds, 1 on a relation failure, 2 on a configuration error.
    pub fn exit_code(&self) -> i32 {
        if self.config_errors().next().is_some() {
            2
        } else if self.failures().next().is_some() {
            1
        } else {
            0
        }
    }

    /// (holds, fails, config errors) per relation id.
    pub fn tally(&self) -> BTreeMap<String, (usize, usize, usize)> {
        let mut out: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        for r in &self.instances {
            let e = out.entry(r.id.clone()).or_default();
            match r.verdict {
                Verdict::Holds => e.0 += 1,
                Verdict::Fails { .. } => e.1 += 1,
                Verdict::ConfigError { .. } => e.2 += 1,
            }
        }
        out
    }
}

/// Generates and evaluates every requested relation over the configured subset.
pub fn verify_all(config: &PresentationConfig) -> PresentationReport {
    let ids: Vec<String> = match &config.relations {
        Some(list) => list.clone(),
        None => CATALOG.iter().map(|r| r.id.to_string()).collect(),
    };
    let consts = Constants {
        negate_c: config.negate_c,
    };
    let ev = Evaluator::new(consts, config.fallback_window);
    let mut work: Vec<Result<RelationInstance, (String, PresError)>> = Vec::new();
    for id in &ids {
        match relation_instances(id, &config.subset, config.samples, config.seed, config.height, &consts) {
            Ok(list) => work.extend(list.into_iter().map(Ok)),
            Err(e) => work.push(Err((id.clone(), e))),
        }
    }
    let run = || -> Vec<InstanceReport> {
        work.par_iter()
            .map(|item| match item {
                Ok(inst) => InstanceReport {
                    id: inst.id.clone(),
                    index: inst.index,
                    host: inst.host.to_string(),
                    params: inst.params.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect(),
                    lhs: inst.lhs.to_string(),
                    rhs: inst.rhs.to_string(),
                    verdict: evaluate(inst, &ev),
                    repro: config.repro(&inst.id, inst.index),
                },
                Err((id, e)) => InstanceReport {
                    id: id.clone(),
                    index: 0,
                    host: String::new(),
                    params: BTreeMap::new(),
                    lhs: String::new(),
                    rhs: String::new(),
                    verdict: Verdict::ConfigError { message: e.to_string() },
                    repro: config.repro(id, 0),
                },
            })
            .collect()
    };
    let instances = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    PresentationReport {
        config: config.clone(),
        instances,
    }
}
