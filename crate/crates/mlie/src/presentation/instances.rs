//! Seeded instances of each relation, with the host each one is evaluated in.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::eval::Host;
use super::{lookup, Constants, GroupWord, HostKind, PresError, RelationInstance};
use crate::gl2groups::Gl2Symbol;
use crate::monster::sample::small_rational;
use crate::operators::Grading;
use crate::roots::{positive_system_containing, ExtIndex, GeneratorSubset, RootVec};
use crate::scalar::{qpow, sign, Q};

use Gl2Symbol::{Wm1s, Ym1, H1, H2, W, Wm1, Ws, X, Xm1, Y};

fn w(syms: impl IntoIterator<Item = Gl2Symbol>) -> GroupWord {
    GroupWord::of(syms)
}

fn conj(g: Gl2Symbol, h: Gl2Symbol) -> GroupWord {
    GroupWord::conjugate(&w([g]), &w([h]))
}

fn comm(a: Gl2Symbol, b: Gl2Symbol) -> GroupWord {
    GroupWord::commutator(&w([a]), &w([b]))
}

/// The subset holding exactly the families of the given letters.
fn families(idx: &[ExtIndex]) -> Result<GeneratorSubset, PresError> {
    let mut top: BTreeMap<i64, i64> = BTreeMap::new();
    for i in idx {
        let e = top.entry(i.j).or_insert(0);
        *e = (*e).max(i.k);
    }
    Ok(GeneratorSubset::new(top.into_iter().collect())?)
}

/// A grading positive on both roots, from the positive-system search.
fn grading_containing(a: &RootVec, b: &RootVec, height: i64) -> Result<Grading, PresError> {
    let desc = positive_system_containing(a, b, height)?;
    Grading::from_desc(&desc).ok_or_else(|| PresError::Config(format!("{desc:?} has irrational coefficients")))
}

/// A grading positive on e_{ℓ,jk} and on f_{m,pq} for different families: λ on
/// every letter except those of (p,q), which get grade -(p+1).
fn twisted(p: i64, q: i64) -> Grading {
    let mut g = Grading::lambda();
    g.twist.insert((p, q), -2 * (p + 1));
    g
}

struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// A nonzero rational with numerator and denominator at most 7 in size.
    fn u(&mut self) -> Q {
        small_rational(&mut self.rng, 7)
    }

    /// A small nonzero torus base, kept small since it is raised to powers.
    fn t(&mut self) -> Q {
        small_rational(&mut self.rng, 3)
    }
}

/// Deterministic instances of one relation: `samples` parameter draws for every
/// index triple (or pair of triples) of the subset that the relation quantifies over.
pub fn relation_instances(
    id: &str,
    subset: &GeneratorSubset,
    samples: usize,
    seed: u64,
    height: i64,
    consts: &Constants,
) -> Result<Vec<RelationInstance>, PresError> {
    let spec = lookup(id)?;
    // Each relation draws from its own stream so adding ids never shifts the others.
    let salt = id.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let mut smp = Sampler {
        rng: ChaCha8Rng::seed_from_u64(seed ^ salt),
    };
    let lambda_host = |kind: HostKind| Host::Window {
        kind,
        subset: subset.clone(),
        grading: Grading::lambda(),
        height,
    };
    let mut out = Vec::new();
    let mut push = |lhs: GroupWord, rhs: GroupWord, params: Vec<(&str, Q)>, host: Host, native: bool| {
        out.push(RelationInstance {
            id: id.to_string(),
            index: out.len(),
            lhs,
            rhs,
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            host,
            native_lhs: native,
        });
    };
    let letters = subset.ext_indices();
    let tops: Vec<ExtIndex> = subset
        .simple_indices()
        .into_iter()
        .map(|(j, k)| ExtIndex::new(j - 1, j, k))
        .collect();
    let bottoms: Vec<ExtIndex> = subset
        .simple_indices()
        .into_iter()
        .map(|(j, k)| ExtIndex::new(0, j, k))
        .collect();

    if id.starts_with("H:") || id.starts_with("Re:") || id == "U:4a" {
        for _ in 0..samples {
            let (u, v, s, t) = (smp.u(), smp.u(), smp.t(), smp.t());
            let host = lambda_host(HostKind::AutM);
            let (lhs, rhs, params) = match id {
                "H:1a" => (w([H1(s.clone()), H1(t.clone())]), w([H1(&s * &t)]), vec![("s", s), ("t", t)]),
                "H:1b" => (w([H2(s.clone()), H2(t.clone())]), w([H2(&s * &t)]), vec![("s", s), ("t", t)]),
                "H:2" => (
                    w([H1(s.clone()), H2(t.clone())]),
                    w([H2(t.clone()), H1(s.clone())]),
                    vec![("s", s), ("t", t)],
                ),
                "Re:0" => (
                    w([Wm1s(u.clone())]),
                    w([Xm1(u.clone()), Ym1(-u.recip()), Xm1(u.clone())]),
                    vec![("s", u)],
                ),
                "Re:1a" => (w([Xm1(u.clone()), Xm1(v.clone())]), w([Xm1(&u + &v)]), vec![("u", u), ("v", v)]),
                "Re:1b" => (w([Ym1(u.clone()), Ym1(v.clone())]), w([Ym1(&u + &v)]), vec![("u", u), ("v", v)]),
                "Re:2" => (
                    w([Ym1(-&v), Xm1(u.clone()), Ym1(v.clone())]),
                    w([Xm1(-v.recip()), Ym1(-(&v * &v) * &u), Xm1(v.recip())]),
                    vec![("s", u), ("t", v)],
                ),
                "Re:3" => (
                    w([Wm1s(u.clone()), Wm1]),
                    w([H1(-&u), H2(-u.recip())]),
                    vec![("s", u)],
                ),
                "Re:4a" => (conj(Wm1, Xm1(u.clone())), w([Ym1(-&u)]), vec![("u", u)]),
                "Re:4b" => (conj(Wm1, Ym1(u.clone())), w([Xm1(-&u)]), vec![("u", u)]),
                "Re:5a" => (conj(Wm1, H1(s.clone())), w([H2(s.clone())]), vec![("s", s)]),
                "Re:5b" => (conj(Wm1, H2(s.clone())), w([H1(s.clone())]), vec![("s", s)]),
                "Re:6a" => (conj(H1(s.clone()), Xm1(u.clone())), w([Xm1(&s * &u)]), vec![("s", s), ("u", u)]),
                "Re:6b" => (conj(H2(s.clone()), Xm1(u.clone())), w([Xm1(&u / &s)]), vec![("s", s), ("u", u)]),
                "Re:6c" => (conj(H1(s.clone()), Ym1(u.clone())), w([Ym1(&u / &s)]), vec![("s", s), ("u", u)]),
                "Re:6d" => (conj(H2(s.clone()), Ym1(u.clone())), w([Ym1(&s * &u)]), vec![("s", s), ("u", u)]),
                "U:4a" => (
                    w([Ym1(u.clone())]),
                    w([Xm1(u.recip()), H1(-u.recip()), H2(-&u), Wm1, Xm1(u.recip())]),
                    vec![("s", u)],
                ),
                _ => unreachable!("{id}"),
            };
            if id.starts_with("H:") {
                push(lhs.clone(), rhs.clone(), params.clone(), Host::Ref2x2, false);
            }
            push(lhs, rhs, params, host, id == "Re:0");
        }
        return Ok(out);
    }

    if id.starts_with("Im:") || id == "U:4b" {
        for &i in &letters {
            let c = consts.c(i.l, i.j);
            let (a, b) = (i.l + 1, i.j - i.l);
            for _ in 0..samples {
                let (u, v, tau) = (smp.u(), smp.u(), smp.t());
                let host = Host::Span(i);
                let (lhs, rhs, params) = match id {
                    "Im:0" => (
                        w([Ws(i, u.clone())]),
                        w([X(i, u.clone()), Y(i, -u.recip() / &c), X(i, u.clone())]),
                        vec![("s", u)],
                    ),
                    "Im:1a" => (w([X(i, u.clone()), X(i, v.clone())]), w([X(i, &u + &v)]), vec![("u", u), ("v", v)]),
                    "Im:1b" => (w([Y(i, u.clone()), Y(i, v.clone())]), w([Y(i, &u + &v)]), vec![("u", u), ("v", v)]),
                    "Im:2" => (
                        w([Y(i, -&v), X(i, u.clone()), Y(i, v.clone())]),
                        w([
                            X(i, -v.recip() / &c),
                            Y(i, -(&c * &v * &v * &u)),
                            X(i, v.recip() / &c),
                        ]),
                        vec![("s", u), ("t", v)],
                    ),
                    "Im:3" => {
                        let neg = -&tau;
                        (
                            w([Ws(i, qpow(&tau, a * b)), W(i)]),
                            w([H1(qpow(&neg, b)), H2(qpow(&neg, a))]),
                            vec![("s", tau)],
                        )
                    }
                    "Im:4a" => (conj(W(i), X(i, u.clone())), w([Y(i, -&u / &c)]), vec![("u", u)]),
                    "Im:4b" => (conj(W(i), Y(i, u.clone())), w([X(i, -(&c * &u))]), vec![("u", u)]),
                    "Im:5a" => (conj(W(i), H1(qpow(&tau, b))), w([H2(qpow(&tau, -a))]), vec![("s", tau)]),
                    "Im:5b" => (conj(W(i), H2(qpow(&tau, a))), w([H1(qpow(&tau, -b))]), vec![("s", tau)]),
                    "Im:6a" => (
                        conj(H1(tau.clone()), X(i, u.clone())),
                        w([X(i, qpow(&tau, a) * &u)]),
                        vec![("s", tau), ("u", u)],
                    ),
                    "Im:6b" => (
                        conj(H2(tau.clone()), X(i, u.clone())),
                        w([X(i, qpow(&tau, b) * &u)]),
                        vec![("s", tau), ("u", u)],
                    ),
                    "Im:6c" => (
                        conj(H1(tau.clone()), Y(i, u.clone())),
                        w([Y(i, qpow(&tau, -a) * &u)]),
                        vec![("s", tau), ("u", u)],
                    ),
                    "Im:6d" => (
                        conj(H2(tau.clone()), Y(i, u.clone())),
                        w([Y(i, qpow(&tau, -b) * &u)]),
                        vec![("s", tau), ("u", u)],
                    ),
                    "U:4b" => {
                        // s = -t^{-(ℓ+1)(j-ℓ)}/c makes [-cs]^{-1/(ℓ+1)} = t^{j-ℓ} and
                        // [-cs]^{-1/(j-ℓ)} = t^{ℓ+1}.
                        let s = -qpow(&tau, -a * b) / &c;
                        let x = (&s * &c).recip();
                        (
                            w([Y(i, s.clone())]),
                            w([X(i, x.clone()), H1(qpow(&tau, b)), H2(qpow(&tau, a)), W(i), X(i, x)]),
                            vec![("t", tau), ("s", s)],
                        )
                    }
                    _ => unreachable!("{id}"),
                };
                push(lhs, rhs, params, host, id == "Im:0");
            }
        }
        return Ok(out);
    }

    match id {
        "U:1a" | "U:1b" => {
            for &i in &tops {
                for _ in 0..samples {
                    let (u, v) = (smp.u(), smp.u());
                    let (lhs, kind) = if id == "U:1a" {
                        (comm(Xm1(u.clone()), X(i, v.clone())), HostKind::PPlus)
                    } else {
                        (comm(Ym1(u.clone()), Y(i, v.clone())), HostKind::PMinusViaEta)
                    };
                    push(lhs, GroupWord::default(), vec![("u", u), ("v", v)], lambda_host(kind), false);
                }
            }
        }
        "U:1c" | "U:1d" => {
            for &i in &bottoms {
                let (em1, e) = (RootVec::alpha_neg1(), i.root());
                let grading = if id == "U:1c" {
                    grading_containing(&em1.neg(), &e, height)?
                } else {
                    grading_containing(&em1, &e.neg(), height)?
                };
                let host = Host::Window {
                    kind: HostKind::UPi,
                    subset: families(&[i])?,
                    grading,
                    height,
                };
                for _ in 0..samples {
                    let (u, v) = (smp.u(), smp.u());
                    let lhs = if id == "U:1c" {
                        comm(Ym1(u.clone()), X(i, v.clone()))
                    } else {
                        comm(Xm1(u.clone()), Y(i, v.clone()))
                    };
                    push(lhs, GroupWord::default(), vec![("u", u), ("v", v)], host.clone(), false);
                }
            }
        }
        "U:2" => {
            let mut pairs = Vec::new();
            for &a in &letters {
                for &b in &letters {
                    if a.j != b.j || a.k != b.k || (a.l - b.l).abs() > 1 {
                        pairs.push((a, b));
                    }
                }
            }
            if pairs.is_empty() {
                return Ok(out);
            }
            // Every pair at least once, and at least `samples` instances in all.
            for n in 0..samples.max(pairs.len()) {
                let (a, b) = pairs[n % pairs.len()];
                let grading = if (a.j, a.k) != (b.j, b.k) {
                    twisted(b.j, b.k)
                } else {
                    grading_containing(&a.root(), &b.root().neg(), height)?
                };
                let host = Host::Window {
                    kind: HostKind::UPi,
                    subset: families(&[a, b])?,
                    grading,
                    height,
                };
                let (u, v) = (smp.u(), smp.u());
                push(
                    comm(X(a, u.clone()), Y(b, v.clone())),
                    GroupWord::default(),
                    vec![("u", u), ("v", v)],
                    host,
                    false,
                );
            }
        }
        "U:3a" | "U:3b" => {
            for &i in &letters {
                let flip = ExtIndex::new(i.j - 1 - i.l, i.j, i.k);
                let sgn = sign(i.j - i.l - 1);
                for _ in 0..samples {
                    let u = smp.u();
                    let (lhs, rhs, kind) = if id == "U:3a" {
                        (conj(Wm1, X(i, u.clone())), w([X(flip, &sgn * &u)]), HostKind::PPlus)
                    } else {
                        (conj(Wm1, Y(i, u.clone())), w([Y(flip, &sgn * &u)]), HostKind::PMinusViaEta)
                    };
                    push(lhs, rhs, vec![("u", u)], lambda_host(kind), false);
                }
            }
        }
        _ => unreachable!("{}", spec.id),
    }
    Ok(out)
}
