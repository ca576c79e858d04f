//! Seeded random elements for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{AlgebraCtx, Basis, LieElem};
use crate::freelie::Sign;
use crate::roots::SpecRoot;
use crate::scalar::Q;

/// A small nonzero rational with numerator and denominator bounded by `bound`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Q {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return Q::new(n.into(), rng.gen_range(1..=bound).into());
        }
    }
}

/// Basis vectors of the window grouped by bidegree, restricted to |λ| ≤ max_grade.
pub fn bidegree_classes(ctx: &AlgebraCtx, max_grade: i64) -> Vec<(SpecRoot, Vec<Basis>)> {
    let mut out = vec![
        (SpecRoot::new(0, 0), vec![Basis::H1, Basis::H2]),
        (SpecRoot::new(1, -1), vec![Basis::Em1]),
        (SpecRoot::new(-1, 1), vec![Basis::Fm1]),
    ];
    for sign in [Sign::E, Sign::F] {
        for (b, words) in ctx.word_basis(sign) {
            if b.lambda().abs() > max_grade {
                continue;
            }
            let v = words
                .iter()
                .map(|w| match sign {
                    Sign::E => Basis::E(w.clone()),
                    Sign::F => Basis::F(w.clone()),
                })
                .collect();
            out.push((*b, v));
        }
    }
    out
}

/// A random element homogeneous in bidegree, with |λ| ≤ max_grade.
pub fn random_homogeneous<R: Rng>(ctx: &AlgebraCtx, rng: &mut R, max_grade: i64) -> LieElem {
    let classes = bidegree_classes(ctx, max_grade);
    let (_, basis) = classes.choose(rng).expect("gl2 classes are always present");
    let mut out = ctx.zero();
    for b in basis {
        if rng.gen_bool(0.7) {
            out.add_basis(b.clone(), small_rational(rng, 4));
        }
    }
    if out.is_zero() {
        out.add_basis(basis[0].clone(), small_rational(rng, 4));
    }
    out
}

/// A random element of the given bidegree, or zero if that space is empty.
pub fn random_of_bidegree<R: Rng>(ctx: &AlgebraCtx, rng: &mut R, d: SpecRoot) -> LieElem {
    let mut out = ctx.zero();
    for (b, basis) in bidegree_classes(ctx, ctx.window()) {
        if b == d {
            for v in basis {
                out.add_basis(v, small_rational(rng, 4));
            }
        }
    }
    out
}
