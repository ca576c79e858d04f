use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::monster::sample::small_rational;
use crate::roots::{positive_system_containing, RootVec};
use crate::scalar::{binom, q, qf};

fn lam(s: &str, height: i64) -> Truncation {
    Truncation::for_subset(s.parse().unwrap(), Grading::lambda(), height, height).unwrap()
}

/// A random element of the given grade in a finite window, or zero if that grade is empty.
fn random_of_grade(t: &Truncation, rng: &mut ChaCha8Rng, n: i64) -> LieElem {
    let b = t.basis().unwrap();
    let mut out = t.ctx().zero();
    for i in 0..b.len() {
        if b.grade_of(i) == n && rng.gen_bool(0.6) {
            out.add_basis(b.elems()[i].clone(), small_rational(rng, 5));
        }
    }
    out
}

#[test]
fn ad_h1_is_diagonal_with_first_coordinate() {
    let t = lam("1:2,2:1,3:1", 6);
    let ad = t.ad_op(&t.ctx().h1()).unwrap();
    let b = t.basis().unwrap();
    for i in 0..b.len() {
        let a = b.elems()[i].bidegree().a;
        let col = ad.column(i);
        if a == 0 {
            assert!(col.is_empty());
        } else {
            assert_eq!(col.len(), 1);
            assert_eq!(ad.entry(i, i), q(a));
        }
    }
    assert!(t.ad_op(&t.ctx().zero()).unwrap().column(3).is_empty());
    let c = t.ctx();
    let e021 = c.make_e(0, 2, 1).unwrap();
    assert_eq!(t.ad_op(&c.em1()).unwrap().apply(&e021).unwrap(), c.make_e(1, 2, 1).unwrap());
}

#[test]
fn exp_of_e_minus_one_on_f_letters() {
    let t = lam("3:1,4:1", 5);
    let c = t.ctx();
    let u = qf(2, 3);
    let x = c.em1().scaled(&u);
    for j in [3, 4] {
        for l in 0..j {
            let got = t.exp_apply(&x, &c.make_f(l, j, 1).unwrap()).unwrap();
            let mut want = c.zero();
            for m in 0..=l {
                let coeff = Q::from_integer(binom(j - 1 - m, j - 1 - l)) * crate::scalar::qpow(&u, l - m);
                want.add_scaled(&c.make_f(m, j, 1).unwrap(), &coeff);
            }
            assert_eq!(got, want, "f({l},{j},1)");
        }
    }
}

#[test]
fn exp_of_simple_root_vector_on_its_partner() {
    let t = lam("1:1", 4);
    let c = t.ctx();
    let e = c.make_e(0, 1, 1).unwrap();
    let got = t.exp_apply(&e, &c.make_f(0, 1, 1).unwrap()).unwrap();
    // f + [e,f] + ½[e,[e,f]] with [e,f] = -(h₁+h₂) and [h₁+h₂, e] = 2e.
    assert_eq!(got, c.parse("f(0,1,1) - h1 - h2 + e(0,1,1)").unwrap());
    assert_eq!(Grading::lambda().part(&got, 0), c.parse("-h1 - h2").unwrap());
}

#[test]
fn rejects_non_summable_exponents() {
    let t = lam("1:2", 4);
    let c = t.ctx();
    assert!(matches!(t.exp_ad(&c.h1()), Err(OpError::NotProSummable(_))));
    assert!(matches!(t.exp_ad(&c.parse("e(-1) + f(-1)").unwrap()), Err(OpError::NotProSummable(_))));
    assert!(t.exp_ad(&c.zero()).unwrap().is_identity());
    assert!(t.exp_ad(&c.fm1()).is_ok());
}

#[test]
fn mixed_grading_has_no_finite_basis() {
    let t = Truncation::for_subset("2:1".parse().unwrap(), Grading::spec(-7, 6), 13, 24).unwrap();
    assert!(matches!(t.basis(), Err(OpError::NoFiniteBasis(_))));
    assert!(!t.test_vectors().is_empty());
    let small = Truncation::new(Arc::new(AlgebraCtx::with_subset("1:2".parse().unwrap(), 2).unwrap()), Grading::lambda(), 6);
    assert!(matches!(small.basis(), Err(OpError::WindowTooSmall { have: 2, need: 6 })));
}

#[test]
fn inverse_and_truncated_equality() {
    let t = lam("1:2,2:1", 6);
    let c = t.ctx();
    let x = c.parse("e(0,1,1) - 2*e(0,2,1) + 1/2*e(0,1,1)e(0,1,2)").unwrap();
    let a = t.exp_ad(&x).unwrap();
    let b = t.exp_ad(&x.neg()).unwrap();
    assert!(a.compose(&b).unwrap().is_identity());
    assert_eq!(a.inverse().unwrap(), b);
    let hi = c.parse("e(0,1,1)e(0,1,1)e(0,1,2)").unwrap();
    let shifted = t.exp_ad(&x.add(&hi)).unwrap();
    assert!(a.equal_up_to(&shifted, 5).unwrap());
    assert!(!a.equal_up_to(&shifted, 6).unwrap());
    let torus = t.compile(&FactorWord::new(vec![Factor::Torus(q(2), qf(1, 3))])).unwrap();
    assert!(torus.inverse().unwrap().compose(&torus).unwrap().is_identity());
    assert_eq!(GradedOp::zero(t.basis().unwrap()).inverse(), Err(OpError::Singular));
}

#[test]
fn exponentials_are_automorphisms() {
    let t = lam("1:2,2:1", 6);
    let c = t.ctx();
    for x in ["e(0,1,1) + 3*e(1,2,1)", "e(-1)", "-2*f(-1)", "e(0,1,1)e(0,1,2)"] {
        let op = t.exp_ad(&c.parse(x).unwrap()).unwrap();
        assert_eq!(op.automorphism_defect(&t).unwrap(), None, "{x}");
    }
    let not_auto = t.ad_op(&c.em1()).unwrap().add(&t.identity().unwrap()).unwrap();
    assert!(not_auto.automorphism_defect(&t).unwrap().is_some());
}

#[test]
fn graded_op_json_round_trip() {
    let t = lam("1:2,2:1", 5);
    let op = t.exp_ad(&t.ctx().parse("e(-1) + 0*h1").unwrap()).unwrap();
    let op = op.compose(&t.exp_ad(&t.ctx().parse("1/3*e(0,2,1)").unwrap()).unwrap()).unwrap();
    let text = serde_json::to_string(&op.to_json()).unwrap();
    let back: GradedOpJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.schema, GRADEDOP_SCHEMA);
    assert_eq!(GradedOp::from_json(&back, t.basis().unwrap()).unwrap(), op);
    let other = lam("1:2,2:1", 4);
    assert_eq!(GradedOp::from_json(&back, other.basis().unwrap()), Err(OpError::Mismatch));
}

#[test]
fn single_layer_and_identity() {
    let t = lam("1:2,2:1", 7);
    let c = t.ctx();
    let x = c.parse("e(0,2,1) - 4*e(1,2,1)").unwrap();
    let phi = t.exp_ad(&x).unwrap();
    let d = layer_decompose(&t, &phi, 1).unwrap();
    assert_eq!(d.layers, vec![(3, x)]);
    assert!(layer_decompose(&t, &t.identity().unwrap(), 1).unwrap().is_empty());
}

#[test]
fn decomposition_rejects_low_deviation() {
    let t = lam("1:2,2:1", 6);
    let c = t.ctx();
    let phi = t.exp_ad(&c.parse("e(0,1,1)").unwrap()).unwrap();
    assert_eq!(layer_decompose(&t, &phi, 3), Err(OpError::NotUnipotent { n0: 3, grade: 2 }));
    let torus = FactorWord::new(vec![Factor::Torus(q(2), q(1))]);
    assert_eq!(layer_decompose(&t, &torus, 1), Err(OpError::NotUnipotent { n0: 1, grade: 0 }));
    let real = FactorWord::exp(c.em1());
    assert_eq!(layer_decompose(&t, &real, 1), Err(OpError::NotUnipotent { n0: 1, grade: 0 }));
}

#[test]
fn bch_matches_printed_terms() {
    let t = lam("1:2", 6);
    let c = t.ctx();
    let x = c.parse("e(0,1,1)").unwrap();
    let y = c.parse("2*e(0,1,2)").unwrap();
    let z = bch(&t, &x, &y).unwrap();
    let xy = t.bracket(&x, &y).unwrap();
    let mut want = x.add(&y).add(&xy.scaled(&qf(1, 2)));
    let third = t.bracket(&x, &xy).unwrap().sub(&t.bracket(&y, &xy).unwrap());
    want.add_scaled(&third, &qf(1, 12));
    assert_eq!(Grading::lambda().truncate(&z, 6), Grading::lambda().truncate(&want, 6));
    // Commuting elements.
    let t2 = lam("1:2,2:1", 4);
    let a = t2.ctx().parse("e(0,1,1)").unwrap();
    let b = t2.ctx().parse("e(0,2,1)").unwrap();
    assert!(t2.bracket(&a, &b).unwrap().is_zero());
    assert_eq!(bch(&t2, &a, &b).unwrap(), a.add(&b));
    assert!(matches!(bch(&t2, &t2.ctx().em1(), &b), Err(OpError::NotProSummable(_))));
}

#[test]
fn commutator_with_real_simple_root() {
    let t = Truncation::for_subset("2:1".parse().unwrap(), Grading::spec(1, 0), 8, 8).unwrap();
    let c = t.ctx();
    let x = c.make_e(0, 2, 1).unwrap();
    let r = commutator_factor(&t, &x, &c.em1(), &q(2), &q(3)).unwrap();
    assert!(r.all_ok(), "{r:?}");
    let sum = RootVec::ext(1, 2, 1);
    assert_eq!(r.factor(&sum).unwrap().z, c.make_e(1, 2, 1).unwrap().neg());
    assert_eq!(r.factors[r.factors.len() - 1].root, sum);
}

#[test]
fn commutator_of_imaginary_simple_roots_is_host_independent() {
    let s: GeneratorSubset = "1:2".parse().unwrap();
    let hosts = [Grading::spec(1, 0), Grading::lambda()];
    let mut maps = Vec::new();
    for g in hosts {
        let t = Truncation::for_subset(s.clone(), g, 8, 8).unwrap();
        let c = t.ctx();
        let (x, y) = (c.make_e(0, 1, 1).unwrap(), c.make_e(0, 1, 2).unwrap());
        let r = commutator_factor(&t, &x, &y, &qf(-1, 2), &q(3)).unwrap();
        assert!(r.all_ok(), "{r:?}");
        let lead = r.factor(&RootVec::simple(1, 1).add(&RootVec::simple(1, 2))).unwrap();
        assert_eq!(lead.z, c.parse("e(0,1,1)e(0,1,2)").unwrap());
        maps.push(
            factor_map(&r)
                .into_iter()
                .filter(|(root, _)| root.lambda() <= 8)
                .map(|(k, v)| (k, v.to_string()))
                .collect::<Vec<_>>(),
        );
    }
    assert!(maps[0].len() > 2);
    assert_eq!(maps[0], maps[1]);
}

#[test]
fn mixed_sign_commutator() {
    let alpha = RootVec::ext(0, 2, 1);
    let beta = RootVec::ext(1, 2, 1).neg();
    let desc = positive_system_containing(&alpha, &beta, 8).unwrap();
    let mut g = Grading::from_desc(&desc).unwrap();
    // Scale so that the commutator root -α₋₁ fits inside the height.
    if g.root(&alpha.add(&beta)) > 16 {
        g = Grading::spec(-7, 6);
    }
    let t = Truncation::for_subset("2:1".parse().unwrap(), g, 16, 24).unwrap();
    let c = t.ctx();
    let x = c.make_e(0, 2, 1).unwrap();
    let y = c.make_f(1, 2, 1).unwrap();
    let r = commutator_factor(&t, &x, &y, &q(2), &qf(-1, 3)).unwrap();
    assert!(r.all_ok(), "{r:?}");
    assert_eq!(r.factors.len(), 1);
    assert_eq!(r.factors[0].root, RootVec::alpha_neg1().neg());
    assert_eq!(r.factors[0].z, c.fm1().neg());
}

#[test]
fn empty_spans_give_trivial_commutators() {
    // (α₋₁, α_{j-1,jk})
    let t = Truncation::for_subset("3:1".parse().unwrap(), Grading::spec(1, 0), 9, 9).unwrap();
    let c = t.ctx();
    let r = commutator_factor(&t, &c.em1(), &c.make_e(2, 3, 1).unwrap(), &q(5), &qf(2, 7)).unwrap();
    assert!(r.all_ok() && r.factors.is_empty());
    // (α₋₁, -α_{0,jk}) in a system not containing -α₋₁
    let alpha = RootVec::alpha_neg1();
    let beta = RootVec::simple(3, 1).neg();
    let g = Grading::from_desc(&positive_system_containing(&alpha, &beta, 8).unwrap()).unwrap();
    let t = Truncation::for_subset("3:1".parse().unwrap(), g, 12, 24).unwrap();
    let c = t.ctx();
    let r = commutator_factor(&t, &c.em1(), &c.make_f(0, 3, 1).unwrap(), &q(-3), &q(4)).unwrap();
    assert!(r.all_ok() && r.factors.is_empty(), "{r:?}");
}

#[test]
fn commutator_rejects_non_positive_roots() {
    let t = lam("1:2", 6);
    let c = t.ctx();
    let r = commutator_factor(&t, &c.make_e(0, 1, 1).unwrap(), &c.make_f(0, 1, 2).unwrap(), &q(1), &q(1));
    assert!(matches!(r, Err(OpError::Unsupported(_))));
    let r = commutator_factor(&t, &c.parse("e(0,1,1) + e(0,1,2)").unwrap(), &c.em1(), &q(1), &q(1));
    assert!(matches!(r, Err(OpError::Malformed(_))));
}

fn random_product(t: &Truncation, rng: &mut ChaCha8Rng) -> FactorWord {
    let n = rng.gen_range(1..=5);
    let mut w = FactorWord::default();
    for _ in 0..n {
        let g = rng.gen_range(1..=t.height());
        let x = random_of_grade(t, rng, g);
        w.factors.push(Factor::Exp(x));
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn layer_round_trip_and_uniqueness(seed in any::<u64>()) {
        let t = lam("1:2,2:1", 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = t.compile(&random_product(&t, &mut rng)).unwrap();
        let layers = layer_decompose(&t, &phi, 1).unwrap();
        prop_assert!(layers.layers.windows(2).all(|w| w[0].0 < w[1].0));
        let back = t.compile(&recompose(&layers)).unwrap();
        prop_assert!(back.equal_up_to(&phi, t.height()).unwrap());
        prop_assert_eq!(layer_decompose(&t, &back, 1).unwrap(), layers);
    }

    #[test]
    fn block_algebra(seed in any::<u64>()) {
        let t = lam("1:2,2:1", 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops: Vec<GradedOp> = (0..3).map(|_| t.compile(&random_product(&t, &mut rng)).unwrap()).collect();
        let left = ops[0].compose(&ops[1]).unwrap().compose(&ops[2]).unwrap();
        let right = ops[0].compose(&ops[1].compose(&ops[2]).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(left.compose(&left.inverse().unwrap()).unwrap().is_identity());
        prop_assert_eq!(left.automorphism_defect(&t).unwrap(), None);
    }

    #[test]
    fn bch_round_trip(seed in any::<u64>()) {
        let t = lam("1:2,2:1", 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gx = rng.gen_range(2..=4);
        let x = random_of_grade(&t, &mut rng, gx);
        let y = random_of_grade(&t, &mut rng, 3);
        let z = bch(&t, &x, &y).unwrap();
        let lhs = t.compile(&FactorWord::new(vec![Factor::Exp(x), Factor::Exp(y)])).unwrap();
        prop_assert!(t.exp_ad(&z).unwrap().equal_up_to(&lhs, t.height()).unwrap());
    }

    #[test]
    fn exp_stabilizes_by_grade_shift(seed in any::<u64>()) {
        let t = lam("1:2,2:1", 7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_of_grade(&t, &mut rng, 2).add(&random_of_grade(&t, &mut rng, 3));
        prop_assume!(!x.is_zero());
        // ad(x)ⁿ vanishes on the window once n·2 exceeds the full grade range.
        let ad = t.ad_op(&x).unwrap();
        let mut p = t.identity().unwrap();
        for _ in 0..=7 {
            p = ad.compose(&p).unwrap();
        }
        prop_assert_eq!(p, GradedOp::zero(t.basis().unwrap()));
    }
}
