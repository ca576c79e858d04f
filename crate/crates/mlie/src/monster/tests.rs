use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::oracle::verify_identities;
use super::sample::random_homogeneous;
use super::*;
use crate::scalar::{q, qf};

fn ctx(s: &str, window: i64) -> AlgebraCtx {
    AlgebraCtx::with_subset(s.parse().unwrap(), window).unwrap()
}

fn desk() -> AlgebraCtx {
    ctx("1:2,2:1,3:1", 8)
}

#[test]
fn torus_and_real_root_relations() {
    let c = desk();
    assert!(c.bracket(&c.h1(), &c.h2()).unwrap().is_zero());
    assert_eq!(c.bracket(&c.em1(), &c.fm1()).unwrap(), c.h1().sub(&c.h2()));
    assert_eq!(c.bracket(&c.h2(), &c.em1()).unwrap(), c.em1().neg());
}

#[test]
fn letter_rules() {
    let c = desk();
    let e = |l, j, k| c.make_e(l, j, k).unwrap();
    let f = |l, j, k| c.make_f(l, j, k).unwrap();
    assert_eq!(c.bracket(&e(1, 2, 1), &f(1, 2, 1)).unwrap(), c.parse("h1 + 2*h2").unwrap());
    assert_eq!(c.bracket(&e(1, 2, 1), &f(0, 2, 1)).unwrap(), c.em1());
    assert!(c.bracket(&e(0, 1, 1), &f(0, 2, 1)).unwrap().is_zero());
    assert_eq!(c.bracket(&e(0, 1, 1), &f(0, 1, 1)).unwrap(), c.parse("-h1 - h2").unwrap());
    assert_eq!(c.bracket(&e(0, 2, 1), &f(1, 2, 1)).unwrap(), c.fm1().neg());
    assert_eq!(c.bracket(&c.em1(), &e(0, 3, 1)).unwrap(), e(1, 3, 1));
    assert_eq!(c.bracket(&c.em1(), &e(1, 3, 1)).unwrap(), e(2, 3, 1).scaled(&q(2)));
    assert!(c.bracket(&c.em1(), &e(2, 3, 1)).unwrap().is_zero());
    assert!(c.bracket(&c.fm1(), &e(0, 3, 1)).unwrap().is_zero());
    assert_eq!(c.bracket(&c.fm1(), &e(2, 3, 1)).unwrap(), e(1, 3, 1));
}

#[test]
fn word_brackets_respect_bidegree() {
    let c = desk();
    let x = c.parse("e(0,1,1)e(0,1,2)").unwrap();
    let y = c.parse("f(0,1,1)").unwrap();
    let z = c.bracket(&x, &y).unwrap();
    assert_eq!(z.homogeneous_bidegree(), Some(SpecRoot::new(1, 1)));
    // [[e11,e12], f11] = [e11,[e12,f11]] - [e12,[e11,f11]] = [e12, h1+h2] = -2 e12
    assert_eq!(z, c.parse("-2*e(0,1,2)").unwrap());
}

#[test]
fn context_and_index_errors() {
    let c = desk();
    let other = ctx("1:2,2:1,3:1", 6);
    assert_eq!(
        c.bracket(&c.h1(), &other.h1()),
        Err(AlgebraError::ContextMismatch { want: 8, got: 6 })
    );
    assert!(matches!(c.make_e(0, 4, 1), Err(AlgebraError::OutsideSubset(_))));
    assert!(matches!(c.make_e(2, 2, 1), Err(AlgebraError::OutsideSubset(_))));
    assert!(matches!(c.make_f(0, 1, 3), Err(AlgebraError::OutsideSubset(_))));
    assert!(matches!(AlgebraCtx::with_subset(GeneratorSubset::empty(), 1), Err(AlgebraError::BadWindow(1))));
}

#[test]
fn checked_bracket_reports_overflow() {
    let c = ctx("1:2,3:1", 5);
    let x = c.make_e(0, 3, 1).unwrap();
    let y = c.make_e(0, 1, 1).unwrap();
    assert!(c.bracket(&x, &y).unwrap().is_zero());
    assert_eq!(c.bracket_checked(&x, &y), Err(AlgebraError::Overflow(6)));
}

#[test]
fn parser_round_trips_display() {
    let c = desk();
    let x = c.parse("3/2*e(1,2,1) - f(-1) + h1").unwrap();
    assert_eq!(x.coeff(&Basis::Fm1), -Q::one());
    assert_eq!(c.parse(&x.to_string()).unwrap(), x);
    let w = c.parse("[e(0,1,1), e(0,1,2)]").unwrap();
    assert_eq!(w, c.parse("e(0,1,1)e(0,1,2)").unwrap());
    assert_eq!(c.parse("[e(0,1,2), e(0,1,1)]").unwrap(), w.neg());
    assert!(c.parse("e(0,1,2)e(0,1,1)").is_err());
    assert!(c.parse("e(0,1,1)f(0,1,1)").is_err());
    assert!(c.parse("2").is_err());
    assert!(c.parse("0").unwrap().is_zero());
}

#[test]
fn json_round_trip() {
    let c = desk();
    let x = c.parse("-1/3*e(0,1,1)e(0,1,2) + 2*f(2,3,1) + h2 - 5*e(-1)").unwrap();
    let j = serde_json::to_string(&x.to_json()).unwrap();
    let back: LieElemJson = serde_json::from_str(&j).unwrap();
    assert_eq!(LieElem::from_json(&back), Some(x));
}

#[test]
fn cartan_involution_examples() {
    let c = desk();
    assert_eq!(c.cartan_involution(&c.em1()), c.fm1());
    assert_eq!(c.cartan_involution(&c.make_e(1, 2, 1).unwrap()), c.make_f(1, 2, 1).unwrap());
    assert_eq!(c.cartan_involution(&c.h1()), c.h1().neg());
}

#[test]
fn form_values() {
    let c = desk();
    let e = |l, j, k| c.make_e(l, j, k).unwrap();
    let f = |l, j, k| c.make_f(l, j, k).unwrap();
    assert_eq!(c.bilinear_form(&e(0, 1, 1), &f(0, 1, 1)), Q::one());
    assert_eq!(c.bilinear_form(&c.h1(), &c.h2()), -Q::one());
    assert!(c.bilinear_form(&c.h1(), &c.h1()).is_zero());
    assert!(c.bilinear_form(&c.h2(), &c.h2()).is_zero());
    assert_eq!(c.bilinear_form(&e(1, 2, 1), &f(1, 2, 1)), -Q::one());
    assert_eq!(c.bilinear_form(&e(1, 3, 1), &f(1, 3, 1)), q(-2));
    assert!(c.bilinear_form(&e(0, 1, 1), &f(0, 1, 2)).is_zero());
    for idx in c.subset().ext_indices() {
        let (x, y) = (e(idx.l, idx.j, idx.k), f(idx.l, idx.j, idx.k));
        assert!(c.weight_identity_holds(&x, &y).unwrap(), "{idx:?}");
    }
}

#[test]
fn gl2_subalgebras() {
    let c = desk();
    assert_eq!(c_lj(0, 1), q(-1));
    assert_eq!(c_lj(1, 2), q(2));
    for idx in c.subset().ext_indices() {
        let g = c.gl2_subalgebra(idx.l, idx.j, idx.k).unwrap();
        for (name, ok) in g.check_relations(&c).unwrap() {
            assert!(ok, "{name} at {idx:?}");
        }
    }
    assert_eq!(c.gl2_subalgebra(1, 3, 1).unwrap().c, c_lj(1, 3));
    assert_eq!(c_lj(1, 3), q(8));
    assert_eq!(c_lj(2, 3), qf(-3, 1));
}

#[test]
fn identities_from_base_relations() {
    let c = ctx("2:1", 6);
    let r = verify_identities(&c).unwrap();
    assert!(r.all_pass(), "{:?}", r.failures().next());
    let l2 = r.checks.iter().find(|x| x.id == "L:2" && x.left.starts_with("e(0,2,1)")).unwrap();
    assert_eq!(l2.oracle, c.parse("-2*h1 - h2").unwrap());
    let l3b = r.checks.iter().find(|x| x.id == "L:3b").unwrap();
    assert_eq!(l3b.oracle, c.fm1().neg());
}

#[test]
fn identities_at_j_one() {
    let c = ctx("1:1", 4);
    let r = verify_identities(&c).unwrap();
    assert!(r.all_pass());
    let l2 = r.checks.iter().find(|x| x.id == "L:2").unwrap();
    assert_eq!(l2.oracle, c.parse("-h1 - h2").unwrap());
}

#[test]
fn jacobi_examples() {
    let c = desk();
    let e = |l, j, k| c.make_e(l, j, k).unwrap();
    let f = |l, j, k| c.make_f(l, j, k).unwrap();
    assert!(c.jacobi_check(&c.h1(), &c.h2(), &c.em1()).unwrap().is_zero());
    assert!(c.jacobi_check(&c.em1(), &e(0, 2, 1), &f(0, 2, 1)).unwrap().is_zero());
    assert!(c.jacobi_check(&e(0, 1, 1), &e(0, 1, 2), &f(0, 1, 1)).unwrap().is_zero());
}

fn seeded() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn antisymmetry_grading_and_involution(seed in seeded()) {
        let c = desk();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_homogeneous(&c, &mut rng, 4);
        let y = random_homogeneous(&c, &mut rng, 4);
        let xy = c.bracket(&x, &y).unwrap();
        prop_assert!(xy.add(&c.bracket(&y, &x).unwrap()).is_zero());
        let want = x.homogeneous_bidegree().unwrap().add(&y.homogeneous_bidegree().unwrap());
        prop_assert!(xy.terms().iter().all(|(b, _)| b.bidegree() == want));
        let eta = |z: &LieElem| c.cartan_involution(z);
        prop_assert_eq!(eta(&eta(&x)), x.clone());
        prop_assert_eq!(eta(&xy), c.bracket(&eta(&x), &eta(&y)).unwrap());
    }

    #[test]
    fn jacobi_and_invariance(seed in seeded()) {
        let c = desk();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_homogeneous(&c, &mut rng, 3);
        let y = random_homogeneous(&c, &mut rng, 3);
        let z = random_homogeneous(&c, &mut rng, 3);
        if let Ok(r) = c.jacobi_check(&x, &y, &z) {
            prop_assert!(r.is_zero(), "residual {}", r);
        }
        let xy = c.bracket_checked(&x, &y);
        let yz = c.bracket_checked(&y, &z);
        if let (Ok(xy), Ok(yz)) = (xy, yz) {
            prop_assert_eq!(c.bilinear_form(&xy, &z), c.bilinear_form(&x, &yz));
        }
        prop_assert_eq!(c.bilinear_form(&x, &y), c.bilinear_form(&y, &x));
    }
}
