//! Structural facts about subgroups of GL_2, checked exhaustively over small fields and by
//! random sampling.

use std::collections::BTreeSet;

use abcong::abelian::{analyze, dihedral_parameter};
use abcong::classify::{classify_projective, commutator_trace_set, is_borel_conjugable, DicksonLabel};
use abcong::ffield::{Fe, FieldSpec};
use abcong::matgrp::{
    exceptional_lift, nonsplit_cartan_normaliser, split_cartan_normaliser, two_generated_subgroups,
    Mat2, MatGroup,
};
use proptest::prelude::*;

fn field(p: u64, r: u32) -> FieldSpec {
    FieldSpec::new(p, r, None).unwrap()
}

fn subgroups(p: u64, r: u32) -> Vec<MatGroup> {
    two_generated_subgroups(&MatGroup::gl2(&field(p, r)))
}

/// Subgroup of `PGL_2` generated by the commutators of the projective image.
fn projective_commutator_order(g: &MatGroup) -> usize {
    let p = g.projectivize();
    p.closure(&p.commutator_classes()).len()
}

const FIELDS: &[(u64, u32)] = &[(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1)];

proptest! {
    #[test]
    fn trace_and_determinant(k in 0..FIELDS.len(), e in proptest::array::uniform8(0u32..49)) {
        let f = field(FIELDS[k].0, FIELDS[k].1);
        let q = f.q() as u32;
        let a = Mat2([Fe(e[0] % q), Fe(e[1] % q), Fe(e[2] % q), Fe(e[3] % q)]);
        let b = Mat2([Fe(e[4] % q), Fe(e[5] % q), Fe(e[6] % q), Fe(e[7] % q)]);
        prop_assume!(!a.det(&f).is_zero() && !b.det(&f).is_zero());
        prop_assert_eq!(a.mul(&b, &f).trace(&f), b.mul(&a, &f).trace(&f));
        prop_assert_eq!(a.conjugate_by(&b, &f).trace(&f), a.trace(&f));
        prop_assert_eq!(a.mul(&b, &f).det(&f), f.mul(a.det(&f), b.det(&f)));
        prop_assert_eq!(a.commutator(&b, &f).det(&f), Fe::ONE);
        prop_assert_eq!(a.mul(&a.inverse(&f).unwrap(), &f), Mat2::IDENTITY);
        // Projective order 2 exactly for traceless non-scalars in odd characteristic;
        // order at most 2 exactly for traceless matrices in characteristic 2.
        let traceless = a.trace(&f).is_zero();
        let po = a.projective_order(&f);
        if f.p() == 2 {
            prop_assert_eq!(po <= 2, traceless);
        } else if a.is_scalar().is_none() {
            prop_assert_eq!(po == 2, traceless);
        }
    }
}

#[test]
fn commutator_subgroup_is_normal_and_matches_bruteforce() {
    for g in subgroups(3, 1).iter().chain(subgroups(2, 2).iter()) {
        let c = g.commutator_subgroup();
        assert_eq!(c.elements(), g.commutator_subgroup_bruteforce().elements());
        assert!(g.is_normal_subgroup(&c));
        assert!(c.elements().iter().all(|m| m.det(g.field()) == Fe::ONE));
    }
}

#[test]
fn commutators_inject_up_to_sign() {
    for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = field(p, r);
        let minus = f.neg(Fe::ONE);
        for g in subgroups(p, r) {
            let c = g.commutator_subgroup();
            let kernel: BTreeSet<Fe> = c.elements().iter().filter_map(|m| m.is_scalar()).collect();
            assert!(kernel.iter().all(|&s| s == Fe::ONE || s == minus));
            assert!(kernel.len() == 1 || p != 2);
            assert_eq!(c.order(), projective_commutator_order(&g) * kernel.len());
        }
    }
}

#[test]
fn dihedral_and_exceptional_commutators() {
    for (p, r) in [(3, 1), (2, 2), (5, 1)] {
        for g in subgroups(p, r) {
            let class = classify_projective(&g.projectivize()).unwrap();
            let pc = projective_commutator_order(&g);
            match class.label {
                // [D_n, D_n] is generated by the square of the rotation.
                DicksonLabel::Dihedral { n, .. } => assert_eq!(pc as u64, if n % 2 == 0 { n / 2 } else { n }),
                DicksonLabel::A4 => assert_eq!(pc, 4),
                DicksonLabel::S4 => assert_eq!(pc, 12),
                DicksonLabel::A5 => assert_eq!(pc, 60),
                _ => {}
            }
        }
    }
}

#[test]
fn sl2_is_perfect_beyond_three() {
    for (p, r) in [(2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = field(p, r);
        let sl = MatGroup::sl2(&f);
        assert_eq!(sl.commutator_subgroup().order(), sl.order());
        let gl = MatGroup::gl2(&f);
        assert_eq!(gl.commutator_subgroup().elements(), sl.elements());
    }
    let f3 = field(3, 1);
    assert_eq!(MatGroup::sl2(&f3).commutator_subgroup().order(), 8);
}

#[test]
fn abelian_and_projectively_cyclic_groups() {
    for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        for g in subgroups(p, r) {
            let class = classify_projective(&g.projectivize()).unwrap();
            if g.is_abelian() {
                assert!(is_borel_conjugable(&g).unwrap().is_some());
            }
            if class.all_applicable.contains(&DicksonLabel::Cyclic) {
                assert!(g.is_abelian(), "order {}", g.order());
            }
        }
    }
}

#[test]
fn sign_commutator_gives_klein_image() {
    for p in [3, 5, 7] {
        let f = field(p, 1);
        let minus = f.neg(Fe::ONE);
        let gens = [Mat2::from_ints(&f, [[0, 1], [1, 0]]), Mat2::from_ints(&f, [[1, 0], [0, -1]])];
        let g = MatGroup::close(&f, &gens).unwrap();
        let c: Vec<Mat2> = g.commutator_subgroup().elements().to_vec();
        assert_eq!(c, vec![Mat2::IDENTITY, Mat2::scalar(minus)]);
        let proj = g.projectivize();
        assert_eq!(proj.order(), 4);
        assert!(proj.is_abelian());
        assert_eq!(proj.order_statistics().get(&2), Some(&3));
    }
    for g in subgroups(5, 1) {
        let f = g.field();
        let minus = Mat2::scalar(f.neg(Fe::ONE));
        if g.commutator_subgroup().elements() == [Mat2::IDENTITY, minus] {
            assert_eq!(dihedral_parameter(&g), Some(2));
        }
    }
}

#[test]
fn monomial_groups_are_cyclic_or_dihedral() {
    for p in [3, 5, 7] {
        let f = field(p, 1);
        for g in two_generated_subgroups(&split_cartan_normaliser(&f)) {
            let class = classify_projective(&g.projectivize()).unwrap();
            let ok = class.all_applicable.iter().any(|l| {
                matches!(l, DicksonLabel::Cyclic | DicksonLabel::Dihedral { .. })
            });
            assert!(ok, "order {} labels {:?}", g.order(), class.all_applicable);
        }
    }
}

#[test]
fn dihedral_borel_exactly_when_n_is_one_or_divisible_by_ell() {
    for (p, r) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        for g in subgroups(p, r) {
            if let Some(n) = dihedral_parameter(&g) {
                let borel = is_borel_conjugable(&g).unwrap().is_some();
                assert_eq!(borel, n == 1 || n % p == 0, "order {}, n = {n}", g.order());
            }
        }
    }
}

#[test]
fn cartan_normalisers() {
    for p in [3, 5, 7, 11] {
        let f = field(p, 1);
        let s = classify_projective(&split_cartan_normaliser(&f).projectivize()).unwrap();
        assert_eq!(s.dihedral_n(), Some(p - 1));
        let ns = nonsplit_cartan_normaliser(&f).unwrap();
        assert_eq!(ns.order() as u64, 2 * (p * p - 1));
        let c = classify_projective(&ns.projectivize()).unwrap();
        assert_eq!(c.dihedral_n(), Some(p + 1));
    }
    assert!(nonsplit_cartan_normaliser(&field(2, 2)).is_none());
}

#[test]
fn exceptional_lifts_have_the_right_image() {
    let cases = [(7, 3, DicksonLabel::A4, 12), (13, 4, DicksonLabel::S4, 24), (11, 5, DicksonLabel::A5, 60)];
    for (p, k, label, order) in cases {
        let g = exceptional_lift(&field(p, 1), k).unwrap();
        let c = classify_projective(&g.projectivize()).unwrap();
        assert_eq!(c.label, label);
        assert_eq!(c.order, order);
        assert!(analyze(&g).unwrap().consistent());
    }
    // No A5 in PGL_2(F_7): 7 is not +-1 mod 5 and F_49 is not used.
    assert!(exceptional_lift(&field(7, 1), 5).is_none());
}

#[test]
fn trace_field_of_subfield_images() {
    // SL_2(F_4) inside GL_2(F_16): commutator traces fill out exactly F_4.
    let f = field(2, 4);
    let w = f.elements().find(|&a| f.mult_order(a) == Some(3)).unwrap();
    let gens = [
        Mat2::new(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE),
        Mat2::new(Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ONE),
        Mat2::new(Fe::ONE, w, Fe::ZERO, Fe::ONE),
    ];
    let g = MatGroup::close(&f, &gens).unwrap();
    assert_eq!(g.order(), 60);
    let traces = commutator_trace_set(&g).unwrap();
    let f4: BTreeSet<Fe> = f.elements().filter(|&a| f.in_subfield(a, 4)).collect();
    assert_eq!(traces, f4);
    let c = classify_projective(&g.projectivize()).unwrap();
    assert!(c.all_applicable.contains(&DicksonLabel::A5));
    // Full groups: the commutator traces are the whole field.
    for (p, r) in [(5, 1), (7, 1), (3, 2)] {
        let f = field(p, r);
        let all: BTreeSet<Fe> = f.elements().collect();
        assert_eq!(commutator_trace_set(&MatGroup::gl2(&f)).unwrap(), all);
    }
}

#[test]
fn ell_three_exceptions_over_f9() {
    use abcong::abelian::{is_semi_abelian, predicted_semi, CosetTraces};
    let f = field(3, 2);
    let t = f.from_coeffs(&[0, 1]).unwrap();
    let gl3 = [
        Mat2::from_ints(&f, [[1, 1], [0, 1]]),
        Mat2::from_ints(&f, [[0, 1], [1, 0]]),
        Mat2::from_ints(&f, [[2, 0], [0, 1]]),
    ];
    let check = |g: &MatGroup, x: Fe, semi: bool| {
        assert_eq!(is_semi_abelian(g, x).unwrap().holds, semi, "order {} x = {}", g.order(), f.show(x));
        let class = classify_projective(&g.projectivize()).unwrap();
        let proper = CosetTraces::new(g).proper();
        assert_eq!(predicted_semi(g, &class, &proper, x), Some(semi));
    };
    let (one, minus) = (Fe::ONE, f.from_int(-1));

    // GL_2(F_3): determinant F_3^x and no other scalars, so +-1 are exceptions.
    let g = MatGroup::close(&f, &gl3).unwrap();
    check(&g, one, false);
    check(&g, minus, false);

    // Adding sqrt(-1) as a scalar keeps the determinant but scales a coset to traces {0, +-t}.
    let mut gens = gl3.to_vec();
    gens.push(Mat2::scalar(t));
    let g = MatGroup::close(&f, &gens).unwrap();
    assert_eq!(g.order(), 96);
    check(&g, one, true);
    check(&g, minus, true);

    // SL_2(F_3) times <t>: an odd A_4 image with determinant F_3^x that is still semi for +-1.
    let sl = MatGroup::sl2(&field(3, 1));
    let mut gens: Vec<Mat2> = sl.small_generating_set();
    gens.push(Mat2::scalar(t));
    let g = MatGroup::close(&f, &gens).unwrap();
    assert_eq!(g.order(), 48);
    check(&g, one, true);

    // A_5 with determinant +-1: exactly the four classes with x^2 outside F_3 are not semi.
    let mut gens = exceptional_lift(&f, 5).unwrap().generators().to_vec();
    gens.push(Mat2::scalar(t));
    let g = MatGroup::close(&f, &gens).unwrap();
    let not_semi: Vec<Fe> = f
        .elements()
        .filter(|&x| !x.is_zero() && !is_semi_abelian(&g, x).unwrap().holds)
        .collect();
    assert_eq!(not_semi.len(), 4);
    assert!(not_semi.iter().all(|&x| !f.in_subfield(f.mul(x, x), 3)));
    for x in f.elements().filter(|x| !x.is_zero()) {
        check(&g, x, !not_semi.contains(&x));
    }
}
