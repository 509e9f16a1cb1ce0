mod common;

use bihom::derivation::*;
use bihom::linalg::{Matrix, MatrixSubspace};
use bihom::structure::centralizer;
use bihom::algebra::{BiHomLieAlgebra, StructureConstants};
use bihom::{Fp, Scalar, PrimeField, QMatrix, RationalField};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn heis(a: &str, b: &str, x: &str, y: &str) -> bihom::QAlgebra {
    bihom::algebra::heisenberg(&q(a), &q(x), &[q(b)], &[q(y)]).unwrap()
}

fn span(n: usize, mats: &[QMatrix]) -> MatrixSubspace<bihom::Rational> {
    MatrixSubspace::span(&RationalField, n, mats).unwrap()
}

#[test]
fn omega_examples() {
    let l = entry("L1_10", &[]);
    assert_eq!(omega_basis(&l).unwrap().dim(), 4);
    let l = entry("L1_1", &[("z1", "0"), ("b", "2"), ("y", "3")]);
    let om = omega_basis(&l).unwrap();
    assert_eq!(om, span(2, &[qm(&[&["1", "0"], &["0", "0"]]), qm(&[&["0", "0"], &["0", "1"]])]));
    let h = heis("4", "2", "9", "3");
    let om = omega_basis(&h).unwrap();
    assert_eq!(om.dim(), 5);
    for d in om.basis() {
        assert!(d.commutes_with(h.alpha()).unwrap() && d.commutes_with(h.beta()).unwrap());
        assert!(d.get(0, 2).is_zero() && d.get(2, 0).is_zero());
    }
}

#[test]
fn gen_der_examples() {
    let l = entry("L1_1", &[("z1", "0"), ("b", "2"), ("y", "3")]);
    let g = gen_der_space(&l, &params((1, 1, 0), 0, 0)).unwrap();
    assert_eq!(g.space, span(2, &[qm(&[&["1", "0"], &["0", "0"]]), qm(&[&["0", "0"], &["0", "1"]])]));
    for (_, _, l) in instances() {
        assert_eq!(gen_der_space(&l, &params((0, 0, 0), 0, 0)).unwrap().space, omega_basis(&l).unwrap());
    }
    let l = entry("L1_10", &[]);
    let d = gen_der_space(&l, &params((1, 1, 1), 0, 0)).unwrap();
    assert_eq!(d.space, span(2, &[qm(&[&["1", "0"], &["1", "0"]]), qm(&[&["0", "1"], &["0", "1"]])]));
}

#[test]
fn membership_examples() {
    let f = RationalField;
    for (id, _, l) in instances() {
        let id2 = Matrix::identity(&f, 2);
        assert!(verify_membership(&l, &id2, &params((1, 1, 0), 0, 0)), "{id}");
        for t in [(1, 0, 0), (0, 1, 0), (1, 1, 1), (2, 3, 1)] {
            assert!(verify_membership(&l, &Matrix::zeros(&f, 2, 2), &params(t, 1, 0)));
        }
    }
    let l = entry("L1_10", &[]);
    assert!(!verify_membership(&l, &qm(&[&["1", "0"], &["0", "0"]]), &params((1, 1, 1), 0, 0)));
}

#[test]
fn centroid_examples() {
    let l = entry("L1_8", &[("a", "2"), ("x", "3")]);
    assert_eq!(centroid(&l, 1, 1).unwrap().space, span(2, &[qm(&[&["1", "0"], &["0", "1/6"]])]));
    let l = entry("L1_17", &[("z", "2")]);
    assert_eq!(centroid(&l, 1, 1).unwrap().space, span(2, &[qm(&[&["1", "3"], &["0", "1"]])]));
}

#[test]
fn quasi_centroid_examples() {
    let h = heis("4", "2", "9", "3");
    let qc = quasi_centroid(&h, 1, 1).unwrap();
    let f = RationalField;
    let expected = span(3, &[Matrix::diag(&f, &[qi(1), qi(1), qi(0)]), Matrix::diag(&f, &[qi(0), qi(0), qi(1)])]);
    assert_eq!(qc.space, expected);
    let ab = algebra(2, &[], &[&["2", "1"], &["0", "2"]], &[&["1", "0"], &["0", "1"]]);
    assert_eq!(quasi_centroid(&ab, 0, 0).unwrap().space, omega_basis(&ab).unwrap());
    for (id, _, l) in instances() {
        for (k, le) in [(0, 0), (1, 0), (1, 2)] {
            let cd = central_derivations_with(&l, k, le, Sidedness::TwoSided).unwrap().space;
            assert!(cd.is_subspace_of(&quasi_centroid(&l, k, le).unwrap().space).unwrap(), "{id}");
        }
    }
}

#[test]
fn one_sided_central_derivation_outside_quasi_centroid() {
    // d = diag(0,1) kills L² = span(e1) and maps L into the left center, yet
    // [e1, d e2] = e1 while [d e1, e2] = 0.
    let l = entry("L1_1", &[("z1", "0"), ("b", "2"), ("y", "3")]);
    let d = qm(&[&["0", "0"], &["0", "1"]]);
    assert!(central_derivations(&l, 0, 0).unwrap().space.contains(&d).unwrap());
    assert!(!verify_membership(&l, &d, &params((0, 1, -1), 0, 0)));
}

#[test]
fn central_derivations_match_characterization() {
    for (id, s, l) in instances() {
        for (k, le) in [(0, 0), (1, 1), (2, 0)] {
            let cd = central_derivations(&l, k, le).unwrap().space;
            let m = l.twist_power(k, le);
            let image = bihom::linalg::column_space(&m).unwrap();
            let oracle = annihilators_of_square(&l).unwrap().intersection(&maps_into(&l, &centralizer(&l, &image).unwrap()).unwrap()).unwrap();
            assert_eq!(cd, oracle, "{id} {s:?} ({k},{le})");
        }
    }
}

#[test]
fn der_100_and_010_characterizations() {
    for (id, s, l) in instances() {
        assert_eq!(gen_der_space(&l, &params((1, 0, 0), 0, 0)).unwrap().space, annihilators_of_square(&l).unwrap(), "{id} {s:?}");
        for (k, le) in [(0, 0), (0, 1), (2, 1)] {
            let m = l.twist_power(k, le);
            let image = bihom::linalg::column_space(&m).unwrap();
            let oracle = maps_into(&l, &centralizer(&l, &image).unwrap()).unwrap();
            assert_eq!(gen_der_space(&l, &params((0, 1, 0), k, le)).unwrap().space, oracle, "{id} {s:?}");
        }
    }
}

#[test]
fn cder_examples() {
    let l = entry("L1_1", &[("z1", "0"), ("b", "2"), ("y", "3")]);
    let cd = central_derivations(&l, 0, 0).unwrap();
    for d in cd.basis() {
        assert!(verify_membership(&l, &d, &params((1, 0, 0), 0, 0)));
        assert!(verify_membership(&l, &d, &params((0, 1, 0), 0, 0)));
        assert!(d.get(0, 0).is_zero());
    }
    let l = entry("L1_10", &[]);
    let cd = central_derivations(&l, 0, 0).unwrap();
    // d(e1+e2) = 0 and d(L) inside the (trivial) center leaves only zero.
    assert_eq!(cd.dim(), 0);
    let two = central_derivations_with(&l, 0, 0, Sidedness::TwoSided).unwrap();
    assert!(two.space.is_subspace_of(&cd.space).unwrap());
}

#[test]
fn normalization_examples() {
    let n = |a: i64, b: i64, c: i64| normalize_params(&qi(a), &qi(b), &qi(c));
    assert_eq!(n(2, 3, 1), ((q("1/2"), qi(1), qi(0)), NormalCase::Case(1)));
    assert_eq!(n(1, 1, 1), ((qi(1), qi(1), qi(1)), NormalCase::Case(3)));
    assert_eq!(n(0, 5, 5), ((qi(0), qi(1), qi(1)), NormalCase::Case(6)));
    assert_eq!(n(0, 0, 0).1, NormalCase::AllZero);
}

#[test]
fn commutator_and_jordan_examples() {
    let d = qm(&[&["1", "0"], &["0", "2"]]);
    assert!(commutator(&d, &d).unwrap().is_zero());
    assert_eq!(commutator(&d, &qm(&[&["0", "1"], &["0", "0"]])).unwrap(), qm(&[&["0", "-1"], &["0", "0"]]));
    assert_eq!(jordan_product(&d, &d).unwrap(), d.matmul(&d).unwrap());
    assert_eq!(jordan_product(&Matrix::identity(&RationalField, 2), &d).unwrap(), d);
    let f2 = PrimeField::new(2).unwrap();
    let m = Matrix::<Fp>::identity(&f2, 2);
    assert!(matches!(jordan_product(&m, &m), Err(bihom::Error::CharacteristicTwo)));

    let l = entry("L1_10", &[]);
    let g = centroid(&l, 0, 0).unwrap();
    let der = derivations(&l, 0, 0).unwrap();
    for a in g.basis() {
        for b in der.basis() {
            assert!(verify_membership(&l, &commutator(&a, &b).unwrap(), &params((1, 1, 0), 0, 0)));
        }
    }
    let l = entry("L1_8", &[("a", "2"), ("x", "3")]);
    let qc = quasi_centroid(&l, 0, 0).unwrap();
    for a in qc.basis() {
        for b in qc.basis() {
            assert!(verify_membership(&l, &jordan_product(&a, &b).unwrap(), &params((0, 1, -1), 0, 0)));
        }
    }
}

#[test]
fn intersection_examples() {
    let f = RationalField;
    let a = span(2, &[qm(&[&["1", "0"], &["0", "0"]])]);
    let b = span(2, &[qm(&[&["0", "0"], &["0", "1"]])]);
    assert_eq!(a.intersection(&MatrixSubspace::full(&f, 2)).unwrap(), a);
    assert_eq!(a.intersection(&b).unwrap().dim(), 0);
}

#[test]
fn exponent_grid_examples() {
    let ab = algebra(2, &[], &[&["2", "0"], &["0", "3"]], &[&["1", "0"], &["0", "5"]]);
    let grid = der_space_union_over_exponents(&ab, &params((1, 1, 1), 0, 0), 2, 2).unwrap();
    let om = omega_basis(&ab).unwrap();
    assert!(grid.points.iter().all(|p| p.space == om));

    let l = entry("L4_1", &[("z1", "0"), ("b", "2"), ("y", "1/2")]);
    let grid = der_space_union_over_exponents(&l, &params((1, 1, 1), 0, 0), 1, 1).unwrap();
    let dims: Vec<usize> = grid.points.iter().map(|p| p.dim()).collect();
    // (0,0) and (1,1) have b^k y^l = 1.
    assert_eq!(grid.points[0].space, span(2, &[qm(&[&["1", "0"], &["0", "0"]])]));
    assert_eq!(dims, vec![1, 1, 1, 2]);

    // The Heisenberg closed forms hold at every grid point for generic parameters.
    let forms = heisenberg_forms();
    for k in 0..=2 {
        for le in 0..=2 {
            for (name, t, form) in &forms {
                for delta in [1, 2] {
                    let (c, e, ok) = heisenberg_compare(("5", "2", "7", "3"), delta, *t, form, k, le);
                    assert!(ok, "{name} delta={delta} ({k},{le}): computed dim {c}, closed form dim {e}");
                }
            }
        }
    }
}

fn random_fp_structure<R: Rng>(rng: &mut R, f: &PrimeField) -> BiHomLieAlgebra<Fp> {
    let p = f.modulus();
    let mut c = StructureConstants::zeros(f, 2);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c.set(i, j, k, f.elem(rng.gen_range(0..p)));
            }
        }
    }
    // Twists from a small pool so that the commutant is often large.
    let pool: Vec<Matrix<Fp>> = vec![
        Matrix::identity(f, 2),
        Matrix::zeros(f, 2, 2),
        Matrix::from_vec(f, 2, 2, vec![f.elem(1), f.elem(1), f.elem(0), f.elem(1)]).unwrap(),
        Matrix::diag(f, &[f.elem(0), f.elem(1)]),
        Matrix::from_vec(f, 2, 2, (0..4).map(|_| f.elem(rng.gen_range(0..p))).collect()).unwrap(),
    ];
    let a = pool.choose(rng).unwrap().clone();
    let b = pool.choose(rng).unwrap().clone();
    BiHomLieAlgebra::new(c, a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn computed_spaces_are_sound(idx in 0usize..100, t in (-2i64..=2, -2i64..=2, -2i64..=2), k in 0u32..=2, le in 0u32..=2) {
        let all = instances();
        let (_, _, l) = &all[idx % all.len()];
        let p = params(t, k, le);
        for d in gen_der_space(l, &p).unwrap().basis() {
            prop_assert!(verify_membership(l, &d, &p));
        }
    }

    #[test]
    fn fp_spaces_are_complete(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), t in (0u64..3, 0u64..3, 0u64..3), k in 0u32..=1, le in 0u32..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new(p).unwrap();
        let l = random_fp_structure(&mut rng, &f);
        let gp = GenDerivationParams::new(f.elem(t.0), f.elem(t.1), f.elem(t.2), k, le);
        let dim = gen_der_space(&l, &gp).unwrap().dim();
        prop_assert_eq!(count_members(&l, &gp, &all_matrices(&f, 2)) as u64, p.pow(dim as u32));
    }

    #[test]
    fn centroid_composes_with_derivations(idx in 0usize..100, k in 0u32..=1, le in 0u32..=1, s in 0u32..=1, t in 0u32..=1) {
        // Γ_{α^kβ^l} ∘ Der_{α^sβ^t} ⊆ Der_{α^{k+s}β^{l+t}}
        let all = instances();
        let (_, _, l) = &all[idx % all.len()];
        let g = centroid(l, k, le).unwrap();
        let d = derivations(l, s, t).unwrap();
        for a in g.basis() {
            for b in d.basis() {
                prop_assert!(verify_membership(l, &a.matmul(&b).unwrap(), &params((1, 1, 1), k + s, le + t)));
            }
        }
    }

    #[test]
    fn commutator_lands_in_product_space(idx in 0usize..100, t1 in (-1i64..=2, -1i64..=2, -1i64..=2), t2 in (-1i64..=2, -1i64..=2, -1i64..=2), e1 in (0u32..=1, 0u32..=1), e2 in (0u32..=1, 0u32..=1)) {
        let all = instances();
        let (_, _, l) = &all[idx % all.len()];
        let a = gen_der_space(l, &params(t1, e1.0, e1.1)).unwrap();
        let b = gen_der_space(l, &params(t2, e2.0, e2.1)).unwrap();
        let prod = params((t1.0 * t2.0, t1.1 * t2.1, t1.2 * t2.2), e1.0 + e2.0, e1.1 + e2.1);
        for x in a.basis() {
            for y in b.basis() {
                prop_assert!(verify_membership(l, &commutator(&x, &y).unwrap(), &prod));
            }
        }
    }
}
