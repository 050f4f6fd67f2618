//! Property tests across modules, driven by proptest.

use num_complex::Complex;
use proptest::prelude::*;

use weyl_lab_core::gns::{gns_build, NULL_TOL};
use weyl_lab_core::scalar::rational_from_frac;
use weyl_lab_core::state::{evaluate_state, kernel_positivity, Verdict, PSD_TOL};
use weyl_lab_core::{
    GeneratingFunction, GeneratingFunctionF32, GridRep, GridRepF32, PhasePoint, SymplecticSpace, WeylElement,
    WeylElementF32,
};

type W = WeylElement<f64>;

fn point(n: usize) -> impl Strategy<Value = PhasePoint> {
    prop::collection::vec((-8i64..=8, 1i64..=4), 2 * n).prop_map(move |c| {
        let r: Vec<_> = c.into_iter().map(|(p, q)| rational_from_frac(p, q)).collect();
        PhasePoint::new(r[..n].to_vec(), r[n..].to_vec()).unwrap()
    })
}

fn coeff() -> impl Strategy<Value = Complex<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex::new(a, b))
}

fn element(n: usize) -> impl Strategy<Value = W> {
    prop::collection::vec((point(n), coeff()), 1..5)
        .prop_map(move |t| W::from_terms(SymplecticSpace::standard(n), t).unwrap())
}

fn close(a: &W, b: &W, tol: f64) -> bool {
    a.pruned(1e-13).max_coefficient_deviation(&b.pruned(1e-13)).is_some_and(|d| d <= tol)
}

fn states(n: usize) -> Vec<GeneratingFunction<f64>> {
    vec![
        GeneratingFunction::dirac_g0(n),
        GeneratingFunction::fock(n),
        GeneratingFunction::quasifree(n, 0.7).unwrap(),
    ]
}

fn distinct(points: Vec<PhasePoint>) -> Vec<PhasePoint> {
    let mut out: Vec<PhasePoint> = Vec::new();
    for p in points {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_involutive((a, b, c) in (element(2), element(2), element(2))) {
        let ab = a.weyl_mul(&b).unwrap();
        prop_assert!(close(&ab.weyl_mul(&c).unwrap(), &a.weyl_mul(&b.weyl_mul(&c).unwrap()).unwrap(), 1e-12));
        prop_assert!(close(&ab.adjoint(), &b.adjoint().weyl_mul(&a.adjoint()).unwrap(), 1e-12));
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn l1_norm_is_submultiplicative((a, b) in (element(3), element(3))) {
        prop_assert!(a.weyl_mul(&b).unwrap().l1_norm() <= a.l1_norm() * b.l1_norm() + 1e-12);
    }

    #[test]
    fn generators_are_unitary(z in point(2)) {
        let s = SymplecticSpace::standard(2);
        let w = W::generator(s, z).unwrap();
        prop_assert!(close(&w.adjoint().weyl_mul(&w).unwrap(), &W::unit(s), 1e-12));
        prop_assert!(close(&w.weyl_mul(&w.adjoint()).unwrap(), &W::unit(s), 1e-12));
    }

    #[test]
    fn states_are_normalised_hermitian_and_bounded(z in point(2)) {
        for g in states(2) {
            prop_assert_eq!(g.eval(&PhasePoint::zero(2)).unwrap(), Complex::new(1.0, 0.0));
            let (v, w) = (g.eval(&z).unwrap(), g.eval(&-&z).unwrap());
            prop_assert!((v - w.conj()).norm() <= 1e-15);
            prop_assert!(v.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn states_are_linear((a, b, alpha) in (element(2), element(2), coeff())) {
        for g in states(2) {
            let lhs = evaluate_state(&g, &a.scale(alpha).add(&b).unwrap()).unwrap();
            let rhs = alpha * evaluate_state(&g, &a).unwrap() + evaluate_state(&g, &b).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn states_are_positive_on_squares(a in element(2)) {
        for g in states(2) {
            let v = evaluate_state(&g, &a.adjoint().weyl_mul(&a).unwrap()).unwrap();
            prop_assert!(v.re >= -1e-12 && v.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn kernels_are_psd_on_random_sets(pts in prop::collection::vec(point(2), 1..14)) {
        let pts = distinct(pts);
        for g in states(2) {
            let rep = kernel_positivity(&g, &pts, PSD_TOL).unwrap();
            prop_assert_eq!(rep.verdict, Verdict::Psd);
        }
    }

    #[test]
    fn gns_null_vectors_have_zero_norm(pts in prop::collection::vec(point(1), 2..12)) {
        let pts = distinct(pts);
        for g in states(1) {
            let span = gns_build(&g, &pts, NULL_TOL).unwrap();
            prop_assert_eq!(span.rank() + span.null_basis().len(), pts.len());
            for v in span.null_basis() {
                prop_assert!(span.inner(v, v).unwrap().norm() <= 1e-9 * pts.len() as f64);
            }
        }
    }

    #[test]
    fn grid_weyl_operators_are_unitary(z1 in -4.0..4.0f64, z2 in -4.0..4.0f64, shift in -2.0..2.0f64) {
        let rep = GridRep::<f64>::new(512, 16.0).unwrap();
        let psi = rep.translate(&rep.vacuum(), shift).unwrap();
        let out = rep.apply_real(z1, z2, &psi).unwrap();
        prop_assert!((rep.norm(&out) - rep.norm(&psi)).abs() <= 1e-10);
        let back = rep.apply_real(-z1, -z2, &out).unwrap();
        let err = back.iter().zip(&psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10);
    }
}

#[test]
fn single_precision_is_usable() {
    let s = SymplecticSpace::standard(1);
    let y = PhasePoint::from_fracs(&[(1, 2)], &[(3, 1)]).unwrap();
    let z = PhasePoint::from_fracs(&[(-2, 3)], &[(1, 4)]).unwrap();
    let wy = WeylElementF32::generator(s, y.clone()).unwrap();
    let wz = WeylElementF32::generator(s, z.clone()).unwrap();
    let prod = wy.weyl_mul(&wz).unwrap();
    let expected = Complex::from_polar(1.0f32, s.phase_angle(&y, &z).unwrap() as f32);
    assert!((prod.coefficient(&(&y + &z)) - expected).norm() < 1e-6);

    let g = GeneratingFunctionF32::fock(1);
    let v = evaluate_state(&g, &prod).unwrap();
    let v64 = evaluate_state(&GeneratingFunction::<f64>::fock(1), &prod.cast::<f64>()).unwrap();
    assert!(((v.re as f64) - v64.re).abs() < 1e-5 && ((v.im as f64) - v64.im).abs() < 1e-5);

    let rep = GridRepF32::new(256, 12.0).unwrap();
    let omega = rep.vacuum();
    assert!((rep.norm(&omega) - 1.0).abs() < 1e-5);
    let out = rep.apply_real(1.0, -0.5, &omega).unwrap();
    assert!((rep.norm(&out) - 1.0).abs() < 1e-4);
}
