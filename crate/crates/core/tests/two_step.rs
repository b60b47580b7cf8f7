mod common;

use approx::assert_abs_diff_eq;
use common::*;
use liesoliton::catalog;
use liesoliton::soliton::{self, GradientVerdict, SolitonType, Verdict};
use liesoliton::two_step::*;
use liesoliton::{Matrix, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn heis5_j_map_is_two_rotations() {
    let dec = decompose_two_step(&catalog::heis5(), &tol()).unwrap();
    let rot = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let mut expected = Matrix::zeros(4, 4);
    expected.view_mut((0, 0), (2, 2)).copy_from(&rot);
    expected.view_mut((2, 2), (2, 2)).copy_from(&rot);
    assert!((&dec.j_maps[0] - expected).amax() < 1e-12);
    assert_eq!(ricci_kernel_two_step(&dec, &tol()).ncols(), 0);
}

#[test]
fn htype_catalog() {
    for m in [catalog::heis3(), catalog::heis5(), catalog::quaternionic_heisenberg()] {
        let dec = decompose_two_step(&m, &tol()).unwrap();
        assert!(is_htype(&dec, &tol()));
        assert!(is_nonsingular(&dec, &tol()));
        assert_eq!(ricci_kernel_checked(&m, &dec, &tol()).unwrap().ncols(), 0);
        assert_eq!(
            soliton::gradient_obstruction(&m, &tol()).verdict,
            GradientVerdict::NotGradient
        );
    }
}

#[test]
fn j_maps_are_skew_and_rebuild_brackets() {
    let g = Matrix::from_row_slice(
        5,
        5,
        &[
            1.5, 0.2, 0.0, 0.1, 0.3, 0.2, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.1, 0.0, 0.1, 0.0, 0.1, 1.0, 0.2, 0.3,
            0.0, 0.0, 0.2, 1.2,
        ],
    );
    let m = catalog::heis5().with_metric(g).unwrap();
    let dec = decompose_two_step(&m, &tol()).unwrap();
    for j in &dec.j_maps {
        assert!((j + j.transpose()).amax() < 1e-12);
    }
    let gram = dec.z_basis.transpose() * m.metric() * &dec.z_basis;
    assert!((gram - Matrix::identity(1, 1)).amax() < 1e-12);
    let p = dec.v_basis.ncols();
    for b in 0..p {
        for c in 0..p {
            let direct = m
                .alg()
                .bracket(&dec.v_basis.column(b).into(), &dec.v_basis.column(c).into());
            assert!((direct - dec.bracket_from_j(b, c)).amax() < 1e-12);
        }
    }
}

#[test]
fn hyperbolic_extensions() {
    for n in 1..=3 {
        let base = catalog::abelian(n);
        let ext = solvable_extension(&base, &Matrix::identity(n, n), 1.0, &tol()).unwrap();
        let check = is_einstein(&ext.extended, &tol());
        assert!(check.einstein);
        let ric = ext.extended.curvature().ricci_form;
        assert!((ric + Matrix::identity(n + 1, n + 1) * n as f64).amax() < 1e-12);
        assert_abs_diff_eq!(check.lambda_einstein, -(n as f64), epsilon = 1e-12);
    }
}

#[test]
fn extension_structure() {
    let d = diag(&[1.0, 1.0, 2.0]);
    let ext = solvable_extension(&catalog::heis3(), &d, 0.5, &tol()).unwrap();
    let alg = ext.extended.alg();
    assert_eq!(alg.dim(), 4);
    assert_eq!(alg.structure(0, 1, 2), 1.0);
    assert_eq!(alg.structure(3, 2, 2), 1.0);
    assert!(alg.check_jacobi() < 1e-12);
    assert!(alg.is_solvable(&tol()));
    assert_eq!(ext.extended.metric()[(3, 3)], 1.0);
    assert!(is_einstein(&ext.extended, &tol()).einstein);
}

#[test]
fn abelian_scale_prefers_one() {
    let s = find_einstein_scale(&catalog::abelian(2), &Matrix::identity(2, 2), &tol()).unwrap();
    assert!(s.found);
    assert_eq!(s.scale, 1.0);
}

#[test]
fn nilsoliton_round_trip_to_einstein() {
    for m in [
        catalog::heis3(),
        catalog::heis5(),
        catalog::nil4(),
        catalog::quaternionic_heisenberg(),
    ] {
        let cert = soliton::solve_nilsoliton(&m, &tol()).unwrap();
        assert_eq!(cert.verdict, Verdict::Nilsoliton);
        let d = cert.derivation.unwrap();
        let d_sym = metric_symmetric_part(&d, m.metric());
        assert!((&d - &d_sym).amax() < 1e-9);
        let s = find_einstein_scale(&m, &d_sym, &tol()).unwrap();
        assert!(s.found, "{s:?}");
        // s^2 tr D = 1 makes the extension Einstein.
        assert_abs_diff_eq!(s.scale * s.scale * d.trace(), 1.0, epsilon = 1e-6);
    }
}

#[test]
fn htype_implies_expanding_nilsoliton() {
    for m in [catalog::heis3(), catalog::heis5(), catalog::quaternionic_heisenberg()] {
        let cert = soliton::solve_nilsoliton(&m, &tol()).unwrap();
        assert_eq!(cert.soliton_type, Some(SolitonType::Expanding));
    }
}

#[test]
fn nonsingularity_samples_the_center() {
    // j(z) on heis3 ⊕ heis3 has a kernel whenever z lies on a coordinate axis of the center.
    let m = catalog::heis3().direct_sum(&catalog::heis3());
    let dec = decompose_two_step(&m, &tol()).unwrap();
    assert_eq!(dec.center_dim(), 2);
    assert!(!is_nonsingular(&dec, &tol()));
    assert!(!is_htype(&dec, &tol()));
}
