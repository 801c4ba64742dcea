//! Worked examples with hand-computed expected values.

use approx::assert_abs_diff_eq;

use projmetric::expr::{ScalarModel, SprayModel};
use projmetric::fixtures;
use projmetric::geometry::{
    adapted_frame_at, geodesic_flow, liouville, projective_deform, vertical_endomorphism,
};
use projmetric::operators::{
    euler_lagrange_form, hessian_metric, obstruction_r, p_c, p_gamma, p_s, projective_factor,
};
use projmetric::point::TangentPoint;
use projmetric::sampling::{sample_points, SampleBox};
use projmetric::symbols::{
    exactness_check, involutivity_audit, restricted_kernel_dims, sym_dim, system_symbol,
    FlagBasis, System,
};

fn pt(x: &[f64], y: &[f64]) -> TangentPoint {
    TangentPoint::new(x.to_vec(), y.to_vec()).unwrap()
}

fn scalar(n: usize, text: &str, degree: i32) -> ScalarModel {
    ScalarModel::parse(n, text, degree).unwrap()
}

#[test]
fn p_s_vanishes_for_known_metrics() {
    let flat = fixtures::flat(2);
    let norm = fixtures::euclidean_norm(2);
    for p in sample_points(&flat.region, 30, 1) {
        assert!(p_s(&flat.spray, &norm, &p).unwrap().max_abs() < 1e-10);
    }
    let sphere = fixtures::sphere();
    let metric = fixtures::sphere_metric();
    for p in sample_points(&sphere.region, 30, 1) {
        assert!(p_s(&sphere.spray, &metric, &p).unwrap().max_abs() < 1e-9);
    }
}

#[test]
fn p_c_residuals() {
    let p = pt(&[0.3, -0.4], &[1.5, 0.7]);
    let norm = p_c(&fixtures::euclidean_norm(2), &p).unwrap();
    assert!(norm.value.abs() < 1e-12);
    assert!(norm.dx.iter().chain(&norm.dy).all(|v| v.abs() < 1e-12));
    // y·∂(y1²)/∂y - y1² = y1²
    let square = p_c(&scalar(2, "y1^2", 1), &p).unwrap();
    assert_abs_diff_eq!(square.value.abs(), 2.25, epsilon = 1e-14);
    let linear = p_c(&scalar(2, "y1 + x1*y2", 1), &p).unwrap();
    assert!(linear.value.abs() < 1e-14);
    let m = SprayModel::parse(2, &["y2^2", "x1*y1*y2"]).unwrap();
    assert!(p_s(&m, &scalar(2, "y1 + x1*y2", 1), &p).unwrap().max_abs() > 1e-3);
}

#[test]
fn p_gamma_zero_cases() {
    let flat = fixtures::flat(2);
    let norm = fixtures::euclidean_norm(2);
    let sphere = fixtures::sphere();
    for p in sample_points(&flat.region, 20, 2) {
        let v = p_gamma(&flat.spray, &norm, &p).unwrap();
        assert!(v.components.iter().all(|c| c.abs() < 1e-12));
        assert!(v.containment < 1e-10);
    }
    for p in sample_points(&sphere.region, 20, 2) {
        let v = p_gamma(&sphere.spray, &scalar(2, "y1", 1), &p).unwrap();
        assert!(v.components.iter().all(|c| c.abs() < 1e-12));
        assert!(v.other_blocks < 1e-12);
        let w = p_gamma(&sphere.spray, &norm, &p).unwrap();
        assert!(w.containment < 1e-10);
    }
}

#[test]
fn obstruction_cases() {
    let sphere = fixtures::sphere();
    let p = sample_points(&sphere.region, 1, 3).remove(0);
    let r = obstruction_r(&sphere.spray, &fixtures::perturbed_norm(), &p).unwrap();
    assert!(r.components.is_empty());
    let flat = fixtures::flat(3);
    let f = scalar(3, "sqrt(y1^2+2*y2^2+3*y3^2) + x1*y2", 1);
    for p in sample_points(&flat.region, 10, 3) {
        let r = obstruction_r(&flat.spray, &f, &p).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(r.components[0].abs() < 1e-12);
    }
}

#[test]
fn euler_lagrange_examples() {
    let energy = scalar(2, "0.5*(y1^2+y2^2)", 2);
    let p = pt(&[0.2, 0.1], &[0.9, -1.3]);
    let flat = euler_lagrange_form(&SprayModel::flat(2), &energy, &p).unwrap();
    assert!(flat.omega.iter().chain(&flat.coordinate).all(|v| v.abs() < 1e-14));

    let sphere = fixtures::sphere();
    let e = scalar(2, "0.5*(y1^2 + sin(x1)^2*y2^2)", 2);
    for p in sample_points(&sphere.region, 20, 4) {
        let w = euler_lagrange_form(&sphere.spray, &e, &p).unwrap();
        assert!(w.omega.iter().all(|v| v.abs() < 1e-9));
    }

    // with E = |y|²/2 the coordinate expression reduces to f^i
    let bent = SprayModel::parse(2, &["y1^2+y2^2", "0"]).unwrap();
    let w = euler_lagrange_form(&bent, &energy, &p).unwrap();
    assert_abs_diff_eq!(w.coordinate[0], 0.81 + 1.69, epsilon = 1e-13);
    assert_abs_diff_eq!(w.coordinate[1], 0.0, epsilon = 1e-13);
    assert_abs_diff_eq!(w.omega[0].abs(), 2.5, epsilon = 1e-13);
}

#[test]
fn hessian_examples() {
    let h = hessian_metric(&fixtures::euclidean_norm(2), &pt(&[0.0, 0.0], &[0.3, -2.0])).unwrap();
    assert_abs_diff_eq!(h.min_eigenvalue, 1.0, epsilon = 1e-13);
    for (a, b) in h.g.iter().zip([1.0, 0.0, 0.0, 1.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let h = hessian_metric(&fixtures::sphere_metric(), &pt(&[half_pi, 0.4], &[0.6, 0.8])).unwrap();
    for (a, b) in h.g.iter().zip([1.0, 0.0, 0.0, 1.0]) {
        assert_abs_diff_eq!(*a, b, epsilon = 1e-13);
    }
    let h = hessian_metric(&scalar(2, "y1", 1), &pt(&[0.0, 0.0], &[2.0, 1.0])).unwrap();
    assert_abs_diff_eq!(h.min_eigenvalue, 0.0, epsilon = 1e-13);
    assert!(!h.positive_definite);
}

#[test]
fn projective_factor_examples() {
    let flat = SprayModel::flat(2);
    let norm = fixtures::euclidean_norm(2);
    for p in sample_points(&SampleBox::unit(2), 10, 6) {
        assert_eq!(projective_factor(&flat, None, &norm, &p).unwrap().value, 0.0);
    }
    // S F̃ / (2F̃) for the deformed spray is 2-homogeneous over 1-homogeneous
    let deformed = projective_deform(&flat, &norm).unwrap();
    for p in sample_points(&SampleBox::unit(2), 10, 6) {
        let a = projective_factor(&deformed, Some(&flat), &norm, &p).unwrap();
        assert!(a.consistency.unwrap() < 1e-9);
        let y2: Vec<f64> = p.y.iter().map(|v| 2.5 * v).collect();
        let b = projective_factor(&deformed, None, &norm, &pt(&p.x, &y2)).unwrap();
        assert!((b.value - 2.5 * a.value).abs() < 1e-9 * (1.0 + a.value.abs()));
    }
}

#[test]
fn adapted_frames_are_nonsingular() {
    for fx in [fixtures::polar_flat(), fixtures::sphere(), fixtures::deformed_flat(2)] {
        for p in sample_points(&fx.region, 100, 8) {
            let frame = adapted_frame_at(&fx.spray, &p).unwrap();
            assert!(frame.matrix.determinant().abs() > 1e-8, "{}", fx.name);
            let j = vertical_endomorphism(2);
            for i in 0..2 {
                let diff = &j * frame.horizontal(i) - frame.vertical(i);
                assert!(diff.amax() < 1e-14);
            }
            assert!((frame.vertical(1) - liouville(&p)).amax() < 1e-14);
        }
    }
}

#[test]
fn polar_geodesic_is_the_line_x_equals_one() {
    let m = fixtures::polar_flat().spray;
    let path = geodesic_flow(&m, &[1.0, 0.0], &[0.0, 1.0], 1.0, 1e-3).unwrap();
    assert!(path.exit.is_none());
    for x in &path.xs {
        assert!((x[0] * x[1].cos() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn sphere_geodesic_conserves_energy() {
    let m = fixtures::sphere().spray;
    let path = geodesic_flow(&m, &[1.1, 0.0], &[0.3, 0.8], 2.0, 1e-3).unwrap();
    let energy = |x: &[f64], y: &[f64]| 0.5 * (y[0] * y[0] + x[0].sin().powi(2) * y[1] * y[1]);
    let e0 = energy(&path.xs[0], &path.ys[0]);
    for (x, y) in path.xs.iter().zip(&path.ys) {
        assert!((energy(x, y) - e0).abs() < 1e-8);
    }
}

#[test]
fn symbol_examples() {
    assert_eq!((sym_dim(2, 2), sym_dim(3, 2), sym_dim(3, 3)), (10, 20, 56));
    let r = exactness_check(System::P2, 3).unwrap();
    assert!(r.exact && r.composition_zero);
    assert_eq!((r.rank_sigma3, r.ker_tau), (34, 34));
    let a = involutivity_audit(System::P2, 3).unwrap();
    assert_eq!((a.g2, a.g3, a.flag_sum), (12, 22, 22));
    let a = involutivity_audit(System::P1, 1).unwrap();
    assert_eq!(a.flag_dims, vec![1, 0, 0]);
    assert!(a.quasi_regular);
}

#[test]
fn coordinate_basis_obeys_cartan_bound() {
    for sys in [System::P1, System::P2] {
        for n in 2..=3 {
            let dims = restricted_kernel_dims(sys, &FlagBasis::frame(n), n).unwrap();
            let g3 = system_symbol(sys, 3, n).unwrap().kernel_dim();
            assert!(dims.iter().sum::<usize>() >= g3, "{sys} n={n}: {dims:?} vs {g3}");
        }
    }
}
