use super::*;
use approx::assert_abs_diff_eq;

fn polar() -> SprayModel {
    SprayModel::parse(2, &["x1*y2^2", "-2*y1*y2/x1"]).unwrap()
}

fn sphere() -> SprayModel {
    SprayModel::parse(2, &["sin(x1)*cos(x1)*y2^2", "-2*(cos(x1)/sin(x1))*y1*y2"]).unwrap()
}

fn pt(x: &[f64], y: &[f64]) -> TangentPoint {
    TangentPoint::new(x.to_vec(), y.to_vec()).unwrap()
}

#[test]
fn flat_connection_is_block_diagonal() {
    let c = connection_at(&SprayModel::flat(2), &pt(&[0.3, 0.1], &[1.0, 2.0])).unwrap();
    let mut expected = DMatrix::<f64>::identity(4, 4);
    expected[(2, 2)] = -1.0;
    expected[(3, 3)] = -1.0;
    assert_eq!(c.gamma, expected);
    assert_eq!(c.h[(0, 0)], 1.0);
    assert_eq!(c.h[(2, 2)], 0.0);
}

#[test]
fn polar_spray_vector_and_connection() {
    let p = pt(&[2.0, 0.0], &[1.0, 1.0]);
    let s = spray_vector(&polar(), &p).unwrap();
    assert_eq!(s.as_slice(), &[1.0, 1.0, 2.0, -1.0]);
    let c = connection_at(&polar(), &p).unwrap();
    // ∂f/∂y = [[0, 4], [-1, -1]]
    assert_abs_diff_eq!(c.gamma[(2, 0)], 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(c.gamma[(2, 1)], 4.0, epsilon = 1e-14);
    assert_abs_diff_eq!(c.gamma[(3, 0)], -1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(c.gamma[(3, 1)], -1.0, epsilon = 1e-14);
    for j in 0..2 {
        for a in 0..4 {
            let expected = if a == 2 + j { -1.0 } else { 0.0 };
            assert_eq!(c.gamma[(a, 2 + j)], expected);
        }
    }
}

#[test]
fn polar_flat_has_zero_curvature() {
    let c = curvature_at(&polar(), &pt(&[1.3, 0.4], &[0.7, -1.1])).unwrap();
    assert!(c.r.iter().all(|v| v.abs() < 1e-9));
    assert!(c.phi.iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn sphere_is_isotropic_with_nonzero_jacobi() {
    let p = pt(&[1.1, 0.3], &[0.6, 0.9]);
    let c = curvature_at(&sphere(), &p).unwrap();
    assert!(c.phi.iter().any(|v| v.abs() > 1e-3));
    assert!(c.checks.phi_of_s < 1e-9);
    let cl = classify_at(&sphere(), &p).unwrap();
    assert_eq!(cl.class, SprayClass::Isotropic);
    // constant curvature 1: Φ = |y|_g² J - g(y,·) ⊗ C, so λ = |y|_g²
    let g2 = 0.6_f64.powi(2) + (1.1_f64.sin() * 0.9).powi(2);
    assert_abs_diff_eq!(cl.lambda.unwrap(), g2, epsilon = 1e-9);
    assert!(cl.alpha_s_minus_lambda.abs() < 1e-9);
}

#[test]
fn deformed_flat_is_isotropic() {
    let norm = ScalarModel::parse(2, "sqrt(y1^2+y2^2)", 1).unwrap();
    let m = projective_deform(&SprayModel::flat(2), &norm).unwrap();
    let cl = classify_at(&m, &pt(&[0.2, -0.5], &[1.2, 0.4])).unwrap();
    assert_eq!(cl.class, SprayClass::Isotropic);
    assert!(cl.flat_defect > 1e-3);
}

#[test]
fn identities_hold_on_sphere() {
    let r = structural_identities(&sphere(), &pt(&[0.9, 0.3], &[-0.4, 1.3])).unwrap();
    assert!(r.max() < 1e-9, "{r:?}");
}

#[test]
fn deformed_projector_relation() {
    let factor = ScalarModel::parse(2, "y1", 1).unwrap();
    let m = SprayModel::parse(2, &["x1*y1*y2 + y2^2", "sin(x2)*y1^2"]).unwrap();
    let res = deformed_projector_check(&m, &factor, &pt(&[0.3, 0.8], &[1.0, -0.5])).unwrap();
    assert!(res < 1e-9);
}

#[test]
fn non_homogeneous_factor_rejected() {
    let factor = ScalarModel::parse(2, "y1^2", 1).unwrap();
    assert!(matches!(
        projective_deform(&SprayModel::flat(2), &factor),
        Err(GeometryError::NotHomogeneous(_))
    ));
}

#[test]
fn adapted_frame_of_flat_spray() {
    let f = adapted_frame_at(&SprayModel::flat(2), &pt(&[0.0, 0.0], &[0.0, 1.0])).unwrap();
    assert_eq!(f.pivot, 1);
    assert_eq!(f.matrix, DMatrix::<f64>::identity(4, 4));
}
