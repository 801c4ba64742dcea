//! Jets against nested central finite differences.

mod support;

use support::{fd_partial, worst_relative_error, ORACLE_REL_TOL};

#[test]
fn jets_match_finite_differences() {
    let (err, at) = worst_relative_error(20);
    eprintln!("worst relative error {err:.3e} at {at}");
    assert!(err < ORACLE_REL_TOL, "{err:.3e} at {at}");
}

#[test]
fn stencil_is_exact_on_cubics() {
    let f = |z: &[f64]| z[0].powi(3) * z[1] + 2.0 * z[1].powi(2);
    let z = [0.7, -1.3];
    assert!((fd_partial(&f, &z, &[0, 0, 1], 0.1) - 6.0 * 0.7).abs() < 1e-9);
    assert!((fd_partial(&f, &z, &[1, 1], 0.1) - 4.0).abs() < 1e-9);
}
