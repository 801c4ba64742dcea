//! Reference sprays and Finsler functions with sampling regions inside
//! their domains.

use crate::expr::{ScalarModel, SprayModel};
use crate::geometry::projective_deform;
use crate::sampling::SampleBox;

pub const EUCLIDEAN_NORM_2: &str = "sqrt(y1^2+y2^2)";
pub const SPHERE_METRIC: &str = "sqrt(y1^2 + sin(x1)^2*y2^2)";

/// A spray together with a sampling region where it is defined.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub spray: SprayModel,
    pub region: SampleBox,
}

/// `sqrt(y1^2 + .. + yn^2)`.
pub fn euclidean_norm_text(n: usize) -> String {
    let terms: Vec<String> = (1..=n).map(|i| format!("y{i}^2")).collect();
    format!("sqrt({})", terms.join("+"))
}

pub fn euclidean_norm(n: usize) -> ScalarModel {
    ScalarModel::parse(n, &euclidean_norm_text(n), 1).expect("well-formed fixture")
}

pub fn flat(n: usize) -> Fixture {
    Fixture {
        name: "flat",
        spray: SprayModel::flat(n),
        region: SampleBox::unit(n),
    }
}

/// Straight lines of the Euclidean plane in polar coordinates `(r, θ)`.
pub fn polar_flat() -> Fixture {
    Fixture {
        name: "polar-flat",
        spray: SprayModel::parse(2, &["x1*y2^2", "-2*y1*y2/x1"]).expect("well-formed fixture"),
        region: SampleBox::with_x(vec![0.5, -1.0], vec![2.0, 1.0]),
    }
}

/// Great circles of the unit sphere in coordinates `(polar angle, azimuth)`.
pub fn sphere() -> Fixture {
    Fixture {
        name: "sphere",
        spray: SprayModel::parse(2, &["sin(x1)*cos(x1)*y2^2", "-2*(cos(x1)/sin(x1))*y1*y2"])
            .expect("well-formed fixture"),
        region: SampleBox::with_x(vec![0.3, -1.0], vec![2.8, 1.0]),
    }
}

pub fn sphere_metric() -> ScalarModel {
    ScalarModel::parse(2, SPHERE_METRIC, 1).expect("well-formed fixture")
}

/// The flat spray deformed by the projective factor `|y|`.
pub fn deformed_flat(n: usize) -> Fixture {
    Fixture {
        name: "deformed-flat",
        spray: projective_deform(&SprayModel::flat(n), &euclidean_norm(n))
            .expect("|y| is 1-homogeneous"),
        region: SampleBox::unit(n),
    }
}

/// A 1-homogeneous function that is not a metric for the flat spray.
pub fn perturbed_norm() -> ScalarModel {
    ScalarModel::parse(2, "sqrt(y1^2+y2^2) + x1*y1^2/sqrt(y1^2+y2^2)", 1)
        .expect("well-formed fixture")
}

/// The four sprays used for the geometric identity suite.
pub fn geometric_fixtures() -> Vec<Fixture> {
    vec![flat(2), polar_flat(), deformed_flat(2), sphere()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_points;

    #[test]
    fn fixtures_are_two_homogeneous() {
        for fx in geometric_fixtures().into_iter().chain([deformed_flat(3)]) {
            let pts = sample_points(&fx.region, 30, 7);
            let r = fx.spray.homogeneity_check(&pts, 1e-9).unwrap();
            assert!(r.pass, "{}", fx.name);
        }
    }

    #[test]
    fn euclidean_text() {
        assert_eq!(euclidean_norm_text(3), "sqrt(y1^2+y2^2+y3^2)");
    }
}
