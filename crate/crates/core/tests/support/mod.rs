//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use projmetric::expr::{parse, Expr};
use projmetric::fixtures;
use projmetric::multi_index::enumerate_sorted;
use projmetric::sampling::{sample_points, SampleBox};

pub const FD_STEP: f64 = 1e-2;
pub const ORACLE_REL_TOL: f64 = 1e-6;

/// `∂/∂z_vars[0] ... ∂/∂z_vars[k-1]` of `f` at `z`, by nesting the
/// five-point central stencil once per variable.
pub fn fd_partial(f: &dyn Fn(&[f64]) -> f64, z: &[f64], vars: &[usize], h: f64) -> f64 {
    let Some((&v, rest)) = vars.split_first() else {
        return f(z);
    };
    let at = |s: f64| {
        let mut w = z.to_vec();
        w[v] += s * h;
        fd_partial(f, &w, rest, h)
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
}

/// [`fd_partial`] at steps `h` and `h/2` combined by one Richardson step,
/// which cancels the leading `h^4` error term.
pub fn fd_partial_extrapolated(
    f: &dyn Fn(&[f64]) -> f64,
    z: &[f64],
    vars: &[usize],
    h: f64,
) -> f64 {
    let coarse = fd_partial(f, z, vars, h);
    let fine = fd_partial(f, z, vars, h / 2.0);
    (16.0 * fine - coarse) / 15.0
}

/// Plain evaluation of `e` with `z = (x1..xn, y1..yn)`.
pub fn eval_flat(e: &Expr, z: &[f64]) -> f64 {
    let n = z.len() / 2;
    e.eval(&z[..n], &z[n..]).expect("point inside the domain")
}

/// Expression text, dimension and sampling region.
pub struct OracleCase {
    pub label: String,
    pub n: usize,
    pub text: String,
    pub region: SampleBox,
}

fn case(label: &str, n: usize, text: &str, region: SampleBox) -> OracleCase {
    OracleCase {
        label: label.to_string(),
        n,
        text: text.to_string(),
        region,
    }
}

/// Every spray coefficient and Finsler function used by the fixtures, plus
/// expressions exercising the remaining elementary functions.
pub fn oracle_cases() -> Vec<OracleCase> {
    let polar = fixtures::polar_flat().region;
    let sphere = fixtures::sphere().region;
    let mut cases = vec![
        case("polar f1", 2, "x1*y2^2", polar.clone()),
        case("polar f2", 2, "-2*y1*y2/x1", polar.clone()),
        case("polar metric", 2, "sqrt(y1^2 + x1^2*y2^2)", polar),
        case("sphere f1", 2, "sin(x1)*cos(x1)*y2^2", sphere.clone()),
        case("sphere f2", 2, "-2*(cos(x1)/sin(x1))*y1*y2", sphere.clone()),
        case("sphere metric", 2, fixtures::SPHERE_METRIC, sphere),
        case(
            "euclidean",
            2,
            fixtures::EUCLIDEAN_NORM_2,
            SampleBox::unit(2),
        ),
        case(
            "perturbed",
            2,
            "sqrt(y1^2+y2^2) + x1*y1^2/sqrt(y1^2+y2^2)",
            SampleBox::unit(2),
        ),
        case(
            "elementary",
            2,
            "exp(x1/2)*y1^2 + log(2 + x2)*y1*y2 + y2^3/(y1^2+y2^2)^(1/2)",
            SampleBox::unit(2),
        ),
        case(
            "power",
            2,
            "(1 + x1^2)^-1*(y1^2 + 3*y2^2)^(3/2)",
            SampleBox::unit(2),
        ),
    ];
    for n in [2, 3] {
        let fx = fixtures::deformed_flat(n);
        for (i, e) in fx.spray.coefficients().iter().enumerate() {
            cases.push(case(
                &format!("deformed-flat n={n} f{}", i + 1),
                n,
                &e.to_string(),
                fx.region.clone(),
            ));
        }
    }
    cases
}

/// Largest `|jet - fd| / max(1, |fd|)` over all cases, samples and
/// derivatives of order at most three.
pub fn worst_relative_error(samples: usize) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for c in oracle_cases() {
        let e = parse(&c.text, c.n).unwrap();
        let f = |z: &[f64]| eval_flat(&e, z);
        for (s, p) in sample_points(&c.region, samples, 11).iter().enumerate() {
            let jet = e.eval_jet(p).unwrap();
            let z = p.coords();
            for k in 0..=3 {
                for vars in enumerate_sorted(k, 2 * c.n) {
                    let exact = jet.partial_sorted(&vars).unwrap();
                    let approx = fd_partial_extrapolated(&f, &z, &vars, FD_STEP);
                    let err = (exact - approx).abs() / approx.abs().max(1.0);
                    if err > worst.0 {
                        worst = (err, format!("{} sample {s} d{vars:?}", c.label));
                    }
                }
            }
        }
    }
    worst
}
