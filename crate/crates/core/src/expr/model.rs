use serde::Serialize;

use super::{parse, Expr, ExprError, Var};
use crate::point::TangentPoint;

/// Default relative tolerance of the Euler homogeneity test.
pub const HOMOGENEITY_TOL: f64 = 1e-9;

/// A spray `S = y^i ∂/∂x^i + f^i(x,y) ∂/∂y^i` given by its coefficient
/// expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct SprayModel {
    n: usize,
    f: Vec<Expr>,
}

/// A scalar function on the tangent bundle with a declared degree of
/// homogeneity in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarModel {
    n: usize,
    expr: Expr,
    degree: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub max_residual: f64,
    /// Largest residual divided by `|g| + 1` at its sample.
    pub max_scaled_residual: f64,
    pub worst_sample: usize,
    pub tolerance: f64,
    pub pass: bool,
}

fn check_vars(e: &Expr, n: usize) -> Result<(), ExprError> {
    match e.max_var_index() {
        Some(m) if m >= n => Err(ExprError::DimensionMismatch { n }),
        _ => Ok(()),
    }
}

/// Euler residual `Σ y^i ∂g/∂y^i - k g` at `p`, together with `g(p)`.
pub(crate) fn euler_residual(
    e: &Expr,
    degree: f64,
    p: &TangentPoint,
) -> Result<(f64, f64), ExprError> {
    let n = p.dim();
    let jet = e.eval_jet(p)?;
    let euler: f64 = (0..n).map(|i| p.y[i] * jet.d1(n + i)).sum();
    Ok((euler - degree * jet.value(), jet.value()))
}

fn homogeneity(
    parts: &[(&Expr, f64)],
    samples: &[TangentPoint],
    tol: f64,
) -> Result<HomogeneityReport, ExprError> {
    let mut report = HomogeneityReport {
        max_residual: 0.0,
        max_scaled_residual: 0.0,
        worst_sample: 0,
        tolerance: tol,
        pass: true,
    };
    for (index, p) in samples.iter().enumerate() {
        for (e, k) in parts {
            let (res, value) = euler_residual(e, *k, p).map_err(|source| ExprError::AtSample {
                index,
                source: Box::new(source),
            })?;
            let res = res.abs();
            let scaled = res / (value.abs() + 1.0);
            report.max_residual = report.max_residual.max(res);
            if scaled > report.max_scaled_residual {
                report.max_scaled_residual = scaled;
                report.worst_sample = index;
            }
        }
    }
    report.pass = report.max_scaled_residual <= tol;
    Ok(report)
}

impl SprayModel {
    pub fn new(n: usize, f: Vec<Expr>) -> Result<Self, ExprError> {
        if f.len() != n {
            return Err(ExprError::DimensionMismatch { n });
        }
        for e in &f {
            check_vars(e, n)?;
        }
        Ok(SprayModel { n, f })
    }

    pub fn parse(n: usize, coefficients: &[&str]) -> Result<Self, ExprError> {
        let f = coefficients
            .iter()
            .map(|s| parse(s, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, f)
    }

    /// The spray with `f ≡ 0` (straight lines).
    pub fn flat(n: usize) -> Self {
        SprayModel {
            n,
            f: vec![Expr::Num(0.0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Expr] {
        &self.f
    }

    /// Renames coordinates: new coordinate `perm[i]` is old coordinate `i`,
    /// applied to both `x` and `y`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let rename = |v: Var| Var {
            kind: v.kind,
            index: perm[v.index],
        };
        let mut f = vec![Expr::Num(0.0); self.n];
        for (i, e) in self.f.iter().enumerate() {
            f[perm[i]] = e.map_vars(&rename);
        }
        SprayModel { n: self.n, f }
    }

    /// Checks that every `f^i` is 2-homogeneous in `y` on the samples.
    pub fn homogeneity_check(
        &self,
        samples: &[TangentPoint],
        tol: f64,
    ) -> Result<HomogeneityReport, ExprError> {
        let parts: Vec<_> = self.f.iter().map(|e| (e, 2.0)).collect();
        homogeneity(&parts, samples, tol)
    }
}

impl ScalarModel {
    pub fn new(n: usize, expr: Expr, degree: i32) -> Result<Self, ExprError> {
        check_vars(&expr, n)?;
        Ok(ScalarModel { n, expr, degree })
    }

    pub fn parse(n: usize, text: &str, degree: i32) -> Result<Self, ExprError> {
        Self::new(n, parse(text, n)?, degree)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn homogeneity_check(
        &self,
        samples: &[TangentPoint],
        tol: f64,
    ) -> Result<HomogeneityReport, ExprError> {
        homogeneity(&[(&self.expr, self.degree as f64)], samples, tol)
    }

    /// `C g - k g` at `p` for the declared degree `k`.
    pub fn euler_residual(&self, p: &TangentPoint) -> Result<f64, ExprError> {
        euler_residual(&self.expr, self.degree as f64, p).map(|(r, _)| r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_points, SampleBox};

    #[test]
    fn euclidean_norm_is_one_homogeneous() {
        let f = ScalarModel::parse(2, "sqrt(y1^2+y2^2)", 1).unwrap();
        let samples = sample_points(&SampleBox::unit(2), 50, 1);
        let r = f.homogeneity_check(&samples, HOMOGENEITY_TOL).unwrap();
        assert!(r.pass);
        assert!(r.max_residual < 1e-12);
    }

    #[test]
    fn inhomogeneous_spray_fails_with_hand_residual() {
        // y^i ∂/∂y^i (y1^2 + x1 y2) - 2 (y1^2 + x1 y2) = -x1 y2
        let m = SprayModel::parse(2, &["y1^2 + x1*y2", "0"]).unwrap();
        let p = TangentPoint::new(vec![0.7, 0.0], vec![1.0, 1.5]).unwrap();
        let r = m.homogeneity_check(&[p], HOMOGENEITY_TOL).unwrap();
        assert!(!r.pass);
        assert!((r.max_residual - 0.7 * 1.5).abs() < 1e-14);
    }

    #[test]
    fn linear_function_is_one_homogeneous() {
        let f = ScalarModel::parse(2, "y1", 1).unwrap();
        let samples = sample_points(&SampleBox::unit(2), 20, 3);
        assert!(f.homogeneity_check(&samples, HOMOGENEITY_TOL).unwrap().pass);
    }

    #[test]
    fn sample_errors_are_identified() {
        let f = ScalarModel::parse(1, "1/x1", 0).unwrap();
        let pts = vec![
            TangentPoint::new(vec![1.0], vec![1.0]).unwrap(),
            TangentPoint::new(vec![0.0], vec![1.0]).unwrap(),
        ];
        match f.homogeneity_check(&pts, HOMOGENEITY_TOL) {
            Err(ExprError::AtSample { index: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_arity_rejected() {
        assert!(SprayModel::parse(2, &["0"]).is_err());
        assert!(ScalarModel::new(1, parse("y2", 2).unwrap(), 1).is_err());
    }

    #[test]
    fn permutation_relabels_coefficients() {
        let m = SprayModel::parse(2, &["x1*y2^2", "y1"]).unwrap();
        let p = m.permuted(&[1, 0]);
        assert_eq!(p.coefficients()[1].to_string(), "x2*y1^2");
        assert_eq!(p.coefficients()[0].to_string(), "y2");
    }
}
