//! The Rapcsák operators `P_S`, `P_C`, `P_Γ`, the curvature obstruction
//! `i_R dd_J F`, the Euler–Lagrange form, the metric Hessian and the
//! projective factor, evaluated pointwise against candidate functions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{ExprError, ScalarModel, SprayModel};
use crate::geometry::{
    adapted_frame_at, connection_at, curvature_at, spray_vector, AdaptedFrame, GeometryError,
};
use crate::jets::Jet3;
use crate::point::TangentPoint;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("dimension mismatch: spray has n = {spray}, function has n = {function}")]
    Dimension { spray: usize, function: usize },
    #[error("function must be positive at the point, got {0}")]
    NonPositive(f64),
}

pub type Result<T, E = OperatorError> = std::result::Result<T, E>;

/// Value, first and second derivatives of a scalar function on `TM`.
struct Derivs {
    n: usize,
    jet: Jet3,
}

impl Derivs {
    fn new(f: &ScalarModel, p: &TangentPoint) -> Result<Self> {
        p.check_dim(f.dim()).map_err(GeometryError::from)?;
        Ok(Derivs {
            n: f.dim(),
            jet: f.expr().eval_jet(p)?,
        })
    }

    fn value(&self) -> f64 {
        self.jet.value()
    }
    fn x(&self, i: usize) -> f64 {
        self.jet.d1(i)
    }
    fn y(&self, i: usize) -> f64 {
        self.jet.d1(self.n + i)
    }
    fn xy(&self, i: usize, j: usize) -> f64 {
        self.jet.d2(i, self.n + j)
    }
    fn yy(&self, i: usize, j: usize) -> f64 {
        self.jet.d2(self.n + i, self.n + j)
    }

    /// `1 + |F| + ` the largest first or second derivative.
    fn scale(&self) -> f64 {
        1.0 + self.value().abs() + self.jet.low_order_norm()
    }
}

fn check_dims(m: &SprayModel, f: &ScalarModel) -> Result<()> {
    if m.dim() != f.dim() {
        return Err(OperatorError::Dimension {
            spray: m.dim(),
            function: f.dim(),
        });
    }
    Ok(())
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn omega_from(d: &Derivs) -> DMatrix<f64> {
    let n = d.n;
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    // d_J F = F_{y^j} dx^j, and Ω = d(d_J F)
    for i in 0..n {
        for j in 0..n {
            w[(i, j)] = d.xy(i, j) - d.xy(j, i);
            w[(n + i, j)] = d.yy(i, j);
            w[(j, n + i)] = -d.yy(i, j);
        }
    }
    w
}

/// `Ω = dd_J F` as a skew `2n × 2n` matrix, `Ω[(a, b)] = Ω(∂_a, ∂_b)`.
pub fn ddj(f: &ScalarModel, p: &TangentPoint) -> Result<DMatrix<f64>> {
    Ok(omega_from(&Derivs::new(f, p)?))
}

/// `i_S dd_J F` split into its `dx` and `dy` components.
#[derive(Debug, Clone, Serialize)]
pub struct PsValue {
    /// `Ω(S, ∂x^i)`.
    pub omega: Vec<f64>,
    /// `Ω(S, ∂y^i)`; zero for 1-homogeneous `F`.
    pub vertical: Vec<f64>,
    /// `y^j F_{x^j y^i} + f^j F_{y^j y^i} - F_{x^i}`.
    pub coordinate: Vec<f64>,
}

impl PsValue {
    pub fn max_abs(&self) -> f64 {
        max_abs(self.omega.iter().chain(&self.vertical).copied())
    }
}

fn ps_from(d: &Derivs, w: &DMatrix<f64>, s: &DVector<f64>, p: &TangentPoint) -> PsValue {
    let n = d.n;
    let contraction = w.transpose() * s;
    let coordinate = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| p.y[j] * d.xy(j, i) + s[n + j] * d.yy(j, i))
                .sum::<f64>()
                - d.x(i)
        })
        .collect();
    PsValue {
        omega: contraction.rows(0, n).iter().copied().collect(),
        vertical: contraction.rows(n, n).iter().copied().collect(),
        coordinate,
    }
}

/// `P_S F = i_S dd_J F`.
pub fn p_s(m: &SprayModel, f: &ScalarModel, p: &TangentPoint) -> Result<PsValue> {
    check_dims(m, f)?;
    let d = Derivs::new(f, p)?;
    let s = spray_vector(m, p)?;
    Ok(ps_from(&d, &omega_from(&d), &s, p))
}

/// `P_C F = CF - F` with its first derivatives.
#[derive(Debug, Clone, Serialize)]
pub struct PcValue {
    pub value: f64,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

impl PcValue {
    pub fn max_abs(&self) -> f64 {
        max_abs(std::iter::once(self.value).chain(self.dx.iter().chain(&self.dy).copied()))
    }
}

fn pc_from(d: &Derivs, p: &TangentPoint) -> PcValue {
    let n = d.n;
    let cf: f64 = (0..n).map(|i| p.y[i] * d.y(i)).sum();
    PcValue {
        value: cf - d.value(),
        dx: (0..n)
            .map(|i| (0..n).map(|j| p.y[j] * d.xy(i, j)).sum::<f64>() - d.x(i))
            .collect(),
        dy: (0..n)
            .map(|i| (0..n).map(|j| p.y[j] * d.yy(j, i)).sum())
            .collect(),
    }
}

pub fn p_c(f: &ScalarModel, p: &TangentPoint) -> Result<PcValue> {
    let d = Derivs::new(f, p)?;
    Ok(pc_from(&d, p))
}

/// `P_Γ F = i_Γ dd_J F` in the adapted frame.
#[derive(Debug, Clone, Serialize)]
pub struct PGammaValue {
    /// `(i_Γ Ω)(h_i, h_j)` for `i < j`, lexicographic.
    pub components: Vec<f64>,
    /// Largest component on the other blocks (zero by construction).
    pub other_blocks: f64,
    /// `|P_S F(hX) - ½ P_Γ F(S, hX)|` over coordinate `X`.
    pub containment: f64,
    #[serde(skip)]
    pub full: DMatrix<f64>,
}

fn pgamma_from(
    w: &DMatrix<f64>,
    gamma: &DMatrix<f64>,
    h: &DMatrix<f64>,
    s: &DVector<f64>,
    frame: &AdaptedFrame,
) -> PGammaValue {
    let n = frame.n;
    let full = gamma.transpose() * w + w * gamma;
    let in_frame = frame.matrix.transpose() * &full * &frame.matrix;
    let mut components = Vec::with_capacity(n * (n - 1) / 2);
    let mut other = 0.0_f64;
    for a in 0..2 * n {
        for b in 0..2 * n {
            if a < n && b < n {
                if a < b {
                    components.push(in_frame[(a, b)]);
                }
            } else {
                other = other.max(in_frame[(a, b)].abs());
            }
        }
    }
    let ps_h = (w.transpose() * s).transpose() * h;
    let pg_h = (full.transpose() * s).transpose() * h * 0.5;
    PGammaValue {
        components,
        other_blocks: other,
        containment: (ps_h - pg_h).amax(),
        full,
    }
}

pub fn p_gamma(m: &SprayModel, f: &ScalarModel, p: &TangentPoint) -> Result<PGammaValue> {
    check_dims(m, f)?;
    let d = Derivs::new(f, p)?;
    let conn = connection_at(m, p)?;
    let frame = adapted_frame_at(m, p)?;
    let s = spray_vector(m, p)?;
    Ok(pgamma_from(
        &omega_from(&d),
        &conn.gamma,
        &conn.h,
        &s,
        &frame,
    ))
}

/// `i_R dd_J F` on horizontal frame triples, via `R = ½[h, h]` and via
/// `R = ⅓[J, Φ]`.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionR {
    /// Components on `(h_i, h_j, h_k)`, `i < j < k`, lexicographic.
    pub components: Vec<f64>,
    pub components_from_phi: Vec<f64>,
    pub route_discrepancy: f64,
}

impl ObstructionR {
    pub fn max_abs(&self) -> f64 {
        max_abs(self.components.iter().copied())
    }
}

fn cyclic(
    w: &DMatrix<f64>,
    r: impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> f64 {
    let form = |u: &DVector<f64>, v: &DVector<f64>| (u.transpose() * w * v)[(0, 0)];
    form(&r(x, y), z) + form(&r(y, z), x) + form(&r(z, x), y)
}

fn obstruction_from(
    m: &SprayModel,
    w: &DMatrix<f64>,
    p: &TangentPoint,
    frame: &AdaptedFrame,
) -> Result<ObstructionR> {
    let n = m.dim();
    let mut out = ObstructionR {
        components: Vec::new(),
        components_from_phi: Vec::new(),
        route_discrepancy: 0.0,
    };
    if n < 3 {
        return Ok(out);
    }
    let curv = curvature_at(m, p)?;
    let hs: Vec<DVector<f64>> = (0..n).map(|i| frame.horizontal(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = cyclic(w, |u, v| curv.apply_r(u, v), &hs[i], &hs[j], &hs[k]);
                let b = cyclic(
                    w,
                    |u, v| curv.apply_r_from_phi(u, v),
                    &hs[i],
                    &hs[j],
                    &hs[k],
                );
                out.route_discrepancy = out.route_discrepancy.max((a - b).abs());
                out.components.push(a);
                out.components_from_phi.push(b);
            }
        }
    }
    Ok(out)
}

pub fn obstruction_r(m: &SprayModel, f: &ScalarModel, p: &TangentPoint) -> Result<ObstructionR> {
    check_dims(m, f)?;
    let w = ddj(f, p)?;
    let frame = adapted_frame_at(m, p)?;
    obstruction_from(m, &w, p, &frame)
}

/// `ω_E = i_S dd_J E + d(CE) - dE`.
#[derive(Debug, Clone, Serialize)]
pub struct EulerLagrange {
    pub omega: Vec<f64>,
    /// `dy` components; zero since `ω_E` is semi-basic.
    pub vertical: Vec<f64>,
    /// `y^j E_{x^j y^i} + f^j E_{y^j y^i} - E_{x^i}`.
    pub coordinate: Vec<f64>,
}

pub fn euler_lagrange_form(
    m: &SprayModel,
    e: &ScalarModel,
    p: &TangentPoint,
) -> Result<EulerLagrange> {
    check_dims(m, e)?;
    let n = m.dim();
    let d = Derivs::new(e, p)?;
    let s = spray_vector(m, p)?;
    let ps = ps_from(&d, &omega_from(&d), &s, p);
    // d(CE) = d(y^j E_{y^j})
    let dce_x = |i: usize| (0..n).map(|j| p.y[j] * d.xy(i, j)).sum::<f64>();
    let dce_y = |i: usize| d.y(i) + (0..n).map(|j| p.y[j] * d.yy(j, i)).sum::<f64>();
    Ok(EulerLagrange {
        omega: (0..n).map(|i| ps.omega[i] + dce_x(i) - d.x(i)).collect(),
        vertical: (0..n).map(|i| ps.vertical[i] + dce_y(i) - d.y(i)).collect(),
        coordinate: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| p.y[j] * d.xy(j, i) + s[n + j] * d.yy(j, i))
                    .sum::<f64>()
                    - d.x(i)
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    PositiveDefinite,
    Degenerate,
    Indefinite,
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianMetric {
    pub n: usize,
    /// Row-major `g_ij`.
    pub g: Vec<f64>,
    pub min_eigenvalue: f64,
    pub status: Definiteness,
    pub positive_definite: bool,
}

/// Relative width of the band around zero reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

fn hessian_from(d: &Derivs, degeneracy: f64) -> Result<HessianMetric> {
    let n = d.n;
    let f = d.value();
    if f.is_nan() || f <= 0.0 {
        return Err(OperatorError::NonPositive(f));
    }
    // ∂²(½F²)/∂y^i∂y^j = F_{y^i} F_{y^j} + F F_{y^i y^j}
    let g = DMatrix::from_fn(n, n, |i, j| d.y(i) * d.y(j) + f * d.yy(i, j));
    let min_eigenvalue = SymmetricEigen::new(g.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let tol = degeneracy * (1.0 + g.amax());
    let status = if min_eigenvalue > tol {
        Definiteness::PositiveDefinite
    } else if min_eigenvalue >= -tol {
        Definiteness::Degenerate
    } else {
        Definiteness::Indefinite
    };
    Ok(HessianMetric {
        n,
        g: g.transpose().iter().copied().collect(),
        min_eigenvalue,
        status,
        positive_definite: status == Definiteness::PositiveDefinite,
    })
}

pub fn hessian_metric(f: &ScalarModel, p: &TangentPoint) -> Result<HessianMetric> {
    hessian_from(&Derivs::new(f, p)?, DEGENERACY_TOL)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectiveFactor {
    pub value: f64,
    /// `max_i |f̃^i - (f^i - 2 𝓟 y^i)|` when a target spray is supplied.
    pub consistency: Option<f64>,
}

/// `𝓟 = S F̃ / (2 F̃)`, where `F̃` metrizes the spray `target`
/// projectively equivalent to `m`.
pub fn projective_factor(
    m: &SprayModel,
    target: Option<&SprayModel>,
    f: &ScalarModel,
    p: &TangentPoint,
) -> Result<ProjectiveFactor> {
    check_dims(m, f)?;
    let n = m.dim();
    let d = Derivs::new(f, p)?;
    if d.value().is_nan() || d.value() <= 0.0 {
        return Err(OperatorError::NonPositive(d.value()));
    }
    let s = spray_vector(m, p)?;
    let sf: f64 = (0..n).map(|i| s[i] * d.x(i) + s[n + i] * d.y(i)).sum();
    let value = sf / (2.0 * d.value());
    let consistency = match target {
        Some(t) => {
            check_dims(t, f)?;
            let st = spray_vector(t, p)?;
            Some(max_abs(
                (0..n).map(|i| st[n + i] - (s[n + i] - 2.0 * value * p.y[i])),
            ))
        }
        None => None,
    };
    Ok(ProjectiveFactor { value, consistency })
}

/// Thresholds of a solution audit. Operator residuals are compared against
/// `operator * (1 + |F| + |first and second derivatives of F|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub operator: f64,
    pub containment: f64,
    pub degeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            operator: 1e-8,
            containment: 1e-10,
            degeneracy: DEGENERACY_TOL,
        }
    }
}

/// Residuals at one sample.
#[derive(Debug, Clone, Serialize)]
pub struct SampleResiduals {
    pub index: usize,
    pub scale: f64,
    pub p_c: f64,
    /// First derivatives of `CF - F`.
    pub homogeneity_prolongation: f64,
    pub p_s: f64,
    pub p_gamma: f64,
    pub containment: f64,
    pub i_r: f64,
    pub i_r_route_discrepancy: f64,
    pub hessian_min_eigenvalue: f64,
    pub hessian: Definiteness,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Maxima {
    pub p_c: f64,
    pub homogeneity_prolongation: f64,
    pub p_s: f64,
    pub p_gamma: f64,
    pub containment: f64,
    pub i_r: f64,
    pub i_r_route_discrepancy: f64,
    pub hessian_min_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Flags {
    pub p_c: bool,
    pub p_s: bool,
    pub p_gamma: bool,
    pub i_r: bool,
    pub hessian_positive: bool,
    /// `P_C` with its prolongation and `P_S` vanish.
    pub order2_solution: bool,
    /// Additionally `i_Γ dd_J F = 0`.
    pub order3_liftable_p1: bool,
    /// Additionally `i_R dd_J F = 0`.
    pub order3_liftable_p2: bool,
    /// Every evaluated sample satisfies `P_S F(hX) = ½ P_Γ F(S, hX)`.
    pub containment: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionAudit {
    pub samples: usize,
    pub evaluated: usize,
    pub maxima: Maxima,
    pub flags: Flags,
    pub tolerances: Tolerances,
    pub failures: Vec<SampleFailure>,
    pub per_sample: Vec<SampleResiduals>,
}

fn audit_sample(
    m: &SprayModel,
    f: &ScalarModel,
    p: &TangentPoint,
    index: usize,
    tol: &Tolerances,
) -> Result<SampleResiduals> {
    let d = Derivs::new(f, p)?;
    let w = omega_from(&d);
    let s = spray_vector(m, p)?;
    let conn = connection_at(m, p)?;
    let frame = adapted_frame_at(m, p)?;
    let pc = pc_from(&d, p);
    let ps = ps_from(&d, &w, &s, p);
    let pg = pgamma_from(&w, &conn.gamma, &conn.h, &s, &frame);
    let ir = obstruction_from(m, &w, p, &frame)?;
    let hess = match hessian_from(&d, tol.degeneracy) {
        Ok(h) => (h.min_eigenvalue, h.status),
        Err(OperatorError::NonPositive(_)) => (f64::NAN, Definiteness::Indefinite),
        Err(e) => return Err(e),
    };
    Ok(SampleResiduals {
        index,
        scale: d.scale(),
        p_c: pc.value.abs(),
        homogeneity_prolongation: max_abs(pc.dx.iter().chain(&pc.dy).copied()),
        p_s: ps.max_abs(),
        p_gamma: max_abs(pg.components.iter().copied()).max(pg.other_blocks),
        containment: pg.containment,
        i_r: ir.max_abs(),
        i_r_route_discrepancy: ir.route_discrepancy,
        hessian_min_eigenvalue: hess.0,
        hessian: hess.1,
    })
}

/// Evaluates every operator at every sample. Samples outside the domain
/// are recorded as failures; flags are computed over the remaining ones.
pub fn solution_audit(
    m: &SprayModel,
    f: &ScalarModel,
    samples: &[TangentPoint],
    tol: &Tolerances,
) -> Result<SolutionAudit> {
    check_dims(m, f)?;
    let results: Vec<Result<SampleResiduals>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, p)| audit_sample(m, f, p, i, tol))
        .collect();
    let mut per_sample = Vec::new();
    let mut failures = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => per_sample.push(s),
            Err(e) => failures.push(SampleFailure {
                index,
                message: e.to_string(),
            }),
        }
    }
    let fold = |g: fn(&SampleResiduals) -> f64| per_sample.iter().map(g).fold(0.0, f64::max);
    let within =
        |g: fn(&SampleResiduals) -> f64| per_sample.iter().all(|s| g(s) <= tol.operator * s.scale);
    let maxima = Maxima {
        p_c: fold(|s| s.p_c),
        homogeneity_prolongation: fold(|s| s.homogeneity_prolongation),
        p_s: fold(|s| s.p_s),
        p_gamma: fold(|s| s.p_gamma),
        containment: fold(|s| s.containment),
        i_r: fold(|s| s.i_r),
        i_r_route_discrepancy: fold(|s| s.i_r_route_discrepancy),
        hessian_min_eigenvalue: per_sample
            .iter()
            .map(|s| s.hessian_min_eigenvalue)
            .fold(f64::INFINITY, f64::min),
    };
    let any = !per_sample.is_empty();
    let p_c = any && within(|s| s.p_c) && within(|s| s.homogeneity_prolongation);
    let p_s = any && within(|s| s.p_s);
    let p_gamma = any && within(|s| s.p_gamma);
    let i_r = any && within(|s| s.i_r);
    let hessian_positive = any
        && per_sample
            .iter()
            .all(|s| s.hessian == Definiteness::PositiveDefinite);
    let containment = per_sample
        .iter()
        .all(|s| s.containment <= tol.containment * s.scale * (1.0 + s.p_gamma.max(s.p_s)));
    let order2_solution = p_c && p_s;
    let order3_liftable_p1 = order2_solution && p_gamma;
    Ok(SolutionAudit {
        samples: samples.len(),
        evaluated: per_sample.len(),
        maxima,
        flags: Flags {
            p_c,
            p_s,
            p_gamma,
            i_r,
            hessian_positive,
            order2_solution,
            order3_liftable_p1,
            order3_liftable_p2: order3_liftable_p1 && i_r,
            containment,
        },
        tolerances: tol.clone(),
        failures,
        per_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(x: &[f64], y: &[f64]) -> TangentPoint {
        TangentPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn closed_form_has_zero_ddj() {
        let f = ScalarModel::parse(2, "y1", 1).unwrap();
        assert_eq!(ddj(&f, &pt(&[0.4, 0.2], &[1.0, 2.0])).unwrap().amax(), 0.0);
    }

    #[test]
    fn euclidean_ddj_block() {
        let f = ScalarModel::parse(2, "sqrt(y1^2+y2^2)", 1).unwrap();
        let w = ddj(&f, &pt(&[0.0, 0.0], &[3.0, 4.0])).unwrap();
        let expected = [[16.0, -12.0], [-12.0, 9.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(w[(2 + i, j)], expected[i][j] / 125.0, epsilon = 1e-15);
            }
        }
        assert_eq!((&w + w.transpose()).amax(), 0.0);
    }

    #[test]
    fn hessian_of_degenerate_function() {
        let f = ScalarModel::parse(2, "y1", 1).unwrap();
        let h = hessian_metric(&f, &pt(&[0.0, 0.0], &[1.0, 0.5])).unwrap();
        assert_eq!(h.status, Definiteness::Degenerate);
        assert!(!h.positive_definite);
    }

    #[test]
    fn hessian_rejects_non_positive() {
        let f = ScalarModel::parse(1, "y1", 1).unwrap();
        assert!(matches!(
            hessian_metric(&f, &pt(&[0.0], &[-1.0])),
            Err(OperatorError::NonPositive(_))
        ));
    }

    #[test]
    fn wrong_spray_negative_control() {
        let m = SprayModel::parse(2, &["y2^2", "0"]).unwrap();
        let f = ScalarModel::parse(2, "sqrt(y1^2+2*y2^2)", 1).unwrap();
        let v = p_s(&m, &f, &pt(&[0.1, 0.2], &[0.8, 1.1])).unwrap();
        assert!(v.max_abs() > 1e-3);
    }

    #[test]
    fn recovered_projective_factor() {
        let norm = ScalarModel::parse(2, "sqrt(y1^2+y2^2)", 1).unwrap();
        let flat = SprayModel::flat(2);
        let deformed = crate::geometry::projective_deform(&flat, &norm).unwrap();
        let p = pt(&[0.3, -0.2], &[1.0, 0.7]);
        let r = projective_factor(&deformed, Some(&flat), &norm, &p).unwrap();
        assert_abs_diff_eq!(r.value, -(1.49_f64).sqrt(), epsilon = 1e-12);
        assert!(r.consistency.unwrap() < 1e-12);
    }
}
