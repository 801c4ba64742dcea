//! Pointwise geometry of a spray: vertical endomorphism, Liouville field,
//! the connection `Γ = [J, S]` with its projectors, curvature `R = ½[h, h]`,
//! Jacobi endomorphism `Φ = i_S R`, classification, projective deformation,
//! adapted frames and geodesics.
//!
//! Every bracket is evaluated from its defining identity on coordinate
//! vector fields, with field components carried as third-order jets.

pub mod fields;
mod geodesic;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, ExprError, ScalarModel, SprayModel, Var};
use crate::jets::Jet3;
use crate::point::{PointError, TangentPoint};
use crate::sampling::{sample_points, SampleBox};

use fields::{
    fn_bracket, fn_bracket_vector, lie_bracket, nijenhuis, EndoField, Form2Field, VecField,
};

pub use geodesic::{
    arc_length, geodesic_flow, hausdorff_after_reparametrization, integrate_arc_length,
    polyline_hausdorff, resample_by_arc_length, GeodesicError, GeodesicPath,
};

/// Tolerance on structural identities that must hold to rounding error.
pub const STRUCTURE_TOL: f64 = 1e-9;
/// Relative classification threshold factor.
pub const CLASSIFY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error("internal identity violated: {what} (residual {residual:e})")]
    Internal { what: &'static str, residual: f64 },
    #[error("projective factor must be 1-homogeneous: {0}")]
    NotHomogeneous(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}

fn max_abs_slice(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// `J = dx^i ⊗ ∂/∂y^i` in the coordinate frame `(∂x, ∂y)`.
pub fn vertical_endomorphism(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `C = y^i ∂/∂y^i` at `p`.
pub fn liouville(p: &TangentPoint) -> DVector<f64> {
    let n = p.dim();
    DVector::from_fn(2 * n, |a, _| if a < n { 0.0 } else { p.y[a - n] })
}

/// `S(p) = (y, f(x, y))`.
pub fn spray_vector(m: &SprayModel, p: &TangentPoint) -> Result<DVector<f64>> {
    p.check_dim(m.dim())?;
    let n = m.dim();
    let mut out = DVector::zeros(2 * n);
    for i in 0..n {
        out[i] = p.y[i];
        out[n + i] = m.coefficients()[i].eval(&p.x, &p.y)?;
    }
    Ok(out)
}

/// Jet-carried fields of a spray around a point.
pub(crate) struct SprayFields {
    pub n: usize,
    pub spray: VecField,
    pub liouville: VecField,
    pub j: EndoField,
}

impl SprayFields {
    pub fn new(m: &SprayModel, p: &TangentPoint) -> Result<Self> {
        p.check_dim(m.dim())?;
        let n = m.dim();
        let nv = 2 * n;
        let mut spray = Vec::with_capacity(nv);
        let mut liouville: VecField = (0..n).map(|_| Jet3::zero(nv)).collect();
        for i in 0..n {
            spray.push(Jet3::variable(n + i, p.y[i], nv).expect("slot in range"));
        }
        for (i, f) in m.coefficients().iter().enumerate() {
            spray.push(f.eval_jet(p)?);
            liouville.push(Jet3::variable(n + i, p.y[i], nv).expect("slot in range"));
        }
        Ok(SprayFields {
            n,
            spray,
            liouville,
            j: EndoField::from_matrix(&vertical_endomorphism(n)),
        })
    }

    pub fn gamma(&self) -> EndoField {
        fn_bracket_vector(&self.j, &self.spray)
    }

    pub fn horizontal(&self, gamma: &EndoField) -> EndoField {
        let nv = 2 * self.n;
        let cols = gamma
            .cols
            .iter()
            .enumerate()
            .map(|(b, col)| {
                col.iter()
                    .enumerate()
                    .map(|(a, g)| g.add_const(if a == b { 1.0 } else { 0.0 }).scale(0.5))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        debug_assert!(cols.iter().all(|c| c.len() == nv));
        EndoField { cols }
    }
}

/// Values of `Γ`, `h` and `v` at a point.
#[derive(Debug, Clone)]
pub struct Connection {
    pub gamma: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

/// Largest residuals of the algebraic identities satisfied by `J`, `Γ`, `h`
/// and `v` at a point, plus the bracket identities `[C,S] = S`, `[J,C] = J`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub j_squared: f64,
    pub gamma_squared_minus_id: f64,
    pub h_idempotent: f64,
    pub v_idempotent: f64,
    pub h_times_v: f64,
    pub j_h_minus_j: f64,
    pub h_j: f64,
    pub j_s_minus_c: f64,
    pub bracket_c_s_minus_s: f64,
    pub bracket_j_c_minus_j: f64,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        [
            self.j_squared,
            self.gamma_squared_minus_id,
            self.h_idempotent,
            self.v_idempotent,
            self.h_times_v,
            self.j_h_minus_j,
            self.h_j,
            self.j_s_minus_c,
            self.bracket_c_s_minus_s,
            self.bracket_j_c_minus_j,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn connection_from(gamma: &EndoField) -> Result<Connection> {
    let g = gamma.values();
    let dim = g.nrows();
    let id = DMatrix::<f64>::identity(dim, dim);
    let h = (&id + &g) * 0.5;
    let v = (&id - &g) * 0.5;
    let scale = 1.0 + max_abs(&g);
    let res = max_abs(&(&g * &g - &id));
    if res > STRUCTURE_TOL * scale {
        return Err(GeometryError::Internal {
            what: "Γ² = Id",
            residual: res,
        });
    }
    let checks = [
        ("h² = h", max_abs(&(&h * &h - &h))),
        ("v² = v", max_abs(&(&v * &v - &v))),
        ("h v = 0", max_abs(&(&h * &v))),
    ];
    for (what, residual) in checks {
        if residual > STRUCTURE_TOL * scale * scale {
            return Err(GeometryError::Internal { what, residual });
        }
    }
    Ok(Connection { gamma: g, h, v })
}

/// The connection `Γ = [J, S]` and its projectors `h = ½(Id + Γ)`,
/// `v = ½(Id - Γ)` at `p`.
pub fn connection_at(m: &SprayModel, p: &TangentPoint) -> Result<Connection> {
    let fields = SprayFields::new(m, p)?;
    connection_from(&fields.gamma())
}

/// Evaluates every structural identity at `p`.
pub fn structural_identities(m: &SprayModel, p: &TangentPoint) -> Result<IdentityReport> {
    let fields = SprayFields::new(m, p)?;
    let n = m.dim();
    let conn = connection_from(&fields.gamma())?;
    let j = vertical_endomorphism(n);
    let id = DMatrix::<f64>::identity(2 * n, 2 * n);
    let s = spray_vector(m, p)?;
    let c = liouville(p);
    let cs = lie_bracket(&fields.liouville, &fields.spray);
    let cs_res = cs
        .iter()
        .zip(&fields.spray)
        .map(|(a, b)| (a.value() - b.value()).abs())
        .fold(0.0, f64::max);
    let jc = fn_bracket_vector(&fields.j, &fields.liouville).values();
    Ok(IdentityReport {
        j_squared: max_abs(&(&j * &j)),
        gamma_squared_minus_id: max_abs(&(&conn.gamma * &conn.gamma - &id)),
        h_idempotent: max_abs(&(&conn.h * &conn.h - &conn.h)),
        v_idempotent: max_abs(&(&conn.v * &conn.v - &conn.v)),
        h_times_v: max_abs(&(&conn.h * &conn.v)),
        j_h_minus_j: max_abs(&(&j * &conn.h - &j)),
        h_j: max_abs(&(&conn.h * &j)),
        j_s_minus_c: (&j * &s - &c).amax(),
        bracket_c_s_minus_s: cs_res,
        bracket_j_c_minus_j: max_abs(&(jc - &j)),
    })
}

/// Curvature data at a point. Tensors over the full `2n` coordinates use the
/// layout `t[(a * 2n + b) * 2n + c] = T(∂_b, ∂_c)^a`.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureData {
    pub n: usize,
    /// `R^i_{jk}` with `R(∂x^j, ∂x^k) = R^i_{jk} ∂y^i`, layout `(i * n + j) * n + k`.
    pub r: Vec<f64>,
    /// `Φ^i_j` with `Φ(∂x^j) = Φ^i_j ∂y^i`, row-major `i * n + j`.
    pub phi: Vec<f64>,
    /// `tr Φ / (n - 1)`; `None` for `n = 1`.
    pub lambda: Option<f64>,
    pub isotropy_defect: f64,
    #[serde(skip)]
    pub r_full: Vec<f64>,
    /// `⅓[J, Φ]`, full layout.
    #[serde(skip)]
    pub r_from_phi: Vec<f64>,
    #[serde(skip)]
    pub phi_full: DMatrix<f64>,
    pub checks: CurvatureChecks,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureChecks {
    /// Largest component of `R` with a vertical argument or horizontal value.
    pub semibasic: f64,
    pub skew: f64,
    /// `|Φ(S)|`.
    pub phi_of_s: f64,
    /// `|R - ⅓[J, Φ]|`.
    pub reconstruction: f64,
}

impl CurvatureData {
    pub fn phi_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.phi)
    }

    pub fn r_component(&self, i: usize, j: usize, k: usize) -> f64 {
        self.r[(i * self.n + j) * self.n + k]
    }

    /// `R(X, Y)` on tangent vectors in the coordinate frame.
    pub fn apply_r(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        apply_tensor(&self.r_full, 2 * self.n, x, y)
    }

    /// `⅓[J, Φ](X, Y)`.
    pub fn apply_r_from_phi(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        apply_tensor(&self.r_from_phi, 2 * self.n, x, y)
    }
}

pub(crate) fn apply_tensor(
    t: &[f64],
    d: usize,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> DVector<f64> {
    DVector::from_fn(d, |a, _| {
        let mut acc = 0.0;
        for b in 0..d {
            if x[b] == 0.0 {
                continue;
            }
            for c in 0..d {
                acc += t[(a * d + b) * d + c] * x[b] * y[c];
            }
        }
        acc
    })
}

/// Curvature `R = ½[h, h]` (as the Nijenhuis torsion of `h`), Jacobi
/// endomorphism `Φ = i_S R`, and the reconstruction `R = ⅓[J, Φ]`.
pub fn curvature_at(m: &SprayModel, p: &TangentPoint) -> Result<CurvatureData> {
    let fields = SprayFields::new(m, p)?;
    let n = fields.n;
    let d = 2 * n;
    let gamma = fields.gamma();
    connection_from(&gamma)?;
    let h = fields.horizontal(&gamma);
    let r_field: Form2Field = nijenhuis(&h);
    let phi_field = r_field.insert_first(&fields.spray);
    let r_from_phi = fn_bracket(&fields.j, &phi_field).scaled(1.0 / 3.0).values();
    let r_full = r_field.values();
    let phi_full = phi_field.values();

    let mut r = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                r[(i * n + j) * n + k] = r_full[((n + i) * d + j) * d + k];
            }
        }
    }
    let phi: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| phi_full[(n + i, j)])
        .collect();

    let mut semibasic = 0.0_f64;
    let mut skew = 0.0_f64;
    let mut reconstruction = 0.0_f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let v = r_full[(a * d + b) * d + c];
                if a < n || b >= n || c >= n {
                    semibasic = semibasic.max(v.abs());
                }
                skew = skew.max((v + r_full[(a * d + c) * d + b]).abs());
                reconstruction = reconstruction.max((v - r_from_phi[(a * d + b) * d + c]).abs());
            }
        }
    }
    let s = DVector::from_iterator(d, fields.spray.iter().map(Jet3::value));
    let phi_of_s = (&phi_full * &s).amax();
    let scale = 1.0 + max_abs_slice(&r_full) + max_abs(&phi_full);
    if reconstruction > 1e-8 * scale {
        return Err(GeometryError::Internal {
            what: "R = ⅓[J, Φ]",
            residual: reconstruction,
        });
    }

    let (lambda, isotropy_defect) = if n >= 2 {
        let iso = isotropy(&DMatrix::from_row_slice(n, n, &phi), &p.y);
        (Some(iso.lambda), iso.isotropy_defect)
    } else {
        (None, 0.0)
    };
    Ok(CurvatureData {
        n,
        r,
        phi,
        lambda,
        isotropy_defect,
        r_full,
        r_from_phi,
        phi_full,
        checks: CurvatureChecks {
            semibasic,
            skew,
            phi_of_s,
            reconstruction,
        },
    })
}

struct Isotropy {
    lambda: f64,
    flat_defect: f64,
    isotropy_defect: f64,
    alpha: Vec<f64>,
}

/// Fits `λ δ - Φ ≈ y ⊗ α` by least squares in `α`.
fn isotropy(phi: &DMatrix<f64>, y: &[f64]) -> Isotropy {
    let n = phi.nrows();
    let lambda = phi.trace() / (n as f64 - 1.0);
    let id = DMatrix::<f64>::identity(n, n);
    let flat_defect = max_abs(&(phi - &id * lambda));
    let m = &id * lambda - phi;
    let yy: f64 = y.iter().map(|v| v * v).sum();
    let alpha: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| y[i] * m[(i, j)]).sum::<f64>() / yy)
        .collect();
    let fit = DMatrix::from_fn(n, n, |i, j| y[i] * alpha[j]);
    Isotropy {
        lambda,
        flat_defect,
        isotropy_defect: max_abs(&(m - fit)),
        alpha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SprayClass {
    Flat,
    Isotropic,
    Generic,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub class: SprayClass,
    pub lambda: Option<f64>,
    pub flat_defect: f64,
    pub isotropy_defect: f64,
    /// `α(S) - λ`, which vanishes for an exact isotropic decomposition.
    pub alpha_s_minus_lambda: f64,
    pub threshold: f64,
}

/// Classifies the spray at `p` as flat (`Φ = λJ`), isotropic
/// (`Φ = λJ - α ⊗ C`) or generic.
pub fn classify_at(m: &SprayModel, p: &TangentPoint) -> Result<Classification> {
    classify_with_tolerance(m, p, CLASSIFY_TOL)
}

/// [`classify_at`] with threshold `tol * (1 + max |Φ|)`.
pub fn classify_with_tolerance(
    m: &SprayModel,
    p: &TangentPoint,
    tol: f64,
) -> Result<Classification> {
    let curv = curvature_at(m, p)?;
    let n = m.dim();
    let phi = curv.phi_matrix();
    let threshold = tol * (1.0 + max_abs(&phi));
    if n == 1 {
        return Ok(Classification {
            class: SprayClass::Flat,
            lambda: None,
            flat_defect: 0.0,
            isotropy_defect: 0.0,
            alpha_s_minus_lambda: 0.0,
            threshold,
        });
    }
    let iso = isotropy(&phi, &p.y);
    let alpha_s: f64 = iso.alpha.iter().zip(&p.y).map(|(a, y)| a * y).sum();
    let class = if iso.flat_defect <= threshold {
        SprayClass::Flat
    } else if iso.isotropy_defect <= threshold {
        SprayClass::Isotropic
    } else {
        SprayClass::Generic
    };
    Ok(Classification {
        class,
        lambda: Some(iso.lambda),
        flat_defect: iso.flat_defect,
        isotropy_defect: iso.isotropy_defect,
        alpha_s_minus_lambda: alpha_s - iso.lambda,
        threshold,
    })
}

/// Checks that `factor` is declared and numerically 1-homogeneous. Samples
/// at which the expression is undefined are skipped.
pub fn check_projective_factor(factor: &ScalarModel) -> Result<()> {
    if factor.degree() != 1 {
        return Err(GeometryError::NotHomogeneous(format!(
            "declared degree {}",
            factor.degree()
        )));
    }
    let samples = sample_points(&SampleBox::unit(factor.dim()), 200, 0);
    let mut evaluated = 0;
    for p in &samples {
        match factor.euler_residual(p) {
            Ok(res) => {
                let value = factor.expr().eval(&p.x, &p.y).unwrap_or(0.0);
                if res.abs() > crate::expr::HOMOGENEITY_TOL * (1.0 + value.abs()) {
                    return Err(GeometryError::NotHomogeneous(format!(
                        "Euler residual {res:e} at x={:?}, y={:?}",
                        p.x, p.y
                    )));
                }
                evaluated += 1;
            }
            Err(_) => continue,
        }
    }
    if evaluated == 0 {
        return Err(GeometryError::NotHomogeneous(
            "undefined at every sample".into(),
        ));
    }
    Ok(())
}

/// The projectively equivalent spray `S̃ = S - 2 𝓟 C`, i.e.
/// `f̃^i = f^i - 2 𝓟 y^i`.
pub fn projective_deform(m: &SprayModel, factor: &ScalarModel) -> Result<SprayModel> {
    if factor.dim() != m.dim() {
        return Err(ExprError::DimensionMismatch { n: m.dim() }.into());
    }
    check_projective_factor(factor)?;
    let f = m
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, fi)| {
            let term = Expr::mul(
                Expr::mul(Expr::num(2.0), factor.expr().clone()),
                Expr::var(Var::y(i)),
            );
            Expr::sub(fi.clone(), term)
        })
        .collect();
    Ok(SprayModel::new(m.dim(), f)?)
}

/// Largest entry of `h̃ - (h - 𝓟 J - d_J𝓟 ⊗ C)`, where `h̃` is computed
/// directly from `[J, S̃]`.
pub fn deformed_projector_check(
    m: &SprayModel,
    factor: &ScalarModel,
    p: &TangentPoint,
) -> Result<f64> {
    let n = m.dim();
    let deformed = projective_deform(m, factor)?;
    let direct = connection_at(&deformed, p)?.h;
    let h = connection_at(m, p)?.h;
    let pj = factor.expr().eval_jet(p)?;
    let j = vertical_endomorphism(n);
    let c = liouville(p);
    // d_J 𝓟 = (∂𝓟/∂y^i) dx^i
    let dj = DVector::from_fn(2 * n, |a, _| if a < n { pj.d1(n + a) } else { 0.0 });
    let rhs = h - j * pj.value() - &c * dj.transpose();
    Ok(max_abs(&(direct - rhs)))
}

/// Frame `(h_1..h_n, v_1..v_n)` with `h_n = S` and `v_i = J h_i`, as the
/// columns of a `2n × 2n` matrix in the coordinate frame.
#[derive(Debug, Clone)]
pub struct AdaptedFrame {
    pub n: usize,
    pub matrix: DMatrix<f64>,
    /// Coordinate index whose horizontal lift was replaced by `S`.
    pub pivot: usize,
}

impl AdaptedFrame {
    pub fn horizontal(&self, i: usize) -> DVector<f64> {
        self.matrix.column(i).into_owned()
    }

    pub fn vertical(&self, i: usize) -> DVector<f64> {
        self.matrix.column(self.n + i).into_owned()
    }
}

pub fn adapted_frame_at(m: &SprayModel, p: &TangentPoint) -> Result<AdaptedFrame> {
    let n = m.dim();
    let conn = connection_at(m, p)?;
    let pivot = (0..n)
        .max_by(|&a, &b| p.y[a].abs().total_cmp(&p.y[b].abs()))
        .expect("n >= 1");
    let s = spray_vector(m, p)?;
    let hs = &conn.h * &s;
    let j = vertical_endomorphism(n);
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    for (col, i) in (0..n).filter(|&i| i != pivot).enumerate() {
        matrix.set_column(col, &conn.h.column(i));
    }
    matrix.set_column(n - 1, &hs);
    for i in 0..n {
        let v = &j * matrix.column(i);
        matrix.set_column(n + i, &v);
    }
    Ok(AdaptedFrame { n, matrix, pivot })
}

#[cfg(test)]
mod tests;
