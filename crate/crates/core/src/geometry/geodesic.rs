//! Fixed-step RK4 integration of `ẋ = y, ẏ = f(x, y)` and comparison of
//! geodesic point sets up to reparametrization.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{ExprError, SprayModel};

#[derive(Debug, Error)]
pub enum GeodesicError {
    #[error("step size must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("integration span must be non-negative and finite, got {0}")]
    BadSpan(f64),
    #[error("initial data has dimension {got}, spray has dimension {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("initial point is outside the domain: {0}")]
    Initial(ExprError),
}

/// Why integration stopped before `t_end`.
#[derive(Debug, Clone, Serialize)]
pub struct DomainExit {
    pub time: f64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicPath {
    pub n: usize,
    pub times: Vec<f64>,
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
    pub exit: Option<DomainExit>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn rhs(m: &SprayModel, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>), ExprError> {
    let f = m
        .coefficients()
        .iter()
        .map(|e| e.eval(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((y.to_vec(), f))
}

fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| u + s * v).collect()
}

fn rk4_step(
    m: &SprayModel,
    x: &[f64],
    y: &[f64],
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>), ExprError> {
    let (k1x, k1y) = rhs(m, x, y)?;
    let (k2x, k2y) = rhs(m, &axpy(x, dt / 2.0, &k1x), &axpy(y, dt / 2.0, &k1y))?;
    let (k3x, k3y) = rhs(m, &axpy(x, dt / 2.0, &k2x), &axpy(y, dt / 2.0, &k2y))?;
    let (k4x, k4y) = rhs(m, &axpy(x, dt, &k3x), &axpy(y, dt, &k3y))?;
    let comb = |u: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..u.len())
            .map(|i| u[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let nx = comb(x, &k1x, &k2x, &k3x, &k4x);
    let ny = comb(y, &k1y, &k2y, &k3y, &k4y);
    if nx.iter().chain(&ny).any(|v| !v.is_finite()) {
        return Err(ExprError::Domain {
            subexpr: "state".into(),
            source: crate::jets::JetError::Domain {
                func: "rk4",
                value: f64::NAN,
            },
        });
    }
    Ok((nx, ny))
}

fn validate(m: &SprayModel, x0: &[f64], y0: &[f64], dt: f64) -> Result<(), GeodesicError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(GeodesicError::BadStep(dt));
    }
    if x0.len() != m.dim() || y0.len() != m.dim() {
        return Err(GeodesicError::Dimension {
            got: x0.len().max(y0.len()),
            expected: m.dim(),
        });
    }
    rhs(m, x0, y0).map_err(GeodesicError::Initial)?;
    Ok(())
}

/// Integrates from `(x0, y0)` up to `t_end` with step `dt` (the last step is
/// shortened to land on `t_end`). A domain exit stops integration and is
/// recorded in the returned path.
pub fn geodesic_flow(
    m: &SprayModel,
    x0: &[f64],
    y0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<GeodesicPath, GeodesicError> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(GeodesicError::BadSpan(t_end));
    }
    validate(m, x0, y0, dt)?;
    let mut path = GeodesicPath {
        n: m.dim(),
        times: vec![0.0],
        xs: vec![x0.to_vec()],
        ys: vec![y0.to_vec()],
        exit: None,
    };
    let steps = (t_end / dt).ceil() as usize;
    let (mut x, mut y) = (x0.to_vec(), y0.to_vec());
    for k in 0..steps {
        let t = k as f64 * dt;
        let h = dt.min(t_end - t);
        if h <= 0.0 {
            break;
        }
        match rk4_step(m, &x, &y, h) {
            Ok((nx, ny)) => {
                x = nx;
                y = ny;
            }
            Err(e) => {
                path.exit = Some(DomainExit {
                    time: t,
                    message: e.to_string(),
                });
                break;
            }
        }
        path.times.push(t + h);
        path.xs.push(x.clone());
        path.ys.push(y.clone());
    }
    Ok(path)
}

/// Integrates until the `x`-path has arc length `length` or `t_max` is
/// reached, and returns the base points with the final one interpolated to
/// land on `length`.
pub fn integrate_arc_length(
    m: &SprayModel,
    x0: &[f64],
    y0: &[f64],
    length: f64,
    dt: f64,
    t_max: f64,
) -> Result<Vec<Vec<f64>>, GeodesicError> {
    validate(m, x0, y0, dt)?;
    let mut pts = vec![x0.to_vec()];
    let (mut x, mut y) = (x0.to_vec(), y0.to_vec());
    let mut s = 0.0;
    let mut t = 0.0;
    while t < t_max {
        let Ok((nx, ny)) = rk4_step(m, &x, &y, dt) else {
            break;
        };
        let seg = dist(&x, &nx);
        if s + seg >= length {
            let w = if seg > 0.0 { (length - s) / seg } else { 0.0 };
            pts.push(x.iter().zip(&nx).map(|(a, b)| a + w * (b - a)).collect());
            return Ok(pts);
        }
        s += seg;
        x = nx;
        y = ny;
        t += dt;
        pts.push(x.clone());
    }
    Ok(pts)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn arc_length(points: &[Vec<f64>]) -> f64 {
    points.windows(2).map(|w| dist(&w[0], &w[1])).sum()
}

/// `count` points equally spaced in arc length over the first `length`
/// units of the polyline (clamped to its total length).
pub fn resample_by_arc_length(points: &[Vec<f64>], length: f64, count: usize) -> Vec<Vec<f64>> {
    assert!(count >= 2 && !points.is_empty());
    let total = arc_length(points);
    let length = length.min(total);
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    let mut seg_start = 0.0;
    for k in 0..count {
        let target = length * k as f64 / (count - 1) as f64;
        while seg + 1 < points.len() - 1
            && seg_start + dist(&points[seg], &points[seg + 1]) < target
        {
            seg_start += dist(&points[seg], &points[seg + 1]);
            seg += 1;
        }
        if points.len() == 1 {
            out.push(points[0].clone());
            continue;
        }
        let (a, b) = (&points[seg], &points[seg + 1]);
        let l = dist(a, b);
        let w = if l > 0.0 {
            ((target - seg_start) / l).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(a.iter().zip(b).map(|(u, v)| u + w * (v - u)).collect());
    }
    out
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(u, v)| v - u).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(u, v)| v - u).collect();
    let l2: f64 = ab.iter().map(|v| v * v).sum();
    let w = if l2 > 0.0 {
        (ab.iter().zip(&ap).map(|(u, v)| u * v).sum::<f64>() / l2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q: Vec<f64> = a.iter().zip(&ab).map(|(u, v)| u + w * v).collect();
    dist(p, &q)
}

fn directed(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|p| {
            if b.len() == 1 {
                return dist(p, &b[0]);
            }
            b.windows(2)
                .map(|w| point_segment(p, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines, measured from the
/// vertices of each to the segments of the other.
pub fn polyline_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    directed(a, b).max(directed(b, a))
}

/// Hausdorff distance between the two base paths after truncating both to
/// their common arc length and resampling uniformly in arc length.
pub fn hausdorff_after_reparametrization(a: &[Vec<f64>], b: &[Vec<f64>], count: usize) -> f64 {
    let common = arc_length(a).min(arc_length(b));
    let ra = resample_by_arc_length(a, common, count);
    let rb = resample_by_arc_length(b, common, count);
    polyline_hausdorff(&ra, &rb)
}
