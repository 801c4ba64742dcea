//! Vector fields and vector-valued forms on `TM` with jet-valued components,
//! and the brackets between them evaluated on coordinate vector fields.
//!
//! All objects live on the `2n` coordinates `(x1..xn, y1..yn)`; a vector
//! field is a list of `2n` component jets. Brackets differentiate components,
//! so each bracket lowers the valid jet order by one.

use nalgebra::DMatrix;

use crate::jets::Jet3;

pub type VecField = Vec<Jet3>;

/// Constant coordinate field `∂_b`.
pub fn coordinate_field(b: usize, dim: usize) -> VecField {
    (0..dim)
        .map(|a| Jet3::constant(dim, if a == b { 1.0 } else { 0.0 }))
        .collect()
}

pub fn field_values(x: &[Jet3]) -> Vec<f64> {
    x.iter().map(Jet3::value).collect()
}

fn add_fields(x: &[Jet3], y: &[Jet3]) -> VecField {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub_fields(x: &[Jet3], y: &[Jet3]) -> VecField {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale_field(x: &[Jet3], s: f64) -> VecField {
    x.iter().map(|a| a.scale(s)).collect()
}

/// Lie bracket `[X, Y]^a = X^b ∂_b Y^a - Y^b ∂_b X^a`.
pub fn lie_bracket(x: &[Jet3], y: &[Jet3]) -> VecField {
    let dim = x.len();
    let mut out: VecField = (0..dim).map(|_| Jet3::zero(dim)).collect();
    for b in 0..dim {
        let xb = &x[b];
        let yb = &y[b];
        for a in 0..dim {
            if !xb.is_zero() {
                let dy = y[a].derivative(b);
                if !dy.is_zero() {
                    out[a] = &out[a] + &(xb * &dy);
                }
            }
            if !yb.is_zero() {
                let dx = x[a].derivative(b);
                if !dx.is_zero() {
                    out[a] = &out[a] - &(yb * &dx);
                }
            }
        }
    }
    // a bracket is only valid to one order less than its inputs
    let order = x
        .iter()
        .chain(y)
        .map(Jet3::order)
        .min()
        .unwrap_or(0)
        .saturating_sub(1);
    out.into_iter().map(|j| j.truncated(order)).collect()
}

/// A field of endomorphisms `K`; `cols[b]` is the field `K(∂_b)`.
#[derive(Debug, Clone)]
pub struct EndoField {
    pub cols: Vec<VecField>,
}

impl EndoField {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let dim = m.ncols();
        EndoField {
            cols: (0..dim)
                .map(|b| (0..dim).map(|a| Jet3::constant(dim, m[(a, b)])).collect())
                .collect(),
        }
    }

    /// `(K X)^a = K^a_b X^b`.
    pub fn apply(&self, x: &[Jet3]) -> VecField {
        let dim = self.dim();
        let mut out: VecField = (0..dim).map(|_| Jet3::zero(dim)).collect();
        for (b, col) in self.cols.iter().enumerate() {
            if x[b].is_zero() {
                continue;
            }
            for a in 0..dim {
                if !col[a].is_zero() {
                    out[a] = &out[a] + &(&col[a] * &x[b]);
                }
            }
        }
        out
    }

    pub fn values(&self) -> DMatrix<f64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |a, b| self.cols[b][a].value())
    }
}

/// A vector-valued 2-form field; `vals[b * dim + c]` is `L(∂_b, ∂_c)`.
#[derive(Debug, Clone)]
pub struct Form2Field {
    pub dim: usize,
    pub vals: Vec<VecField>,
}

impl Form2Field {
    pub fn at(&self, b: usize, c: usize) -> &VecField {
        &self.vals[b * self.dim + c]
    }

    /// Component values as a flat tensor `t[(a * dim + b) * dim + c] = L(∂_b, ∂_c)^a`.
    pub fn values(&self) -> Vec<f64> {
        let d = self.dim;
        let mut t = vec![0.0; d * d * d];
        for b in 0..d {
            for c in 0..d {
                for (a, j) in self.at(b, c).iter().enumerate() {
                    t[(a * d + b) * d + c] = j.value();
                }
            }
        }
        t
    }

    pub fn scaled(&self, s: f64) -> Form2Field {
        Form2Field {
            dim: self.dim,
            vals: self.vals.iter().map(|v| scale_field(v, s)).collect(),
        }
    }

    /// Contraction of the first argument: `(i_X L)(∂_c) = L(X, ∂_c)`.
    pub fn insert_first(&self, x: &[Jet3]) -> EndoField {
        let d = self.dim;
        let cols = (0..d)
            .map(|c| {
                let mut acc: VecField = (0..d).map(|_| Jet3::zero(d)).collect();
                for (b, xb) in x.iter().enumerate() {
                    if xb.is_zero() {
                        continue;
                    }
                    for (a, comp) in self.at(b, c).iter().enumerate() {
                        acc[a] = &acc[a] + &(xb * comp);
                    }
                }
                acc
            })
            .collect();
        EndoField { cols }
    }
}

fn skew_form(dim: usize, mut f: impl FnMut(usize, usize) -> VecField) -> Form2Field {
    let zero: VecField = (0..dim).map(|_| Jet3::zero(dim)).collect();
    let mut vals = vec![zero; dim * dim];
    for b in 0..dim {
        for c in (b + 1)..dim {
            let v = f(b, c);
            vals[c * dim + b] = scale_field(&v, -1.0);
            vals[b * dim + c] = v;
        }
    }
    Form2Field { dim, vals }
}

/// Frölicher–Nijenhuis bracket of a vector-valued 1-form with a vector
/// field: `[K, X](Y) = [KY, X] - K[Y, X]`, on coordinate fields `Y = ∂_b`.
pub fn fn_bracket_vector(k: &EndoField, x: &[Jet3]) -> EndoField {
    let dim = k.dim();
    let cols = (0..dim)
        .map(|b| {
            let y = coordinate_field(b, dim);
            let first = lie_bracket(&k.cols[b], x);
            let second = k.apply(&lie_bracket(&y, x));
            sub_fields(&first, &second)
        })
        .collect();
    EndoField { cols }
}

/// Frölicher–Nijenhuis bracket of two vector-valued 1-forms,
///
/// `[K,L](X,Y) = [KX,LY] - [KY,LX] - L([KX,Y] - [KY,X]) - K([X,LY] - [Y,LX])
///              + (LK + KL)[X,Y]`,
///
/// on coordinate pairs (where the last term vanishes).
pub fn fn_bracket(k: &EndoField, l: &EndoField) -> Form2Field {
    let dim = k.dim();
    skew_form(dim, |b, c| {
        let x = coordinate_field(b, dim);
        let y = coordinate_field(c, dim);
        let (kx, ky) = (&k.cols[b], &k.cols[c]);
        let (lx, ly) = (&l.cols[b], &l.cols[c]);
        let t1 = sub_fields(&lie_bracket(kx, ly), &lie_bracket(ky, lx));
        let t2 = l.apply(&sub_fields(&lie_bracket(kx, &y), &lie_bracket(ky, &x)));
        let t3 = k.apply(&sub_fields(&lie_bracket(&x, ly), &lie_bracket(&y, lx)));
        sub_fields(&sub_fields(&t1, &t2), &t3)
    })
}

/// Nijenhuis torsion `N_K(X,Y) = [KX,KY] + K²[X,Y] - K[KX,Y] - K[X,KY]`
/// (equal to `½[K,K]`), on coordinate pairs.
pub fn nijenhuis(k: &EndoField) -> Form2Field {
    let dim = k.dim();
    skew_form(dim, |b, c| {
        let x = coordinate_field(b, dim);
        let y = coordinate_field(c, dim);
        let (kx, ky) = (&k.cols[b], &k.cols[c]);
        let t1 = lie_bracket(kx, ky);
        let t2 = k.apply(&add_fields(&lie_bracket(kx, &y), &lie_bracket(&x, ky)));
        sub_fields(&t1, &t2)
    })
}
