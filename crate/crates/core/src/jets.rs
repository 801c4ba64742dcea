//! Truncated multivariate Taylor arithmetic of order three.
//!
//! A [`Jet3`] stores, for a smooth function of `nvars` variables, its value and
//! all mixed partial derivatives up to total degree three at a fixed base
//! point. Coefficients are raw partial derivatives (not divided by `alpha!`),
//! one entry per sorted multi-index, laid out by degree and then
//! lexicographically.
//!
//! Every jet also carries the highest degree up to which its coefficients are
//! trustworthy. Seeds and constants are valid to order three; differentiating
//! a jet with [`Jet3::derivative`] loses one order, and arithmetic propagates
//! the minimum. Coefficients above the valid order are kept at zero.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::multi_index::{count_sorted, exponents_to_sorted};

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: u8 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("jets over different variable counts ({left} vs {right})")]
    NvarsMismatch { left: usize, right: usize },
    #[error("division by a jet with zero value part")]
    DivisionByZero,
    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("multi-index of degree {degree} exceeds the valid order {order}")]
    OrderTooHigh { degree: usize, order: u8 },
    #[error("multi-index has {got} entries, expected {nvars}")]
    BadMultiIndex { got: usize, nvars: usize },
}

/// Binary operations available on jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Univariate functions that can be composed with a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetFn {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
    /// `t^p` for a constant real exponent.
    Pow(f64),
}

impl JetFn {
    pub fn name(&self) -> &'static str {
        match self {
            JetFn::Sqrt => "sqrt",
            JetFn::Sin => "sin",
            JetFn::Cos => "cos",
            JetFn::Exp => "exp",
            JetFn::Log => "log",
            JetFn::Pow(_) => "pow",
        }
    }

    /// Value and first three derivatives of the function at `t`.
    pub fn derivatives(&self, t: f64) -> Result<[f64; 4], JetError> {
        let domain = |func| JetError::Domain { func, value: t };
        Ok(match *self {
            JetFn::Sqrt => {
                if t <= 0.0 {
                    return Err(domain("sqrt"));
                }
                let s = t.sqrt();
                [s, 0.5 / s, -0.25 / (s * t), 0.375 / (s * t * t)]
            }
            JetFn::Sin => {
                let (s, c) = t.sin_cos();
                [s, c, -s, -c]
            }
            JetFn::Cos => {
                let (s, c) = t.sin_cos();
                [c, -s, -c, s]
            }
            JetFn::Exp => {
                let e = t.exp();
                [e, e, e, e]
            }
            JetFn::Log => {
                if t <= 0.0 {
                    return Err(domain("log"));
                }
                [t.ln(), 1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t)]
            }
            JetFn::Pow(p) => pow_derivatives(t, p).ok_or_else(|| domain("pow"))?,
        })
    }
}

/// Derivatives of `t^p`. Integer exponents accept any `t` as long as no
/// negative power of zero is required; other exponents need `t > 0`.
fn pow_derivatives(t: f64, p: f64) -> Option<[f64; 4]> {
    let integral = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
    if !integral && t <= 0.0 {
        return None;
    }
    let mut out = [0.0; 4];
    let mut falling = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            falling *= p - (k as f64 - 1.0);
        }
        if falling == 0.0 {
            *slot = 0.0;
            continue;
        }
        let e = p - k as f64;
        *slot = if integral {
            if t == 0.0 && e < 0.0 {
                return None;
            }
            falling * t.powi(e as i32)
        } else {
            falling * t.powf(e)
        };
    }
    Some(out)
}

/// Third-order jet of a scalar function of `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet3 {
    nvars: usize,
    order: u8,
    coeffs: Vec<f64>,
}

#[inline]
fn tetra(m: usize) -> usize {
    m * (m + 1) * (m + 2) / 6
}

impl Jet3 {
    /// Total coefficient count for `nvars` variables: `binom(nvars + 3, 3)`.
    pub fn len_for(nvars: usize) -> usize {
        (0..=MAX_ORDER as usize)
            .map(|k| count_sorted(k, nvars))
            .sum()
    }

    pub fn constant(nvars: usize, value: f64) -> Self {
        let mut coeffs = vec![0.0; Self::len_for(nvars)];
        coeffs[0] = value;
        Jet3 {
            nvars,
            order: MAX_ORDER,
            coeffs,
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::constant(nvars, 0.0)
    }

    /// Jet of the coordinate function `z_index` at a base point where it
    /// takes the value `value`.
    pub fn variable(index: usize, value: f64, nvars: usize) -> Result<Self, JetError> {
        if index >= nvars {
            return Err(JetError::IndexOutOfRange { index, nvars });
        }
        let mut jet = Self::constant(nvars, value);
        jet.coeffs[1 + index] = 1.0;
        Ok(jet)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Highest derivative degree whose coefficients are valid.
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    #[inline]
    fn off2(&self) -> usize {
        1 + self.nvars
    }

    #[inline]
    fn off3(&self) -> usize {
        1 + self.nvars + self.nvars * (self.nvars + 1) / 2
    }

    #[inline]
    fn idx2(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.nvars;
        self.off2() + i * (2 * n - i + 1) / 2 + (j - i)
    }

    #[inline]
    fn idx3(&self, i: usize, j: usize, k: usize) -> usize {
        let mut t = [i, j, k];
        t.sort_unstable();
        let [i, j, k] = t;
        let n = self.nvars;
        let m = n - i;
        let (a, b) = (j - i, k - i);
        self.off3() + tetra(n) - tetra(m) + a * (2 * m - a + 1) / 2 + (b - a)
    }

    #[inline]
    pub fn d1(&self, i: usize) -> f64 {
        self.coeffs[1 + i]
    }

    #[inline]
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.coeffs[self.idx2(i, j)]
    }

    #[inline]
    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[self.idx3(i, j, k)]
    }

    /// Mixed partial derivative `∂^alpha` at the base point, with `alpha`
    /// given as one exponent per variable.
    pub fn partial(&self, alpha: &[usize]) -> Result<f64, JetError> {
        if alpha.len() != self.nvars {
            return Err(JetError::BadMultiIndex {
                got: alpha.len(),
                nvars: self.nvars,
            });
        }
        let idx = exponents_to_sorted(alpha);
        self.partial_sorted(&idx)
    }

    /// Same as [`Jet3::partial`] but with the derivative given as a list of
    /// variable indices (in any order).
    pub fn partial_sorted(&self, vars: &[usize]) -> Result<f64, JetError> {
        if vars.len() > self.order as usize {
            return Err(JetError::OrderTooHigh {
                degree: vars.len(),
                order: self.order,
            });
        }
        if let Some(&bad) = vars.iter().find(|&&v| v >= self.nvars) {
            return Err(JetError::IndexOutOfRange {
                index: bad,
                nvars: self.nvars,
            });
        }
        Ok(match *vars {
            [] => self.value(),
            [i] => self.d1(i),
            [i, j] => self.d2(i, j),
            [i, j, k] => self.d3(i, j, k),
            _ => unreachable!(),
        })
    }

    fn check_same(&self, other: &Jet3) -> Result<(), JetError> {
        if self.nvars != other.nvars {
            return Err(JetError::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn zero_above_order(&mut self) {
        let start = match self.order {
            0 => 1,
            1 => self.off2(),
            2 => self.off3(),
            _ => return,
        };
        for c in &mut self.coeffs[start..] {
            *c = 0.0;
        }
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        Jet3 {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_const(&self, c: f64) -> Jet3 {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    fn zip_with(&self, other: &Jet3, f: impl Fn(f64, f64) -> f64) -> Result<Jet3, JetError> {
        self.check_same(other)?;
        let mut out = Jet3 {
            nvars: self.nvars,
            order: self.order.min(other.order),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        };
        out.zero_above_order();
        Ok(out)
    }

    pub fn checked_add(&self, other: &Jet3) -> Result<Jet3, JetError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Jet3) -> Result<Jet3, JetError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Truncated Leibniz product.
    pub fn checked_mul(&self, other: &Jet3) -> Result<Jet3, JetError> {
        self.check_same(other)?;
        let n = self.nvars;
        let (a, b) = (self, other);
        let mut out = Jet3::zero(n);
        out.order = a.order.min(b.order);
        let (a0, b0) = (a.value(), b.value());
        out.coeffs[0] = a0 * b0;
        for i in 0..n {
            out.coeffs[1 + i] = a.d1(i) * b0 + a0 * b.d1(i);
        }
        if out.order >= 2 {
            for i in 0..n {
                for j in i..n {
                    let v =
                        a.d2(i, j) * b0 + a.d1(i) * b.d1(j) + a.d1(j) * b.d1(i) + a0 * b.d2(i, j);
                    let at = out.idx2(i, j);
                    out.coeffs[at] = v;
                }
            }
        }
        if out.order >= 3 {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let v = a.d3(i, j, k) * b0
                            + a.d2(i, j) * b.d1(k)
                            + a.d2(i, k) * b.d1(j)
                            + a.d2(j, k) * b.d1(i)
                            + a.d1(i) * b.d2(j, k)
                            + a.d1(j) * b.d2(i, k)
                            + a.d1(k) * b.d2(i, j)
                            + a0 * b.d3(i, j, k);
                        let at = out.idx3(i, j, k);
                        out.coeffs[at] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Quotient obtained by solving `b * q = a` degree by degree.
    pub fn checked_div(&self, other: &Jet3) -> Result<Jet3, JetError> {
        self.check_same(other)?;
        let b = other;
        let b0 = b.value();
        if b0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let a = self;
        let n = self.nvars;
        let mut q = Jet3::zero(n);
        q.order = a.order.min(b.order);
        let q0 = a.value() / b0;
        q.coeffs[0] = q0;
        for i in 0..n {
            q.coeffs[1 + i] = (a.d1(i) - q0 * b.d1(i)) / b0;
        }
        if q.order >= 2 {
            for i in 0..n {
                for j in i..n {
                    let rest = q.d1(i) * b.d1(j) + q.d1(j) * b.d1(i) + q0 * b.d2(i, j);
                    let at = q.idx2(i, j);
                    q.coeffs[at] = (a.d2(i, j) - rest) / b0;
                }
            }
        }
        if q.order >= 3 {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let rest = q.d2(i, j) * b.d1(k)
                            + q.d2(i, k) * b.d1(j)
                            + q.d2(j, k) * b.d1(i)
                            + q.d1(i) * b.d2(j, k)
                            + q.d1(j) * b.d2(i, k)
                            + q.d1(k) * b.d2(i, j)
                            + q0 * b.d3(i, j, k);
                        let at = q.idx3(i, j, k);
                        q.coeffs[at] = (a.d3(i, j, k) - rest) / b0;
                    }
                }
            }
        }
        Ok(q)
    }

    pub fn arith(op: JetOp, a: &Jet3, b: &Jet3) -> Result<Jet3, JetError> {
        match op {
            JetOp::Add => a.checked_add(b),
            JetOp::Sub => a.checked_sub(b),
            JetOp::Mul => a.checked_mul(b),
            JetOp::Div => a.checked_div(b),
        }
    }

    /// Composes a univariate function, given by its value and first three
    /// derivatives at `self.value()`, with this jet (Faà di Bruno to order 3).
    pub fn compose(&self, g: [f64; 4]) -> Jet3 {
        let n = self.nvars;
        let a = self;
        let mut out = Jet3::zero(n);
        out.order = a.order;
        out.coeffs[0] = g[0];
        for i in 0..n {
            out.coeffs[1 + i] = g[1] * a.d1(i);
        }
        if out.order >= 2 {
            for i in 0..n {
                for j in i..n {
                    let v = g[2] * a.d1(i) * a.d1(j) + g[1] * a.d2(i, j);
                    let at = out.idx2(i, j);
                    out.coeffs[at] = v;
                }
            }
        }
        if out.order >= 3 {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let v = g[3] * a.d1(i) * a.d1(j) * a.d1(k)
                            + g[2]
                                * (a.d2(i, j) * a.d1(k)
                                    + a.d2(i, k) * a.d1(j)
                                    + a.d2(j, k) * a.d1(i))
                            + g[1] * a.d3(i, j, k);
                        let at = out.idx3(i, j, k);
                        out.coeffs[at] = v;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, f: JetFn) -> Result<Jet3, JetError> {
        Ok(self.compose(f.derivatives(self.value())?))
    }

    pub fn sqrt(&self) -> Result<Jet3, JetError> {
        self.apply(JetFn::Sqrt)
    }

    pub fn sin(&self) -> Jet3 {
        self.compose(JetFn::Sin.derivatives(self.value()).expect("sin is total"))
    }

    pub fn cos(&self) -> Jet3 {
        self.compose(JetFn::Cos.derivatives(self.value()).expect("cos is total"))
    }

    pub fn exp(&self) -> Jet3 {
        self.compose(JetFn::Exp.derivatives(self.value()).expect("exp is total"))
    }

    pub fn ln(&self) -> Result<Jet3, JetError> {
        self.apply(JetFn::Log)
    }

    pub fn powf(&self, p: f64) -> Result<Jet3, JetError> {
        self.apply(JetFn::Pow(p))
    }

    /// Jet of `∂f/∂z_var`. The result is valid to one order less.
    pub fn derivative(&self, var: usize) -> Jet3 {
        let n = self.nvars;
        assert!(var < n, "derivative variable out of range");
        let mut out = Jet3::zero(n);
        if self.order == 0 {
            out.order = 0;
            out.coeffs[0] = f64::NAN;
            return out;
        }
        out.order = self.order - 1;
        out.coeffs[0] = self.d1(var);
        if out.order >= 1 {
            for i in 0..n {
                out.coeffs[1 + i] = self.d2(var, i);
            }
        }
        if out.order >= 2 {
            for i in 0..n {
                for j in i..n {
                    let at = out.idx2(i, j);
                    out.coeffs[at] = self.d3(var, i, j);
                }
            }
        }
        out
    }

    /// Copy with the valid order lowered to `order` (never raised).
    pub fn truncated(&self, order: u8) -> Jet3 {
        let mut out = self.clone();
        out.order = self.order.min(order);
        out.zero_above_order();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Largest absolute coefficient of total degree 1 or 2.
    pub fn low_order_norm(&self) -> f64 {
        self.coeffs[1..self.off3()]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Add for &Jet3 {
    type Output = Jet3;
    fn add(self, rhs: &Jet3) -> Jet3 {
        self.checked_add(rhs).expect("jet nvars mismatch")
    }
}

impl Sub for &Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: &Jet3) -> Jet3 {
        self.checked_sub(rhs).expect("jet nvars mismatch")
    }
}

impl Mul for &Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: &Jet3) -> Jet3 {
        self.checked_mul(rhs).expect("jet nvars mismatch")
    }
}

impl Neg for &Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::enumerate_sorted;
    use approx::assert_abs_diff_eq;

    fn var(i: usize, v: f64, n: usize) -> Jet3 {
        Jet3::variable(i, v, n).unwrap()
    }

    #[test]
    fn coefficient_count_matches_binomial() {
        for n in 0..8 {
            assert_eq!(Jet3::len_for(n), crate::multi_index::binom(n + 3, 3));
        }
    }

    #[test]
    fn index_layout_is_dense_and_lexicographic() {
        let n = 5;
        let j = Jet3::zero(n);
        for (r, idx) in enumerate_sorted(2, n).iter().enumerate() {
            assert_eq!(j.idx2(idx[0], idx[1]), j.off2() + r);
        }
        for (r, idx) in enumerate_sorted(3, n).iter().enumerate() {
            assert_eq!(j.idx3(idx[0], idx[1], idx[2]), j.off3() + r);
        }
    }

    #[test]
    fn variable_seeds() {
        let a = var(0, 5.0, 2);
        assert_eq!(a.value(), 5.0);
        assert_eq!(a.partial(&[1, 0]).unwrap(), 1.0);
        assert_eq!(a.partial(&[0, 1]).unwrap(), 0.0);
        assert_eq!(a.partial(&[2, 0]).unwrap(), 0.0);
        let b = var(1, -2.0, 2);
        assert_eq!(b.value(), -2.0);
        assert_eq!(b.partial(&[0, 1]).unwrap(), 1.0);
        assert!(matches!(
            Jet3::variable(2, 0.0, 2),
            Err(JetError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn square_of_a_variable() {
        let z = var(0, 3.0, 1);
        let sq = &z * &z;
        assert_eq!(sq.value(), 9.0);
        assert_eq!(sq.d1(0), 6.0);
        assert_eq!(sq.d2(0, 0), 2.0);
        assert_eq!(sq.d3(0, 0, 0), 0.0);
    }

    #[test]
    fn reciprocal_matches_symbolic_derivatives() {
        // 1/z: -1/z^2, 2/z^3, -6/z^4 at z = 2
        let one = Jet3::constant(1, 1.0);
        let z = var(0, 2.0, 1);
        let r = one.checked_div(&z).unwrap();
        assert_abs_diff_eq!(r.value(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.d1(0), -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.d2(0, 0), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.d3(0, 0, 0), -0.375, epsilon = 1e-15);
    }

    #[test]
    fn division_errors() {
        let z = var(0, 0.0, 1);
        assert_eq!(
            Jet3::constant(1, 1.0).checked_div(&z),
            Err(JetError::DivisionByZero)
        );
        assert!(matches!(
            Jet3::constant(1, 1.0).checked_add(&Jet3::zero(2)),
            Err(JetError::NvarsMismatch { .. })
        ));
    }

    #[test]
    fn add_negation_is_zero() {
        let a = &var(0, 1.5, 3) * &var(2, -0.7, 3);
        let s = &a + &(-&a);
        assert!(s.coeffs().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn sin_taylor_at_origin() {
        let s = var(0, 0.0, 1).sin();
        assert_eq!(s.value(), 0.0);
        assert_eq!(s.d1(0), 1.0);
        assert_eq!(s.d2(0, 0), 0.0);
        assert_eq!(s.d3(0, 0, 0), -1.0);
    }

    #[test]
    fn sqrt_of_constant_and_domain() {
        let r = Jet3::constant(2, 4.0).sqrt().unwrap();
        assert_eq!(r, Jet3::constant(2, 2.0));
        assert!(matches!(
            Jet3::constant(1, -1.0).sqrt(),
            Err(JetError::Domain { func: "sqrt", .. })
        ));
        assert!(matches!(
            Jet3::constant(1, 0.0).ln(),
            Err(JetError::Domain { func: "log", .. })
        ));
    }

    #[test]
    fn exp_of_log_is_identity() {
        let x = var(0, 1.3, 2);
        let y = var(1, 0.4, 2);
        let a = (&(&x * &x) + &(&y * &x.exp())).add_const(0.2);
        let back = a.ln().unwrap().exp();
        for (p, q) in a.coeffs().iter().zip(back.coeffs()) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-12 * (1.0 + p.abs()));
        }
    }

    #[test]
    fn integer_powers() {
        let z = var(0, -2.0, 1);
        let c = z.powf(3.0).unwrap();
        assert_eq!(c.value(), -8.0);
        assert_eq!(c.d1(0), 12.0);
        assert_eq!(c.d2(0, 0), -12.0);
        assert_eq!(c.d3(0, 0, 0), 6.0);
        let lin = var(0, 0.0, 1).powf(1.0).unwrap();
        assert_eq!(lin.d1(0), 1.0);
        assert_eq!(lin.d2(0, 0), 0.0);
        assert!(var(0, 0.0, 1).powf(-1.0).is_err());
        assert!(var(0, -1.0, 1).powf(0.5).is_err());
    }

    #[test]
    fn derivative_drops_one_order() {
        let x = var(0, 2.0, 2);
        let y = var(1, 3.0, 2);
        let f = &(&x * &x) * &y; // x^2 y
        let fx = f.derivative(0); // 2xy
        assert_eq!(fx.order(), 2);
        assert_eq!(fx.value(), 12.0);
        assert_eq!(fx.d1(0), 6.0);
        assert_eq!(fx.d1(1), 4.0);
        assert_eq!(fx.d2(0, 1), 2.0);
        assert!(fx.partial(&[1, 2]).is_err());
        let fxx = fx.derivative(0);
        assert_eq!(fxx.order(), 1);
        assert_eq!((&fxx * &f).order(), 1);
    }

    #[test]
    fn partial_rejects_degree_four() {
        let z = var(0, 1.0, 1);
        assert!(matches!(
            z.partial(&[4]),
            Err(JetError::OrderTooHigh { degree: 4, .. })
        ));
        assert!(matches!(
            z.partial(&[1, 0]),
            Err(JetError::BadMultiIndex { .. })
        ));
    }

    #[test]
    fn mixed_partial_of_product() {
        let p = &var(0, 0.3, 2) * &var(1, -1.1, 2);
        assert_eq!(p.partial(&[1, 1]).unwrap(), 1.0);
    }
}
