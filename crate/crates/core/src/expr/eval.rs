use super::{Expr, ExprError, Func, VarKind};
use crate::jets::{Jet3, JetError, JetFn};
use crate::point::TangentPoint;

fn jet_fn(f: Func) -> JetFn {
    match f {
        Func::Sqrt => JetFn::Sqrt,
        Func::Sin => JetFn::Sin,
        Func::Cos => JetFn::Cos,
        Func::Exp => JetFn::Exp,
        Func::Log => JetFn::Log,
    }
}

impl Expr {
    fn domain(&self, source: JetError) -> ExprError {
        ExprError::Domain {
            subexpr: self.to_string(),
            source,
        }
    }

    /// Plain evaluation at `(x, y)`. Domain rules match [`Expr::eval_jet`].
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64, ExprError> {
        Ok(match self {
            Expr::Num(c) => *c,
            Expr::Var(v) => {
                let src = match v.kind {
                    VarKind::X => x,
                    VarKind::Y => y,
                };
                *src.get(v.index)
                    .ok_or(ExprError::DimensionMismatch { n: x.len() })?
            }
            Expr::Neg(a) => -a.eval(x, y)?,
            Expr::Add(a, b) => a.eval(x, y)? + b.eval(x, y)?,
            Expr::Sub(a, b) => a.eval(x, y)? - b.eval(x, y)?,
            Expr::Mul(a, b) => a.eval(x, y)? * b.eval(x, y)?,
            Expr::Div(a, b) => {
                let num = a.eval(x, y)?;
                let den = b.eval(x, y)?;
                if den == 0.0 {
                    return Err(self.domain(JetError::DivisionByZero));
                }
                num / den
            }
            Expr::Pow(a, p) => {
                let t = a.eval(x, y)?;
                JetFn::Pow(*p).derivatives(t).map_err(|e| self.domain(e))?[0]
            }
            Expr::Call(f, a) => {
                let t = a.eval(x, y)?;
                jet_fn(*f).derivatives(t).map_err(|e| self.domain(e))?[0]
            }
        })
    }

    /// Third-order jet at `p` in the `2n` variables `(x1..xn, y1..yn)`.
    pub fn eval_jet(&self, p: &TangentPoint) -> Result<Jet3, ExprError> {
        let n = p.dim();
        if self.max_var_index().is_some_and(|m| m >= n) {
            return Err(ExprError::DimensionMismatch { n });
        }
        self.jet_rec(p, n)
    }

    fn jet_rec(&self, p: &TangentPoint, n: usize) -> Result<Jet3, ExprError> {
        let nv = 2 * n;
        Ok(match self {
            Expr::Num(c) => Jet3::constant(nv, *c),
            Expr::Var(v) => {
                let value = match v.kind {
                    VarKind::X => p.x[v.index],
                    VarKind::Y => p.y[v.index],
                };
                Jet3::variable(v.slot(n), value, nv).map_err(|e| self.domain(e))?
            }
            Expr::Neg(a) => a.jet_rec(p, n)?.scale(-1.0),
            Expr::Add(a, b) => &a.jet_rec(p, n)? + &b.jet_rec(p, n)?,
            Expr::Sub(a, b) => &a.jet_rec(p, n)? - &b.jet_rec(p, n)?,
            Expr::Mul(a, b) => &a.jet_rec(p, n)? * &b.jet_rec(p, n)?,
            Expr::Div(a, b) => a
                .jet_rec(p, n)?
                .checked_div(&b.jet_rec(p, n)?)
                .map_err(|e| self.domain(e))?,
            Expr::Pow(a, e) => a
                .jet_rec(p, n)?
                .apply(JetFn::Pow(*e))
                .map_err(|err| self.domain(err))?,
            Expr::Call(f, a) => a
                .jet_rec(p, n)?
                .apply(jet_fn(*f))
                .map_err(|e| self.domain(e))?,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use crate::point::TangentPoint;
    use approx::assert_abs_diff_eq;

    #[test]
    fn product_jet() {
        let e = parse("x1*y1", 1).unwrap();
        let p = TangentPoint::new(vec![2.0], vec![3.0]).unwrap();
        let j = e.eval_jet(&p).unwrap();
        assert_eq!(j.value(), 6.0);
        assert_eq!(j.d1(0), 3.0);
        assert_eq!(j.d1(1), 2.0);
        assert_eq!(j.d2(0, 1), 1.0);
    }

    #[test]
    fn euclidean_norm_gradient() {
        let e = parse("sqrt(y1^2+y2^2)", 2).unwrap();
        let p = TangentPoint::new(vec![0.0, 0.0], vec![3.0, 4.0]).unwrap();
        let j = e.eval_jet(&p).unwrap();
        assert_abs_diff_eq!(j.value(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j.d1(2), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(j.d1(3), 0.8, epsilon = 1e-15);
        assert_eq!(j.d1(0), 0.0);
    }

    #[test]
    fn division_by_zero_names_subexpression() {
        let e = parse("y1 + 1/x1", 1).unwrap();
        let p = TangentPoint::new(vec![0.0], vec![1.0]).unwrap();
        match e.eval_jet(&p) {
            Err(crate::expr::ExprError::Domain { subexpr, .. }) => assert_eq!(subexpr, "1/x1"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(e.eval(&[0.0], &[1.0]).is_err());
    }

    #[test]
    fn plain_and_jet_values_agree() {
        let e = parse("exp(x1)*sin(y2)/(1 + y1^2) - log(2 + cos(x2))*y2^3", 2).unwrap();
        let p = TangentPoint::new(vec![0.3, -0.8], vec![1.1, 0.7]).unwrap();
        let plain = e.eval(&p.x, &p.y).unwrap();
        let jet = e.eval_jet(&p).unwrap().value();
        assert_abs_diff_eq!(plain, jet, epsilon = 1e-12 * plain.abs().max(1.0));
    }
}
