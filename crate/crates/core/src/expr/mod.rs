//! Expression language in which spray coefficients, candidate Finsler
//! functions and projective factors are written.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' number)?
//! atom   := number | ident | func '(' expr ')' | '(' expr ')'
//! ident  := ('x'|'y') digits
//! func   := 'sqrt' | 'sin' | 'cos' | 'exp' | 'log'
//! ```
//!
//! The exponent may also be written signed (`y1^-1`) or as a parenthesized
//! literal ratio (`y1^(1/3)`); anything else is rejected.

mod eval;
mod model;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::jets::JetError;

pub use model::{HomogeneityReport, ScalarModel, SprayModel, HOMOGENEITY_TOL};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    X,
    Y,
}

/// A coordinate variable; `index` is zero-based (`x1` has index 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub index: usize,
}

impl Var {
    pub fn x(index: usize) -> Self {
        Var {
            kind: VarKind::X,
            index,
        }
    }

    pub fn y(index: usize) -> Self {
        Var {
            kind: VarKind::Y,
            index,
        }
    }

    /// Position among the `2n` jet variables `(x1..xn, y1..yn)`.
    pub fn slot(&self, n: usize) -> usize {
        match self.kind {
            VarKind::X => self.index,
            VarKind::Y => n + self.index,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            VarKind::X => 'x',
            VarKind::Y => 'y',
        };
        write!(f, "{c}{}", self.index + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Power with a literal exponent.
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at column {}: {message}", .pos + 1)]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier `{name}` at column {}", .pos + 1)]
    UnknownIdentifier { pos: usize, name: String },
    #[error("variable `{name}` at column {} is out of range for dimension {n}", .pos + 1)]
    VariableOutOfRange { pos: usize, name: String, n: usize },
    #[error("exponent at column {} must be a numeric literal", .pos + 1)]
    NonLiteralExponent { pos: usize },
    #[error("empty expression")]
    Empty,
    #[error("domain violation in `{subexpr}`: {source}")]
    Domain { subexpr: String, source: JetError },
    #[error("expression uses variables beyond dimension {n}")]
    DimensionMismatch { n: usize },
    #[error("sample {index}: {source}")]
    AtSample {
        index: usize,
        source: Box<ExprError>,
    },
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn num(v: f64) -> Self {
        Expr::Num(v)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, p: f64) -> Self {
        Expr::Pow(Box::new(a), p)
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Expr::Call(f, Box::new(a))
    }

    /// Largest variable index (zero-based) used, if any.
    pub fn max_var_index(&self) -> Option<usize> {
        let mut best = None;
        self.visit_vars(&mut |v| best = best.max(Some(v.index)));
        best
    }

    fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.visit_vars(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Rewrites every variable through `f`.
    pub fn map_vars(&self, f: &impl Fn(Var) -> Var) -> Expr {
        let bx = |e: &Expr| Box::new(e.map_vars(f));
        match self {
            Expr::Num(c) => Expr::Num(*c),
            Expr::Var(v) => Expr::Var(f(*v)),
            Expr::Neg(a) => Expr::Neg(bx(a)),
            Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
            Expr::Sub(a, b) => Expr::Sub(bx(a), bx(b)),
            Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
            Expr::Div(a, b) => Expr::Div(bx(a), bx(b)),
            Expr::Pow(a, p) => Expr::Pow(bx(a), *p),
            Expr::Call(g, a) => Expr::Call(*g, bx(a)),
        }
    }

    /// The number a chain of negations around a literal denotes; the parser
    /// folds such chains into a single literal.
    fn literal(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Neg(a) => a.literal().map(|v| -v),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        if let Some(v) = self.literal() {
            return if v < 0.0 { 3 } else { 5 };
        }
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }

    fn fmt_min(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn fmt_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    if v == 0.0 {
        // avoid printing "-0"
        write!(f, "0")
    } else {
        write!(f, "{v}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.literal() {
            return fmt_number(f, v);
        }
        match self {
            Expr::Num(v) => fmt_number(f, *v),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_min(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.fmt_min(f, 1)?;
                let op = if matches!(self, Expr::Add(..)) {
                    '+'
                } else {
                    '-'
                };
                write!(f, " {op} ")?;
                b.fmt_min(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.fmt_min(f, 2)?;
                let op = if matches!(self, Expr::Mul(..)) {
                    '*'
                } else {
                    '/'
                };
                write!(f, "{op}")?;
                b.fmt_min(f, 3)
            }
            Expr::Pow(a, p) => {
                a.fmt_min(f, 5)?;
                write!(f, "^")?;
                fmt_number(f, *p)
            }
            Expr::Call(g, a) => write!(f, "{}({a})", g.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_respects_precedence() {
        let e = parse("-(y1 + y2)^2 * (x1 - (x2 - 3))/sin(y1)", 2).unwrap();
        assert_eq!(e.to_string(), "-(y1 + y2)^2*(x1 - (x2 - 3))/sin(y1)");
        let e = parse("(-2)^2 - -y1", 1).unwrap();
        assert_eq!(e.to_string(), "(-2)^2 - -y1");
        assert_eq!(parse("y1^-1", 1).unwrap().to_string(), "y1^-1");
    }

    #[test]
    fn max_var_index() {
        assert_eq!(parse("x1 + y3", 3).unwrap().max_var_index(), Some(2));
        assert_eq!(parse("2", 1).unwrap().max_var_index(), None);
    }
}
