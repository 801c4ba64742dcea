use super::{Expr, ExprError, Func, Var};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let v: f64 = lit.parse().map_err(|_| ExprError::Syntax {
                pos: start,
                message: format!("malformed number `{lit}`"),
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ExprError::Syntax {
            pos: start,
            message: format!("unexpected character `{ch}`"),
        });
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(ExprError::Syntax {
                pos: self.pos(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(match inner {
                Expr::Num(v) => Expr::Num(-v),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let p = self.exponent()?;
        Ok(Expr::pow(base, p))
    }

    fn signed_literal(&mut self) -> Option<f64> {
        let save = self.at;
        let sign = if *self.peek() == Tok::Minus {
            self.bump();
            -1.0
        } else {
            1.0
        };
        if let Tok::Num(v) = *self.peek() {
            self.bump();
            Some(sign * v)
        } else {
            self.at = save;
            None
        }
    }

    fn exponent(&mut self) -> Result<f64, ExprError> {
        let pos = self.pos();
        if let Some(v) = self.signed_literal() {
            return Ok(v);
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let num = self
                .signed_literal()
                .ok_or(ExprError::NonLiteralExponent { pos })?;
            let value = if *self.peek() == Tok::Slash {
                self.bump();
                let den = self
                    .signed_literal()
                    .ok_or(ExprError::NonLiteralExponent { pos })?;
                if den == 0.0 {
                    return Err(ExprError::NonLiteralExponent { pos });
                }
                num / den
            } else {
                num
            };
            if *self.peek() != Tok::RParen {
                return Err(ExprError::NonLiteralExponent { pos });
            }
            self.bump();
            return Ok(value);
        }
        Err(ExprError::NonLiteralExponent { pos })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::call(func, arg));
                }
                self.variable(&name, pos).map(Expr::Var)
            }
            Tok::End => Err(ExprError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
            other => Err(ExprError::Syntax {
                pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Var, ExprError> {
        let unknown = || ExprError::UnknownIdentifier {
            pos,
            name: name.to_string(),
        };
        let (head, digits) = name.split_at(1);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let index: usize = digits.parse().map_err(|_| unknown())?;
        let out_of_range = || ExprError::VariableOutOfRange {
            pos,
            name: name.to_string(),
            n: self.n,
        };
        if index == 0 || index > self.n {
            return Err(out_of_range());
        }
        match head {
            "x" => Ok(Var::x(index - 1)),
            "y" => Ok(Var::y(index - 1)),
            _ => Err(unknown()),
        }
    }
}

/// Parses `text` into an expression over the variables `x1..xn, y1..yn`.
pub fn parse(text: &str, n: usize) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    if toks.len() == 1 {
        return Err(ExprError::Empty);
    }
    let mut p = Parser { toks, at: 0, n };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ExprError::Syntax {
            pos: p.pos(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize) -> Expr {
        Expr::Var(Var::y(i))
    }

    fn x(i: usize) -> Expr {
        Expr::Var(Var::x(i))
    }

    #[test]
    fn sum_of_squares() {
        let e = parse("y1^2 + y2^2", 2).unwrap();
        assert_eq!(e, Expr::add(Expr::pow(y(0), 2.0), Expr::pow(y(1), 2.0)));
    }

    #[test]
    fn left_associative_products() {
        let e = parse("-2*y1*y2/x1", 2).unwrap();
        let expected = Expr::div(Expr::mul(Expr::mul(Expr::Num(-2.0), y(0)), y(1)), x(0));
        assert_eq!(e, expected);
        let e = parse("a", 2);
        assert!(matches!(e, Err(ExprError::UnknownIdentifier { .. })));
    }

    #[test]
    fn variable_out_of_range() {
        assert!(matches!(
            parse("y3", 2),
            Err(ExprError::VariableOutOfRange { pos: 0, .. })
        ));
        assert!(matches!(
            parse("x0", 2),
            Err(ExprError::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse("-y1^2", 1).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::pow(y(0), 2.0))));
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(parse("y1^-1", 1).unwrap(), Expr::pow(y(0), -1.0));
        assert_eq!(parse("y1^(1/4)", 1).unwrap(), Expr::pow(y(0), 0.25));
        assert_eq!(parse("y1^(-3)", 1).unwrap(), Expr::pow(y(0), -3.0));
        assert!(matches!(
            parse("y1^y2", 2),
            Err(ExprError::NonLiteralExponent { pos: 3 })
        ));
        assert!(matches!(
            parse("y1^(y2)", 2),
            Err(ExprError::NonLiteralExponent { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("y1 + * y2", 2) {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("sqrt(y1", 1),
            Err(ExprError::Syntax { pos: 7, .. })
        ));
        assert!(matches!(
            parse("y1 y2", 2),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse("y1 $", 1),
            Err(ExprError::Syntax { pos: 3, .. })
        ));
        assert_eq!(parse("   ", 1), Err(ExprError::Empty));
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse("1.5e-3", 1).unwrap(), Expr::Num(1.5e-3));
        assert_eq!(
            parse("2E2*y1", 1).unwrap(),
            Expr::mul(Expr::Num(200.0), y(0))
        );
    }
}
