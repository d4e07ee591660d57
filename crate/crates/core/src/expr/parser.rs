use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};

/// Parenthesis/operator nesting limit, keeps recursion off the stack guard.
pub const MAX_DEPTH: usize = 256;

pub fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
        depth: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                break;
            };
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                break;
            };
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let e = if self.eat(b'-') {
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // Right associative: the exponent may itself be a power.
            let exp = self.unary()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent"));
            }
        }
        // Only ASCII digits, signs, '.', 'e' were consumed.
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "malformed number".into(),
        })?;
        if !v.is_finite() {
            return Err(Error::Syntax {
                offset: start,
                message: "number out of range".into(),
            });
        }
        Ok(Expr::Num(v))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "t" => return Ok(Expr::Var),
            "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(Error::UnknownIdentifier {
                name: name.to_string(),
                offset: start,
            });
        };
        if !self.eat(b'(') {
            return Err(self.error("expected `(` after function name"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected `)`"));
        }
        Ok(Expr::call(func, arg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_offset(s: &str) -> usize {
        match parse(s) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn cot_of_t() {
        assert_eq!(parse("cot(t)").unwrap(), Expr::call(Func::Cot, Expr::Var));
    }

    #[test]
    fn precedence() {
        let want = Expr::bin(
            BinOp::Sub,
            Expr::bin(
                BinOp::Div,
                Expr::bin(BinOp::Pow, Expr::Var, Expr::Num(2.0)),
                Expr::Num(2.0),
            ),
            Expr::bin(BinOp::Div, Expr::Num(1.0), Expr::Num(5.0)),
        );
        assert_eq!(parse("t^2/2 - 1/5").unwrap(), want);
    }

    #[test]
    fn unbalanced_paren_offset() {
        assert_eq!(syntax_offset("sin("), 4);
        assert_eq!(syntax_offset("(t"), 2);
        assert_eq!(syntax_offset("t)"), 1);
    }

    #[test]
    fn power_binds_tighter_than_minus_and_is_right_assoc() {
        assert_eq!(
            parse("-t^2").unwrap(),
            Expr::Neg(Box::new(Expr::bin(BinOp::Pow, Expr::Var, Expr::Num(2.0))))
        );
        assert_eq!(
            parse("2^3^2").unwrap(),
            Expr::bin(
                BinOp::Pow,
                Expr::Num(2.0),
                Expr::bin(BinOp::Pow, Expr::Num(3.0), Expr::Num(2.0))
            )
        );
        assert!(parse("t^-1").is_ok());
    }

    #[test]
    fn subtraction_is_left_assoc() {
        assert_eq!(
            parse("t-1-2").unwrap(),
            Expr::bin(
                BinOp::Sub,
                Expr::bin(BinOp::Sub, Expr::Var, Expr::Num(1.0)),
                Expr::Num(2.0)
            )
        );
    }

    #[test]
    fn unknown_identifier() {
        match parse("2*foo(t)") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x"), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
        assert_eq!(parse(".25").unwrap(), Expr::Num(0.25));
        assert_eq!(parse("3.").unwrap(), Expr::Num(3.0));
        assert!(parse("1e").is_err());
        assert!(parse(".").is_err());
        assert!(parse("1e999").is_err());
    }

    #[test]
    fn misc_errors() {
        assert!(parse("").is_err());
        assert!(parse("   ").is_err());
        assert!(parse("sin t").is_err());
        assert!(parse("t +").is_err());
        assert!(parse("t $ 2").is_err());
        assert!(parse("t t").is_err());
    }

    #[test]
    fn depth_limit() {
        let deep = "(".repeat(MAX_DEPTH + 5) + "t" + &")".repeat(MAX_DEPTH + 5);
        assert!(parse(&deep).is_err());
        let minus = "-".repeat(100_000) + "t";
        assert!(parse(&minus).is_err());
        let ok = "(".repeat(50) + "t" + &")".repeat(50);
        assert_eq!(parse(&ok).unwrap(), Expr::Var);
    }

    #[test]
    fn pi_is_a_literal() {
        assert_eq!(parse("pi").unwrap(), Expr::Num(std::f64::consts::PI));
    }
}
