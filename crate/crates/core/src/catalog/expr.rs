//! Evaluator for the arithmetic expressions used in the catalog data.
//!
//! Grammar: numbers, `pi`, `+ - * / ^`, parentheses and `sqrt(..)`.
//! `^` binds tighter than unary minus and is right associative.

/// Position (byte offset) and description of a syntax error.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<f64, ExprError> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v += self.term()?;
            } else if self.eat(b'-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, ExprError> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v *= self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                if d == 0.0 {
                    return Err(ExprError {
                        offset: at,
                        message: "division by zero".into(),
                    });
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, ExprError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<f64, ExprError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(base.powf(self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<f64, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.call(),
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err(format!("bad number '{text}'"))
        })
    }

    fn call(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "pi" => Ok(std::f64::consts::PI),
            "sqrt" => {
                if !self.eat(b'(') {
                    return self.err("expected '(' after sqrt");
                }
                let at = self.pos;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                if v < 0.0 {
                    return Err(ExprError {
                        offset: at,
                        message: format!("sqrt of negative value {v}"),
                    });
                }
                Ok(v.sqrt())
            }
            _ => {
                self.pos = start;
                self.err(format!("unknown identifier '{name}'"))
            }
        }
    }
}

/// Evaluates an expression such as `"sqrt(sqrt(2)-1)"` or `"3^(1/4)/2"`.
pub fn eval_expr(src: &str) -> Result<f64, ExprError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(eval_expr("1/2").unwrap(), 0.5);
        assert_eq!(eval_expr("-3^2").unwrap(), -9.0);
        assert_eq!(eval_expr("2^3^2").unwrap(), 512.0);
        assert_eq!(eval_expr("2*(3-1) - 4/8").unwrap(), 3.5);
        assert!((eval_expr("sqrt(3)/6").unwrap() - 3f64.sqrt() / 6.0).abs() < 1e-16);
        let nested = eval_expr("sqrt((sqrt(5)+3)/6)").unwrap();
        assert!((nested - ((5f64.sqrt() + 3.0) / 6.0).sqrt()).abs() < 1e-16);
        assert!((eval_expr("3^(1/4)").unwrap() - 3f64.powf(0.25)).abs() < 1e-16);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(eval_expr("1 + ").unwrap_err().offset, 4);
        assert_eq!(eval_expr("sqrt(2").unwrap_err().message, "expected ')'");
        assert_eq!(eval_expr("foo(1)").unwrap_err().offset, 0);
        assert!(eval_expr("sqrt(-1)").is_err());
        assert!(eval_expr("1/0").is_err());
        assert!(eval_expr("1 2").is_err());
    }
}
