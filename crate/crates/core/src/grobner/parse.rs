//! Polynomial expression grammar:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary ("*" unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" integer)?
//! atom  := integer | identifier | "(" expr ")"
//! ```

use num_bigint::BigInt;

use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            toks.push((Tok::Int(s.parse().unwrap()), start.0, start.1));
            col += j - i;
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            toks.push((Tok::Ident(chars[i..j].iter().collect()), start.0, start.1));
            col += j - i;
            i = j;
        } else if "+-*^()".contains(c) {
            toks.push((Tok::Op(c), line, col));
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character `{c}`"),
                expected: "integer, identifier, operator or parenthesis".into(),
            });
        }
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks })
}

struct Parser {
    lx: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.pos].0
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let (t, line, column) = &self.lx.toks[self.pos];
        Err(Error::Parse {
            line: *line,
            column: *column,
            message: format!("unexpected {}", t.describe()),
            expected: expected.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == &Tok::Op('*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == &Tok::Op('^') {
            self.pos += 1;
            match self.peek().clone() {
                Tok::Int(n) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) => e,
                        Err(_) => return self.fail("exponent below 2^32"),
                    };
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.fail("integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != &Tok::Op(')') {
                    return self.fail("`)`");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.fail("integer, identifier or `(`"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { lx: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return p.fail("operator or end of input");
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, ring: &PolyRing) -> Result<Poly> {
        Ok(match self {
            Expr::Int(n) => ring.constant(ring.field.from_bigint(n)),
            Expr::Var(v) => match ring.var_index(v) {
                Some(i) => ring.var(i),
                None => return Err(Error::Schema(format!("unknown variable `{v}`"))),
            },
            Expr::Neg(a) => ring.neg(&a.eval(ring)?),
            Expr::Add(a, b) => ring.add(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Sub(a, b) => ring.sub(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Mul(a, b) => ring.mul(&a.eval(ring)?, &b.eval(ring)?),
            Expr::Pow(a, e) => ring.pow(&a.eval(ring)?, *e),
        })
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.variables(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn parse_poly(ring: &PolyRing, src: &str) -> Result<Poly> {
    parse_expr(src)?.eval(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;

    #[test]
    fn precedence() {
        let r = PolyRing::new(ScalarField::Rationals, vec!["x".into(), "y".into()]).unwrap();
        let p = parse_poly(&r, "-x^2 + 2*x*y - (y - 1)^2").unwrap();
        assert_eq!(r.format(&p), "-x^2 + 2*x*y - y^2 + 2*y - 1");
    }

    #[test]
    fn double_caret() {
        match parse_expr("x^^2") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trailing_garbage() {
        assert!(matches!(parse_expr("x y"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_expr("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("x/2"), Err(Error::Parse { column: 2, .. })));
    }
}
