//! Polynomial expressions in `x1..xd` with integer coefficients.
//!
//! Precedence, tightest first: `^`, unary `-`, `*`, binary `+`/`-`. Binary
//! operators are left-associative, exponents are nonnegative integer
//! literals, and `lhs = rhs` is read as `lhs - rhs`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{pow_mod, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Const(u64),
    /// 1-based variable index.
    Var(usize),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    /// Value at `x` reduced mod `q`. `x` must have at least as many
    /// coordinates as the largest variable index.
    pub fn eval(&self, ctx: &FieldCtx, x: &[u32]) -> u32 {
        let q = u64::from(ctx.q());
        match self {
            PolyExpr::Const(c) => (c % q) as u32,
            PolyExpr::Var(i) => x[i - 1] % ctx.q(),
            PolyExpr::Neg(e) => ctx.neg(e.eval(ctx, x)),
            PolyExpr::Add(a, b) => ctx.add(a.eval(ctx, x), b.eval(ctx, x)),
            PolyExpr::Sub(a, b) => ctx.add(a.eval(ctx, x), ctx.neg(b.eval(ctx, x))),
            PolyExpr::Mul(a, b) => ctx.mul(a.eval(ctx, x), b.eval(ctx, x)),
            PolyExpr::Pow(base, k) => pow_mod(u64::from(base.eval(ctx, x)), u64::from(*k), q) as u32,
        }
    }

    pub fn max_var(&self) -> usize {
        match self {
            PolyExpr::Const(_) => 0,
            PolyExpr::Var(i) => *i,
            PolyExpr::Neg(e) | PolyExpr::Pow(e, _) => e.max_var(),
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Mul(..) => 2,
            PolyExpr::Neg(_) => 3,
            PolyExpr::Pow(..) => 4,
            PolyExpr::Const(_) | PolyExpr::Var(_) => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &PolyExpr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Const(c) => write!(f, "{c}"),
            PolyExpr::Var(i) => write!(f, "x{i}"),
            PolyExpr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.level() < 3)
            }
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) => {
                write_child(f, a, a.level() < 1)?;
                f.write_str(if matches!(self, PolyExpr::Add(..)) { "+" } else { "-" })?;
                write_child(f, b, b.level() <= 1)
            }
            PolyExpr::Mul(a, b) => {
                write_child(f, a, a.level() < 2)?;
                f.write_str("*")?;
                write_child(f, b, b.level() <= 2)
            }
            PolyExpr::Pow(base, k) => {
                write_child(f, base, base.level() < 5)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Num(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Equals,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'=' => Token::Equals,
            b'0'..=b'9' => {
                let end = digits(i);
                let n = src[i..end].parse::<u64>().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "integer literal too large".into(),
                })?;
                i = end;
                out.push((start, Token::Num(n)));
                continue;
            }
            b'x' | b'X' => {
                let end = digits(i + 1);
                if end == i + 1 {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: "expected variable index after 'x'".into(),
                    });
                }
                let index = src[i + 1..end].parse::<usize>().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "variable index too large".into(),
                })?;
                i = end;
                out.push((start, Token::Var(index)));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", c as char),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn error<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Token::Star) {
            self.bump();
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr> {
        if self.peek() == Some(Token::Minus) {
            self.bump();
            return Ok(PolyExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PolyExpr> {
        let mut base = self.atom()?;
        while self.peek() == Some(Token::Caret) {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Token::Num(k)) => {
                    let k = u32::try_from(k).map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "exponent too large".into(),
                    })?;
                    base = PolyExpr::Pow(Box::new(base), k);
                }
                Some(Token::Minus) => return Err(Error::NegativeExponent(at)),
                _ => {
                    self.pos -= 1;
                    return self.error("expected a nonnegative integer exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolyExpr> {
        let at = self.offset();
        match self.bump() {
            Some(Token::Num(n)) => Ok(PolyExpr::Const(n)),
            Some(Token::Var(i)) => {
                if i == 0 || i > self.dim {
                    return Err(Error::UnknownVariable {
                        index: i,
                        dim: self.dim,
                    });
                }
                Ok(PolyExpr::Var(i))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Token::RParen) {
                    self.pos -= 1;
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(_) => Err(Error::Syntax {
                pos: at,
                msg: "expected a number, variable or '('".into(),
            }),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a polynomial, or an equation `lhs = rhs`, over `x1..x{d}`.
pub fn parse_poly(src: &str, d: usize) -> Result<PolyExpr> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        dim: d,
    };
    if p.peek().is_none() {
        return p.error("empty expression");
    }
    let lhs = p.expr()?;
    let expr = if p.peek() == Some(Token::Equals) {
        p.bump();
        PolyExpr::Sub(Box::new(lhs), Box::new(p.expr()?))
    } else {
        lhs
    };
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(expr)
}
