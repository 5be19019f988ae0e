//! A small arithmetic expression language.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `log`, `sqrt`, `exp`. Constants: `pi`. Any other bare name is a
//! variable bound at evaluation time. `^` is right associative.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(String),
    Pi,
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Sqrt,
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Name(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
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
            out.push((start, Tok::Num(src[start..i].to_string())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of expression"),
        };
        match tok {
            Tok::Num(text) => {
                if text.matches('.').count() > 1 || text == "." {
                    return self.err(format!("malformed number {text:?}"));
                }
                self.at += 1;
                Ok(Expr::Num(text))
            }
            Tok::Name(name) => {
                self.at += 1;
                let func = match name.as_str() {
                    "log" | "ln" => Some(Func::Log),
                    "sqrt" => Some(Func::Sqrt),
                    "exp" => Some(Func::Exp),
                    _ => None,
                };
                if let Some(func) = func {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if name == "pi" {
                    Ok(Expr::Pi)
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::Sym('(') => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            toks: tokenize(src)?,
            at: 0,
            end: src.len(),
        };
        let e = p.expr()?;
        if p.at != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    /// Names of the free variables, in first-use order.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Var(v) if !out.contains(v) => out.push(v.clone()),
                Expr::Neg(a) | Expr::Call(_, a) => walk(a, out),
                Expr::Bin(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Evaluates with the given variable bindings.
    pub fn eval<R: Real>(&self, vars: &[(&str, R)]) -> Result<R> {
        Ok(match self {
            Expr::Num(text) => R::from_decimal(text)
                .ok_or_else(|| Error::Domain(format!("malformed number {text:?}")))?,
            Expr::Pi => R::pi(),
            Expr::Var(name) => vars
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Domain(format!("unbound variable {name:?}")))?,
            Expr::Neg(a) => -a.eval(vars)?,
            Expr::Call(func, a) => {
                let x = a.eval(vars)?;
                match func {
                    Func::Log => {
                        if !x.is_positive() {
                            return Err(Error::Domain(format!("log of nonpositive value {}", x.to_f64())));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x.to_f64() < 0.0 {
                            return Err(Error::Domain(format!("sqrt of negative value {}", x.to_f64())));
                        }
                        if x.is_zero() {
                            x
                        } else {
                            x.sqrt()
                        }
                    }
                    Func::Exp => x.exp(),
                }
            }
            Expr::Bin(op, a, b) => {
                let x = a.eval(vars)?;
                let y = b.eval(vars)?;
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div => {
                        if y.is_zero() {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        x / y
                    }
                    Op::Pow => {
                        let integral = y.to_f64().fract() == 0.0;
                        if !x.is_positive() && !(integral && !x.is_zero()) {
                            if x.is_zero() && y.is_positive() {
                                return Ok(x);
                            }
                            return Err(Error::Domain(format!(
                                "power {}^{} is not real",
                                x.to_f64(),
                                y.to_f64()
                            )));
                        }
                        x.pow(&y)
                    }
                }
            }
        })
    }
}
