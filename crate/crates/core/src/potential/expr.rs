//! Arithmetic expressions in one variable `x`, evaluated at complex points.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | 'x' | 'pi' | 'e' | func '(' sum ')' | '(' sum ')'
//! func    := exp | sin | cos | sinh | cosh | sqrt | abs
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so
//! `-x^2` is `-(x^2)`. `abs` is accepted but is not analytic; trees that
//! contain it only evaluate on the real axis.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Func::Exp => w.exp(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Sinh => w.sinh(),
            Func::Cosh => w.cosh(),
            Func::Sqrt => w.sqrt(),
            Func::Abs => Complex64::new(w.norm(), 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src, pos: 0 };
        p.skip_ws();
        if p.pos == src.len() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        match self {
            Expr::Num(v) => Complex64::new(*v, 0.0),
            Expr::X => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Bin(op, a, b) => {
                let l = a.eval(x);
                match op {
                    BinOp::Add => l + b.eval(x),
                    BinOp::Sub => l - b.eval(x),
                    BinOp::Mul => l * b.eval(x),
                    BinOp::Div => l / b.eval(x),
                    BinOp::Pow => match b.as_integer() {
                        Some(n) => l.powi(n),
                        None => l.powc(b.eval(x)),
                    },
                }
            }
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    /// True when no node breaks complex analyticity.
    pub fn is_analytic(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::X => true,
            Expr::Neg(a) => a.is_analytic(),
            Expr::Bin(_, a, b) => a.is_analytic() && b.is_analytic(),
            Expr::Call(Func::Abs, _) => false,
            Expr::Call(_, a) => a.is_analytic(),
        }
    }

    /// True when the tree is invariant under `x -> -x` by construction
    /// (only even powers of `x` reach the variable).
    pub fn is_even(&self) -> bool {
        self.parity() == Some(true)
    }

    // Some(true) = even, Some(false) = odd, None = neither or unknown.
    fn parity(&self) -> Option<bool> {
        match self {
            Expr::Num(_) => Some(true),
            Expr::X => Some(false),
            Expr::Neg(a) => a.parity(),
            Expr::Bin(op, a, b) => {
                let (pa, pb) = (a.parity(), b.parity());
                match op {
                    BinOp::Add | BinOp::Sub => (pa == pb).then_some(pa).flatten(),
                    BinOp::Mul | BinOp::Div => Some(pa? == pb?),
                    BinOp::Pow => match b.as_integer() {
                        Some(n) if n % 2 == 0 => pa.map(|_| true),
                        Some(_) => pa,
                        None if pa == Some(true) && b.is_constant() => Some(true),
                        None => None,
                    },
                }
            }
            Expr::Call(f, a) => match (f, a.parity()?) {
                (_, true) => Some(true),
                (Func::Cos | Func::Cosh | Func::Abs, false) => Some(true),
                (Func::Sin | Func::Sinh, false) => Some(false),
                _ => None,
            },
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::X => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    fn as_integer(&self) -> Option<i32> {
        if !self.is_constant() {
            return None;
        }
        let v = self.eval(Complex64::new(0.0, 0.0));
        (v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() <= 64.0).then_some(v.re as i32)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a}{s}{b})")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
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

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match name {
                    "x" => Ok(Expr::X),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    _ => {
                        let Some(func) = Func::from_name(name) else {
                            return Err(Error::UnknownIdentifier {
                                name: name.to_string(),
                                offset: start,
                            });
                        };
                        if !self.eat(b'(') {
                            return Err(self.syntax("expected `(` after function name"));
                        }
                        let arg = self.sum()?;
                        if !self.eat(b')') {
                            return Err(self.syntax("expected `)`"));
                        }
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
            self.pos += 1;
        }
        // Exponent part, only when followed by digits.
        if self.pos < bytes.len() && matches!(bytes[self.pos], b'e' | b'E') {
            let mut p = self.pos + 1;
            if p < bytes.len() && matches!(bytes[p], b'+' | b'-') {
                p += 1;
            }
            if p < bytes.len() && bytes[p].is_ascii_digit() {
                while p < bytes.len() && bytes[p].is_ascii_digit() {
                    p += 1;
                }
                self.pos = p;
            }
        }
        self.src[start..self.pos]
            .parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| Error::Syntax {
                offset: start,
                message: "malformed number".into(),
            })
    }
}
