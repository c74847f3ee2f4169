//! Small scalar expression language used by operator coefficients,
//! parameter shifts and argument maps.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{binomial, falling_factorial, rising_factorial, Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sym {
    A1,
    A2,
    B1,
    B2,
    C,
    T1,
    T2,
    T,
    X,
    Y,
    Z,
}

impl Sym {
    pub const ALL: [Sym; 11] = [
        Sym::A1,
        Sym::A2,
        Sym::B1,
        Sym::B2,
        Sym::C,
        Sym::T1,
        Sym::T2,
        Sym::T,
        Sym::X,
        Sym::Y,
        Sym::Z,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::A1 => "a1",
            Sym::A2 => "a2",
            Sym::B1 => "b1",
            Sym::B2 => "b2",
            Sym::C => "c",
            Sym::T1 => "t1",
            Sym::T2 => "t2",
            Sym::T => "t",
            Sym::X => "x",
            Sym::Y => "y",
            Sym::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Sym> {
        Sym::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntSym {
    K1,
    K2,
    K,
    R,
    S,
    Idx,
}

impl IntSym {
    pub const ALL: [IntSym; 6] = [IntSym::K1, IntSym::K2, IntSym::K, IntSym::R, IntSym::S, IntSym::Idx];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            IntSym::K1 => "k1",
            IntSym::K2 => "k2",
            IntSym::K => "k",
            IntSym::R => "r",
            IntSym::S => "s",
            IntSym::Idx => "j",
        }
    }
}

/// Values bound to the symbols of an expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Env<S> {
    syms: [Option<S>; 11],
    ints: [Option<i64>; 6],
}

impl<S: Field> Default for Env<S> {
    fn default() -> Self {
        Env {
            syms: Default::default(),
            ints: [None; 6],
        }
    }
}

impl<S: Field> Env<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, s: Sym, v: S) -> &mut Self {
        self.syms[s.index()] = Some(v);
        self
    }

    pub fn with(mut self, s: Sym, v: S) -> Self {
        self.set(s, v);
        self
    }

    pub fn set_int(&mut self, s: IntSym, v: i64) -> &mut Self {
        self.ints[s.index()] = Some(v);
        self
    }

    pub fn with_int(mut self, s: IntSym, v: i64) -> Self {
        self.set_int(s, v);
        self
    }

    pub fn get(&self, s: Sym) -> Result<S> {
        self.syms[s.index()]
            .clone()
            .ok_or_else(|| Error::InvalidParams(format!("`{}` is not bound", s.name())))
    }

    pub fn get_opt(&self, s: Sym) -> Option<&S> {
        self.syms[s.index()].as_ref()
    }

    pub fn int(&self, s: IntSym) -> Result<i64> {
        self.ints[s.index()].ok_or_else(|| Error::InvalidParams(format!("`{}` is not bound", s.name())))
    }

    pub fn int_opt(&self, s: IntSym) -> Option<i64> {
        self.ints[s.index()]
    }

    pub fn k(&self, s: IntSym) -> Result<u32> {
        let v = self.int(s)?;
        u32::try_from(v).map_err(|_| Error::InvalidParams(format!("`{}` = {v} must be nonnegative", s.name())))
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> Env<T> {
        let mut out = Env::<T>::default();
        for s in Sym::ALL {
            if let Some(v) = self.get_opt(s) {
                out.set(s, f(v));
            }
        }
        out.ints = self.ints;
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntExpr {
    Const(i64),
    Var(IntSym),
    Add(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Neg(Box<IntExpr>),
}

impl IntExpr {
    pub fn eval<S: Field>(&self, env: &Env<S>) -> Result<i64> {
        Ok(match self {
            IntExpr::Const(v) => *v,
            IntExpr::Var(s) => env.int(*s)?,
            IntExpr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            IntExpr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            IntExpr::Neg(a) => -a.eval(env)?,
        })
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, IntExpr::Const(0))
    }
}

impl From<i64> for IntExpr {
    fn from(v: i64) -> Self {
        IntExpr::Const(v)
    }
}

impl From<IntSym> for IntExpr {
    fn from(v: IntSym) -> Self {
        IntExpr::Var(v)
    }
}

impl Add for IntExpr {
    type Output = IntExpr;
    fn add(self, rhs: IntExpr) -> IntExpr {
        IntExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for IntExpr {
    type Output = IntExpr;
    fn sub(self, rhs: IntExpr) -> IntExpr {
        IntExpr::Add(Box::new(self), Box::new(IntExpr::Neg(Box::new(rhs))))
    }
}

impl Mul for IntExpr {
    type Output = IntExpr;
    fn mul(self, rhs: IntExpr) -> IntExpr {
        IntExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Neg for IntExpr {
    type Output = IntExpr;
    fn neg(self) -> IntExpr {
        IntExpr::Neg(Box::new(self))
    }
}

pub fn iv(s: IntSym) -> IntExpr {
    IntExpr::Var(s)
}

pub fn ic(v: i64) -> IntExpr {
    IntExpr::Const(v)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Rat(i64, i64),
    Sym(Sym),
    IntVal(IntExpr),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Rising factorial `(e)_n`.
    Poch(Box<Expr>, IntExpr),
    /// Falling factorial `e (e-1) ... (e-n+1)`, i.e. `(-1)^n (-e)_n`.
    Falling(Box<Expr>, IntExpr),
    Pow(Box<Expr>, IntExpr),
    Binom(IntExpr, IntExpr),
    /// Principal complex power; float mode only.
    CPow(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval<S: Field>(&self, env: &Env<S>) -> Result<S> {
        Ok(match self {
            Expr::Int(v) => S::from_i64(*v),
            Expr::Rat(n, d) => S::from_ratio(*n, *d),
            Expr::Sym(s) => env.get(*s)?,
            Expr::IntVal(i) => S::from_i64(i.eval(env)?),
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => {
                let l = a.eval(env)?;
                if l.is_zero_value() {
                    return Ok(l);
                }
                l * b.eval(env)?
            }
            Expr::Div(a, b) => {
                let den = b.eval(env)?;
                if den.is_zero_value() {
                    return Err(Error::Validity(format!("division by zero in `{self}`")));
                }
                a.eval(env)? / den
            }
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Poch(a, n) => rising_factorial(&a.eval(env)?, count(n, env)?),
            Expr::Falling(a, n) => falling_factorial(&a.eval(env)?, count(n, env)?),
            Expr::Pow(a, n) => a.eval(env)?.powi(n.eval(env)?),
            Expr::Binom(r, s) => {
                let r = count(r, env)?;
                let s = count(s, env)?;
                let b = binomial(r, s);
                S::from_i64(i64::try_from(b).map_err(|_| Error::InvalidParams("binomial overflow".into()))?)
            }
            Expr::CPow(base, exp) => {
                let b = base.eval(env)?.to_scalar();
                let e = exp.eval(env)?.to_scalar();
                if S::is_exact() {
                    return Err(Error::NotExact(format!("complex power in `{self}`")));
                }
                let v: Scalar = if b.norm() == 0.0 { Scalar::new(0.0, 0.0) } else { (e * b.ln()).exp() };
                S::from_scalar(v).ok_or_else(|| Error::NotExact("complex power".into()))?
            }
        })
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self, Expr::Int(0))
    }
}

fn count<S: Field>(n: &IntExpr, env: &Env<S>) -> Result<u64> {
    let v = n.eval(env)?;
    u64::try_from(v).map_err(|_| Error::InvalidParams(format!("negative count {v}")))
}

pub fn s(sym: Sym) -> Expr {
    Expr::Sym(sym)
}

pub fn n(v: i64) -> Expr {
    Expr::Int(v)
}

pub fn ival(i: IntExpr) -> Expr {
    Expr::IntVal(i)
}

pub fn poch(a: Expr, len: IntExpr) -> Expr {
    Expr::Poch(Box::new(a), len)
}

pub fn falling(a: Expr, len: IntExpr) -> Expr {
    Expr::Falling(Box::new(a), len)
}

pub fn pow(a: Expr, e: IntExpr) -> Expr {
    Expr::Pow(Box::new(a), e)
}

pub fn cpow(a: Expr, e: Expr) -> Expr {
    Expr::CPow(Box::new(a), Box::new(e))
}

pub fn binom(r: IntExpr, s: IntExpr) -> Expr {
    Expr::Binom(r, s)
}

macro_rules! expr_binop {
    ($tr:ident, $f:ident, $variant:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Const(v) => write!(f, "{v}"),
            IntExpr::Var(s) => write!(f, "{}", s.name()),
            IntExpr::Add(a, b) => match b.as_ref() {
                IntExpr::Neg(inner) => write!(f, "({a} - {inner})"),
                _ => write!(f, "({a} + {b})"),
            },
            IntExpr::Mul(a, b) => write!(f, "{a}*{b}"),
            IntExpr::Neg(a) => write!(f, "-{a}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Rat(a, b) => write!(f, "{a}/{b}"),
            Expr::Sym(s) => write!(f, "{}", s.name()),
            Expr::IntVal(i) => write!(f, "{i}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Poch(a, n) => write!(f, "({a})_{n}"),
            Expr::Falling(a, n) => write!(f, "P({a}, {n})"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::Binom(r, s) => write!(f, "C({r}, {s})"),
            Expr::CPow(a, e) => write!(f, "{a}^({e})"),
        }
    }
}
