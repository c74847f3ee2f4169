//! Parser for the compact relation notation used by the contiguous and
//! recursion lists, e.g. `a1 (b1 + th) F[a1+1] - b1 (a1 + th) F[b1+1] = 0`.
//!
//! A side is a signed sum of terms; a term is a product of integers,
//! parameters and parenthesized affine groups, ending in `F` or `F[p+1]`.
//! Groups that contain `th`, `ph`, `T1`, `T2` or `T` become operator
//! factors, the rest fold into the scalar coefficient.

use crate::error::{Error, Result};
use crate::expr::{ic, n, Expr, Sym};
use crate::operator::{AffineFactor, Family, FactorSpec, Op, OperatorExpr, ParamShift};

use super::Term;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Plus,
    Minus,
    Eq,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | ',' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '[' => {
                out.push(Tok::LBrack);
                i += 1
            }
            ']' => {
                out.push(Tok::RBrack);
                i += 1
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("bad integer `{text}`")))?));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{src}`"))),
        }
    }
    Ok(out)
}

fn op_named(name: &str) -> Option<Op> {
    match name {
        "th" => Some(Op::Theta),
        "ph" => Some(Op::Phi),
        "T1" => Some(Op::BigTheta1),
        "T2" => Some(Op::BigTheta2),
        "T" => Some(Op::BigTheta),
        _ => None,
    }
}

fn param_named(name: &str) -> Result<Sym> {
    match Sym::from_name(name) {
        Some(s) if !matches!(s, Sym::X | Sym::Y | Sym::Z) => Ok(s),
        _ => Err(Error::Parse(format!("unknown parameter `{name}`"))),
    }
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    family: &'a Family,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            got => Err(Error::Parse(format!("expected {want:?}, found {got:?}"))),
        }
    }

    fn side(&mut self) -> Result<Vec<Term>> {
        if self.peek() == Some(&Tok::Num(0)) && matches!(self.toks.get(self.pos + 1), None | Some(Tok::Eq)) {
            self.pos += 1;
            return Ok(vec![]);
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negative = true;
        }
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    negative = false;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let mut scalar: Option<Expr> = if negative { Some(n(-1)) } else { None };
        let mut factors = Vec::new();
        let mul = |scalar: &mut Option<Expr>, e: Expr| {
            *scalar = Some(match scalar.take() {
                None => e,
                Some(prev) => prev * e,
            });
        };
        loop {
            match self.next() {
                Some(Tok::Num(v)) => mul(&mut scalar, n(v)),
                Some(Tok::LParen) => {
                    let group = self.affine()?;
                    self.expect(Tok::RParen)?;
                    if group.ops.is_empty() {
                        mul(&mut scalar, group.constant);
                    } else {
                        factors.push(FactorSpec::Single(group));
                    }
                }
                Some(Tok::Ident(name)) if name == "F" => {
                    let shift = self.shift()?;
                    let mut expr = OperatorExpr::plain(self.family.clone()).with_shift(shift);
                    expr.scalar = scalar.unwrap_or(n(1));
                    expr.factors = factors;
                    return Ok(Term { sum: None, expr });
                }
                Some(Tok::Ident(name)) => {
                    if op_named(&name).is_some() {
                        return Err(Error::Parse(format!("bare operator `{name}` outside a group")));
                    }
                    mul(&mut scalar, Expr::Sym(param_named(&name)?));
                }
                got => return Err(Error::Parse(format!("unexpected {got:?} inside a term"))),
            }
        }
    }

    fn shift(&mut self) -> Result<ParamShift> {
        if self.peek() != Some(&Tok::LBrack) {
            return Ok(ParamShift::none());
        }
        self.pos += 1;
        let sym = match self.next() {
            Some(Tok::Ident(name)) => param_named(&name)?,
            got => return Err(Error::Parse(format!("expected a parameter in shift, found {got:?}"))),
        };
        let sign = match self.next() {
            Some(Tok::Plus) => 1,
            Some(Tok::Minus) => -1,
            got => return Err(Error::Parse(format!("expected a sign in shift, found {got:?}"))),
        };
        let amount = match self.next() {
            Some(Tok::Num(v)) => v,
            got => return Err(Error::Parse(format!("expected an integer in shift, found {got:?}"))),
        };
        self.expect(Tok::RBrack)?;
        Ok(ParamShift::by(vec![(sym, ic(sign * amount))]))
    }

    fn affine(&mut self) -> Result<AffineFactor> {
        let mut constant: Option<Expr> = None;
        let mut ops = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negative = true;
        }
        loop {
            let atom = match self.next() {
                Some(Tok::Num(v)) => Err(n(v)),
                Some(Tok::Ident(name)) => match op_named(&name) {
                    Some(op) => Ok(op),
                    None => Err(Expr::Sym(param_named(&name)?)),
                },
                got => return Err(Error::Parse(format!("unexpected {got:?} inside a group"))),
            };
            match atom {
                Ok(op) => ops.push((n(if negative { -1 } else { 1 }), op)),
                Err(e) => {
                    constant = Some(match (constant.take(), negative) {
                        (None, false) => e,
                        (None, true) => -e,
                        (Some(prev), false) => prev + e,
                        (Some(prev), true) => prev - e,
                    })
                }
            }
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    negative = false;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(AffineFactor::new(constant.unwrap_or(n(0)), ops))
    }
}

/// Parses `lhs = rhs` into two term lists over `family`.
pub fn parse_relation(src: &str, family: &Family) -> Result<(Vec<Term>, Vec<Term>)> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        family,
    };
    let lhs = p.side()?;
    p.expect(Tok::Eq)?;
    let rhs = p.side()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input in `{src}`")));
    }
    if lhs.is_empty() && rhs.is_empty() {
        return Err(Error::Parse(format!("both sides empty in `{src}`")));
    }
    Ok((lhs, rhs))
}
