//! Gauss rules and the integral representations of both discrete forms.
//!
//! Nodes come from the symmetric tridiagonal eigen-solve and are then
//! polished by Newton steps on the orthogonal polynomial; weights use the
//! closed derivative formula, which keeps the tiny Laguerre weights accurate
//! far out on the half-line.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::catalog::{Case, CaseParams, Panel};
use crate::error::{Error, Result};
use crate::expr::Sym;
use crate::numerics::{complex_gamma, Field, Scalar};
use crate::operator::Residual;
use crate::series::{
    eval_1f0_disc, eval_f3_disc1, eval_f3_disc2, eval_kdf, KdFSpec, Params1, Params2, Point, TruncationPolicy,
};

pub const MAX_RULE: usize = 256;
pub const HALF_LINE_NODES: usize = 64;
pub const SIMPLEX_NODES: usize = 48;
pub const REP_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RuleKind {
    /// Weight `u^alpha e^{-u}` on `[0, inf)`.
    Laguerre { alpha: f64 },
    /// Weight `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
}

impl RuleKind {
    pub fn is_legendre(&self) -> bool {
        matches!(self, RuleKind::Jacobi { alpha, beta } if *alpha == 0.0 && *beta == 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T, F>(&self, f: F) -> T
    where
        T: std::iter::Sum<T>,
        F: Fn(f64) -> T,
        T: std::ops::Mul<f64, Output = T>,
    {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| f(*x) * *w).sum()
    }

    /// Maps a Jacobi rule to `[0, 1]` with weight `(1-s)^alpha s^beta`.
    pub fn to_unit_interval(&self) -> Result<QuadratureRule> {
        let RuleKind::Jacobi { alpha, beta } = self.kind else {
            return Err(Error::InvalidParams("only Jacobi rules live on [-1, 1]".into()));
        };
        let scale = 2f64.powf(-(alpha + beta + 1.0));
        Ok(QuadratureRule {
            nodes: self.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
            weights: self.weights.iter().map(|w| w * scale).collect(),
            kind: self.kind,
        })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_RULE {
        return Err(Error::InvalidParams(format!("rule size {n} outside 1..={MAX_RULE}")));
    }
    Ok(())
}

fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `L_n^alpha(x)` and `L_{n-1}^alpha(x)` as mantissas sharing the scale `exp(log_scale)`.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    let mut log_scale = 0.0;
    if n == 1 {
        return (cur, prev, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > 1e100 {
            cur /= big;
            prev /= big;
            log_scale += big.ln();
        }
    }
    (cur, prev, log_scale)
}

/// Generalized Gauss-Laguerre rule, weight `u^alpha e^{-u}`, `alpha > -1`.
pub fn gauss_generalized_laguerre(n: usize, alpha: f64) -> Result<QuadratureRule> {
    check_size(n)?;
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::InvalidParams(format!("Laguerre exponent {alpha} must exceed -1")));
    }
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|i| (i as f64 * (i as f64 + alpha)).sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off);
    let nf = n as f64;
    let mut log_w = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (ln, lm1, _) = laguerre_pair(n, alpha, *x);
            // x L_n' = n L_n - (n + alpha) L_{n-1}
            let deriv = (nf * ln - (nf + alpha) * lm1) / *x;
            if deriv == 0.0 {
                break;
            }
            let step = ln / deriv;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs() {
                break;
            }
        }
        let (_, lm1, log_scale) = laguerre_pair(n, alpha, *x);
        // w ~ x / L_{n-1}(x)^2, normalized below to the zeroth moment
        log_w.push(x.ln() - 2.0 * (lm1.abs().ln() + log_scale));
    }
    let weights = normalized(&log_w, gamma(alpha + 1.0));
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Laguerre { alpha },
    })
}

/// Weights proportional to `exp(log_w)` that sum to `moment`.
fn normalized(log_w: &[f64], moment: f64) -> Vec<f64> {
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total * moment).collect()
}

/// Gauss-Laguerre rule for the weight `e^{-u}`.
pub fn gauss_laguerre(n: usize) -> Result<QuadratureRule> {
    gauss_generalized_laguerre(n, 0.0)
}

/// `P_n^{(alpha,beta)}(x)` and `P_{n-1}^{(alpha,beta)}(x)`.
fn jacobi_pair(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss-Jacobi rule on `[-1, 1]`, weight `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    check_size(n)?;
    if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParams(format!("Jacobi exponents ({alpha}, {beta}) must exceed -1")));
    }
    let ab = alpha + beta;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            let kf = k as f64;
            let c = 2.0 * kf + ab;
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / (c * (c + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            let c = 2.0 * kf + ab;
            if k == 1 {
                return (4.0 * (1.0 + alpha) * (1.0 + beta) / (c * c * (c + 1.0))).sqrt();
            }
            (4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (c * c * (c + 1.0) * (c - 1.0))).sqrt()
        })
        .collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off);
    let nf = n as f64;
    let c = 2.0 * nf + ab;
    // At a root: (1 - x^2) P_n' = 2 (n+alpha)(n+beta) P_{n-1} / (2n + alpha + beta).
    let deriv = |x: f64, pm1: f64, pn: f64| -> f64 {
        (nf * ((alpha - beta) - c * x) * pn + 2.0 * (nf + alpha) * (nf + beta) * pm1) / (c * (1.0 - x * x))
    };
    let mut log_w = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (pn, pm1) = jacobi_pair(n, alpha, beta, *x);
            let d = deriv(*x, pm1, pn);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = pn / d;
            *x -= step;
            if step.abs() <= 1e-17 {
                break;
            }
        }
        let (pn, pm1) = jacobi_pair(n, alpha, beta, *x);
        let d = deriv(*x, pm1, pn);
        log_w.push(-(1.0 - *x * *x).ln() - 2.0 * d.abs().ln());
    }
    let moment = 2f64.powf(ab + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(ab + 2.0);
    let weights = normalized(&log_w, moment);
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Jacobi { alpha, beta },
    })
}

pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Parameter record for either discrete form.
#[derive(Clone, Debug, PartialEq)]
pub enum RepParams {
    First(Params1),
    Second(Params2),
}

impl RepParams {
    fn get(&self, sym: Sym) -> Result<Scalar> {
        let v = match (self, sym) {
            (RepParams::First(p), Sym::A1) => p.a1,
            (RepParams::First(p), Sym::A2) => p.a2,
            (RepParams::First(p), Sym::B1) => p.b1,
            (RepParams::First(p), Sym::B2) => p.b2,
            (RepParams::First(p), Sym::C) => p.c,
            (RepParams::First(p), Sym::T1) => p.t1,
            (RepParams::First(p), Sym::T2) => p.t2,
            (RepParams::Second(p), Sym::A1) => p.a1,
            (RepParams::Second(p), Sym::A2) => p.a2,
            (RepParams::Second(p), Sym::B1) => p.b1,
            (RepParams::Second(p), Sym::B2) => p.b2,
            (RepParams::Second(p), Sym::C) => p.c,
            (RepParams::Second(p), Sym::T) => p.t,
            _ => return Err(Error::InvalidParams(format!("no parameter {} here", sym.name()))),
        };
        Ok(v)
    }

    fn second_form(&self) -> bool {
        matches!(self, RepParams::Second(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `u, v >= 0, u + v <= 1` with weight `u^{b1-1} v^{b2-1} (1-u-v)^{c-b1-b2-1}`.
    Simplex,
    /// `[0, inf)` with weight `e^{-u} u^{p-1}`; `p` is an upper parameter.
    HalfLine(Sym),
    /// `[0, inf)` with weight `e^{-u} u^{-t-1}`.
    HalfLineNegT(Sym),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralRep {
    pub rep_id: &'static str,
    pub second_form: bool,
    pub domain: Domain,
    pub formula: &'static str,
}

pub fn integral_reps() -> Vec<IntegralRep> {
    let rep = |rep_id, second_form, domain, formula| IntegralRep {
        rep_id,
        second_form,
        domain,
        formula,
    };
    vec![
        rep(
            "INT1-1",
            false,
            Domain::Simplex,
            "Gamma(c)/(Gamma(b1)Gamma(b2)Gamma(c-b1-b2)) iint u^(b1-1) v^(b2-1) (1-u-v)^(c-b1-b2-1) 1F0(a1;t1,k1,ux) 1F0(a2;t2,k2,vy)",
        ),
        rep("INT1-2", false, Domain::HalfLine(Sym::A1), "1/Gamma(a1) int e^-u u^(a1-1) KdF[b1, t1/k1 list; a2, b2, t2/k2 list; c]((-k1)^k1 u x, (-k2)^k2 y)"),
        rep("INT1-3", false, Domain::HalfLine(Sym::A2), "1/Gamma(a2) int e^-v v^(a2-1) KdF[a1, b1, t1/k1 list; b2, t2/k2 list; c]((-k1)^k1 x, (-k2)^k2 v y)"),
        rep("INT1-4", false, Domain::HalfLine(Sym::B1), "1/Gamma(b1) int e^-u u^(b1-1) KdF[a1, t1/k1 list; a2, b2, t2/k2 list; c]((-k1)^k1 u x, (-k2)^k2 y)"),
        rep("INT1-5", false, Domain::HalfLine(Sym::B2), "1/Gamma(b2) int e^-v v^(b2-1) KdF[a1, b1, t1/k1 list; a2, t2/k2 list; c]((-k1)^k1 x, (-k2)^k2 v y)"),
        rep("INT1-6", false, Domain::HalfLineNegT(Sym::T1), "1/Gamma(-t1) int e^-u u^(-t1-1) KdF[a1, b1; a2, b2, t2/k2 list; c]((-u)^k1 x, (-k2)^k2 y)"),
        rep("INT1-7", false, Domain::HalfLineNegT(Sym::T2), "1/Gamma(-t2) int e^-v v^(-t2-1) KdF[a1, b1, t1/k1 list; a2, b2; c]((-k1)^k1 x, (-v)^k2 y)"),
        rep(
            "INT2-1",
            true,
            Domain::Simplex,
            "Gamma(c)/(Gamma(b1)Gamma(b2)Gamma(c-b1-b2)) iint u^(b1-1) v^(b2-1) (1-u-v)^(c-b1-b2-1) KdF[t/k list: a1; a2]((-k)^k u x, (-k)^k v y)",
        ),
        rep("INT2-2", true, Domain::HalfLine(Sym::A1), "1/Gamma(a1) int e^-u u^(a1-1) KdF[t/k list: b1; a2, b2; c]((-k)^k u x, (-k)^k y)"),
        rep("INT2-3", true, Domain::HalfLine(Sym::A2), "1/Gamma(a2) int e^-v v^(a2-1) KdF[t/k list: a1, b1; b2; c]((-k)^k x, (-k)^k v y)"),
        rep("INT2-4", true, Domain::HalfLine(Sym::B1), "1/Gamma(b1) int e^-u u^(b1-1) KdF[t/k list: a1; a2, b2; c]((-k)^k u x, (-k)^k y)"),
        rep("INT2-5", true, Domain::HalfLine(Sym::B2), "1/Gamma(b2) int e^-v v^(b2-1) KdF[t/k list: a1, b1; a2; c]((-k)^k x, (-k)^k v y)"),
    ]
}

pub fn find_rep(id: &str) -> Result<IntegralRep> {
    integral_reps()
        .into_iter()
        .find(|r| r.rep_id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// `(-t)/k, (-t+1)/k, ..., (-t+k-1)/k`.
fn t_list(t: Scalar, k: u32) -> Vec<Scalar> {
    (0..k).map(|j| (-t + j as f64) / k as f64).collect()
}

/// `(-k)^k`, with `0^0 = 1`.
fn k_factor(k: u32) -> Scalar {
    Scalar::new((-(k as f64)).powi(k as i32), 0.0)
}

fn real_exponent(v: Scalar, what: &str) -> Result<f64> {
    if v.im != 0.0 {
        return Err(Error::Validity(format!("{what} = {v} is not real; the Gauss rules need a real exponent")));
    }
    if !(v.re > 0.0) {
        return Err(Error::Validity(format!("Re({what}) = {} must be positive", v.re)));
    }
    Ok(v.re)
}

/// Inner Kampe de Feriet spec and arguments after integrating out `weight`
/// at node `u`.
fn half_line_inner(p: &RepParams, pt: &Point, domain: Domain, u: f64) -> Result<(KdFSpec, Point)> {
    let us = Scalar::new(u, 0.0);
    match p {
        RepParams::First(q) => {
            let mut row = vec![(Sym::A1, q.a1), (Sym::B1, q.b1)];
            let mut col = vec![(Sym::A2, q.a2), (Sym::B2, q.b2)];
            let mut x = pt.x * k_factor(q.k1);
            let mut y = pt.y * k_factor(q.k2);
            let mut row_t = t_list(q.t1, q.k1);
            let mut col_t = t_list(q.t2, q.k2);
            match domain {
                Domain::HalfLine(s @ (Sym::A1 | Sym::B1)) => {
                    row.retain(|(n, _)| *n != s);
                    x *= us;
                }
                Domain::HalfLine(s @ (Sym::A2 | Sym::B2)) => {
                    col.retain(|(n, _)| *n != s);
                    y *= us;
                }
                Domain::HalfLineNegT(Sym::T1) => {
                    row_t.clear();
                    x = pt.x * Scalar::new((-u).powi(q.k1 as i32), 0.0);
                }
                Domain::HalfLineNegT(Sym::T2) => {
                    col_t.clear();
                    y = pt.y * Scalar::new((-u).powi(q.k2 as i32), 0.0);
                }
                other => return Err(Error::InvalidParams(format!("{other:?} is not a first-form half-line weight"))),
            }
            let b: Vec<Scalar> = row.into_iter().map(|(_, v)| v).chain(row_t).collect();
            let c: Vec<Scalar> = col.into_iter().map(|(_, v)| v).chain(col_t).collect();
            let spec = KdFSpec {
                a: vec![],
                b,
                c,
                d: vec![q.c],
                e: vec![],
                f: vec![],
            };
            Ok((spec, Point::new(x, y)))
        }
        RepParams::Second(q) => {
            let mut row = vec![(Sym::A1, q.a1), (Sym::B1, q.b1)];
            let mut col = vec![(Sym::A2, q.a2), (Sym::B2, q.b2)];
            let kf = k_factor(q.k);
            let mut x = pt.x * kf;
            let mut y = pt.y * kf;
            match domain {
                Domain::HalfLine(s @ (Sym::A1 | Sym::B1)) => {
                    row.retain(|(n, _)| *n != s);
                    x *= us;
                }
                Domain::HalfLine(s @ (Sym::A2 | Sym::B2)) => {
                    col.retain(|(n, _)| *n != s);
                    y *= us;
                }
                other => return Err(Error::InvalidParams(format!("{other:?} is not a second-form half-line weight"))),
            }
            let spec = KdFSpec {
                a: t_list(q.t, q.k),
                b: row.into_iter().map(|(_, v)| v).collect(),
                c: col.into_iter().map(|(_, v)| v).collect(),
                d: vec![q.c],
                e: vec![],
                f: vec![],
            };
            Ok((spec, Point::new(x, y)))
        }
    }
}

fn simplex_inner(p: &RepParams, pt: &Point, u: f64, v: f64, pol: &TruncationPolicy) -> Result<Scalar> {
    let us = Scalar::new(u, 0.0);
    let vs = Scalar::new(v, 0.0);
    match p {
        RepParams::First(q) => {
            let fx = eval_1f0_disc(&q.a1, &q.t1, q.k1, &(us * pt.x), pol)?.value;
            let fy = eval_1f0_disc(&q.a2, &q.t2, q.k2, &(vs * pt.y), pol)?.value;
            Ok(fx * fy)
        }
        RepParams::Second(q) => {
            let kf = k_factor(q.k);
            let spec = KdFSpec {
                a: t_list(q.t, q.k),
                b: vec![q.a1],
                c: vec![q.a2],
                d: vec![],
                e: vec![],
                f: vec![],
            };
            Ok(eval_kdf(&spec, &Point::new(kf * us * pt.x, kf * vs * pt.y), pol)?.value)
        }
    }
}

fn check_point(pt: &Point) -> Result<()> {
    if pt.x.norm() >= 1.0 || pt.y.norm() >= 1.0 {
        return Err(Error::Validity("integral forms need |x| < 1 and |y| < 1".into()));
    }
    Ok(())
}

fn simplex_rules(p: &RepParams, size: usize) -> Result<(QuadratureRule, QuadratureRule)> {
    let b1 = real_exponent(p.get(Sym::B1)?, "b1")?;
    let b2 = real_exponent(p.get(Sym::B2)?, "b2")?;
    let g = real_exponent(p.get(Sym::C)? - p.get(Sym::B1)? - p.get(Sym::B2)?, "c - b1 - b2")?;
    // u = s (1 - w), v = s w: weight s^{b1+b2-1} (1-s)^{g-1} ds times (1-w)^{b1-1} w^{b2-1} dw.
    let s_rule = gauss_jacobi(size, g - 1.0, b1 + b2 - 1.0)?.to_unit_interval()?;
    let w_rule = gauss_jacobi(size, b1 - 1.0, b2 - 1.0)?.to_unit_interval()?;
    Ok((s_rule, w_rule))
}

/// Quadrature value of `rep` at `(p, pt)`; `rule_size` nodes per axis.
pub fn eval_integral_rep(
    rep: &IntegralRep,
    p: &RepParams,
    pt: &Point,
    rule_size: usize,
    pol: &TruncationPolicy,
) -> Result<Scalar> {
    if rep.second_form != p.second_form() {
        return Err(Error::InvalidParams(format!("{} needs the other parameter form", rep.rep_id)));
    }
    check_point(pt)?;
    match rep.domain {
        Domain::Simplex => {
            let (s_rule, w_rule) = simplex_rules(p, rule_size)?;
            let b1 = p.get(Sym::B1)?;
            let b2 = p.get(Sym::B2)?;
            let c = p.get(Sym::C)?;
            let pre = complex_gamma(c)? / (complex_gamma(b1)? * complex_gamma(b2)? * complex_gamma(c - b1 - b2)?);
            let rows: Vec<Result<Scalar>> = s_rule
                .nodes
                .par_iter()
                .zip(&s_rule.weights)
                .map(|(s, ws)| {
                    let mut acc = Scalar::new(0.0, 0.0);
                    for (w, ww) in w_rule.nodes.iter().zip(&w_rule.weights) {
                        acc += simplex_inner(p, pt, s * (1.0 - w), s * w, pol)? * *ww;
                    }
                    Ok(acc * *ws)
                })
                .collect();
            let mut total = Scalar::new(0.0, 0.0);
            for r in rows {
                total += r?;
            }
            Ok(pre * total)
        }
        Domain::HalfLine(sym) | Domain::HalfLineNegT(sym) => {
            let exponent = match rep.domain {
                Domain::HalfLine(_) => p.get(sym)?,
                _ => -p.get(sym)?,
            };
            let what = match rep.domain {
                Domain::HalfLine(_) => sym.name().to_string(),
                _ => format!("-{}", sym.name()),
            };
            let e = real_exponent(exponent, &what)?;
            let rule = gauss_generalized_laguerre(rule_size, e - 1.0)?;
            let mut total = Scalar::new(0.0, 0.0);
            for (u, w) in rule.nodes.iter().zip(&rule.weights) {
                let (spec, ipt) = half_line_inner(p, pt, rep.domain, *u)?;
                total += eval_kdf(&spec, &ipt, pol)?.value * *w;
            }
            Ok(total / complex_gamma(exponent)?)
        }
    }
}

pub fn series_reference(p: &RepParams, pt: &Point, pol: &TruncationPolicy) -> Result<Scalar> {
    Ok(match p {
        RepParams::First(q) => eval_f3_disc1(q, pt, pol)?.value,
        RepParams::Second(q) => eval_f3_disc2(q, pt, pol)?.value,
    })
}

/// Relative difference between quadrature and series values.
pub fn integral_vs_series(
    rep: &IntegralRep,
    p: &RepParams,
    pt: &Point,
    rule_size: usize,
    pol: &TruncationPolicy,
) -> Result<Residual> {
    let quad = eval_integral_rep(rep, p, pt, rule_size, pol)?;
    let series = series_reference(p, pt, pol)?;
    Ok(Residual::between(quad, series))
}

pub fn default_rule_size(rep: &IntegralRep) -> usize {
    match rep.domain {
        Domain::Simplex => SIMPLEX_NODES,
        _ => HALF_LINE_NODES,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum RepStatus {
    Pass,
    Fail,
    /// The case violates a constraint of the representation.
    Skipped(String),
    /// The series reference itself does not converge.
    Unverifiable(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepCaseResult {
    pub rep_id: &'static str,
    pub case: usize,
    pub rel: Option<f64>,
    pub status: RepStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepSweep {
    pub results: Vec<RepCaseResult>,
}

impl RepSweep {
    pub fn count(&self, rep_id: &str, pred: impl Fn(&RepStatus) -> bool) -> usize {
        self.results.iter().filter(|r| r.rep_id == rep_id && pred(&r.status)).count()
    }

    pub fn all_pass(&self) -> bool {
        !self.results.iter().any(|r| r.status == RepStatus::Fail)
    }
}

fn classify(rep: &IntegralRep, p: &RepParams, pt: &Point, pol: &TruncationPolicy) -> (Option<f64>, RepStatus) {
    let series = match series_reference(p, pt, pol) {
        Ok(v) => v,
        Err(e @ Error::Divergence { .. }) => return (None, RepStatus::Unverifiable(e.to_string())),
        Err(e) => return (None, RepStatus::Skipped(e.to_string())),
    };
    match eval_integral_rep(rep, p, pt, default_rule_size(rep), pol) {
        Ok(q) => {
            let r = Residual::between(q, series);
            let status = if r.rel <= REP_TOL { RepStatus::Pass } else { RepStatus::Fail };
            (Some(r.rel), status)
        }
        Err(e @ Error::Validity(_)) => (None, RepStatus::Skipped(e.to_string())),
        Err(e @ Error::Divergence { .. }) => (None, RepStatus::Unverifiable(e.to_string())),
        Err(e) => (None, RepStatus::Skipped(e.to_string())),
    }
}

/// Runs every representation of the matching form over `cases`.
pub fn sweep(reps: &[IntegralRep], cases: &[(RepParams, Point)], pol: &TruncationPolicy) -> RepSweep {
    let jobs: Vec<(&IntegralRep, usize)> = reps
        .iter()
        .flat_map(|r| {
            cases
                .iter()
                .enumerate()
                .filter(|(_, (p, _))| p.second_form() == r.second_form)
                .map(move |(i, _)| (r, i))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|(rep, i)| {
            let (p, pt) = &cases[*i];
            let (rel, status) = classify(rep, p, pt, pol);
            RepCaseResult {
                rep_id: rep.rep_id,
                case: *i,
                rel,
                status,
            }
        })
        .collect();
    RepSweep { results }
}

/// Float copy of a panel case.
pub fn from_case(case: &Case) -> (RepParams, Point) {
    let f = |q: &crate::numerics::ExactScalar| Scalar::from_exact(q);
    let params = match &case.params {
        CaseParams::First(p) => RepParams::First(Params1 {
            a1: f(&p.a1),
            a2: f(&p.a2),
            b1: f(&p.b1),
            b2: f(&p.b2),
            c: f(&p.c),
            t1: f(&p.t1),
            t2: f(&p.t2),
            k1: p.k1,
            k2: p.k2,
        }),
        CaseParams::Second(p) => RepParams::Second(Params2 {
            a1: f(&p.a1),
            a2: f(&p.a2),
            b1: f(&p.b1),
            b2: f(&p.b2),
            c: f(&p.c),
            t: f(&p.t),
            k: p.k,
        }),
    };
    (params, Point::new(f(&case.point.x), f(&case.point.y)))
}

/// Terminating cases of `panel`, the regime the representations are checked in.
pub fn terminating_cases(panel: &Panel) -> Vec<(RepParams, Point)> {
    panel.cases.iter().filter(|c| c.is_terminating()).map(from_case).collect()
}

fn r(v: f64) -> Scalar {
    Scalar::new(v, 0.0)
}

/// Non-integer negative `t` cases for the `u^{-t-1}` representations.  With
/// `k = 0` the reference converges; with `k = 1` it diverges and the case is
/// reported as unverifiable.
pub fn negative_t_panel() -> Vec<(RepParams, Point)> {
    let mut out = Vec::new();
    let pts = [(0.3, -0.3), (0.5, 0.2), (-0.3, 0.5)];
    for t in [-1.5, -7.0 / 3.0] {
        for k in [0u32, 1] {
            for (x, y) in pts {
                let base = Params1 {
                    a1: r(7.0 / 3.0),
                    a2: r(5.0 / 4.0),
                    b1: r(2.0 / 5.0),
                    b2: r(9.0 / 7.0),
                    c: r(13.0 / 6.0),
                    t1: r(t),
                    t2: r(3.0),
                    k1: k,
                    k2: 1,
                };
                out.push((RepParams::First(base.clone()), Point::new(r(x), r(y))));
                let swapped = Params1 {
                    t1: r(3.0),
                    t2: r(t),
                    k1: 1,
                    k2: k,
                    ..base
                };
                out.push((RepParams::First(swapped), Point::new(r(x), r(y))));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn laguerre_small_closed_forms() {
        let r1 = gauss_laguerre(1).unwrap();
        assert!(close(r1.nodes[0], 1.0, 1e-15) && close(r1.weights[0], 1.0, 1e-15));
        let r2 = gauss_laguerre(2).unwrap();
        let s = 2f64.sqrt();
        assert!(close(r2.nodes[0], 2.0 - s, 1e-15) && close(r2.nodes[1], 2.0 + s, 1e-15));
        assert!(close(r2.weights[0], (2.0 + s) / 4.0, 1e-15) && close(r2.weights[1], (2.0 - s) / 4.0, 1e-15));
    }

    #[test]
    fn legendre_small_closed_forms() {
        let r1 = gauss_legendre(1).unwrap();
        assert!(r1.nodes[0].abs() < 1e-16 && close(r1.weights[0], 2.0, 1e-15));
        let r2 = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!(close(r2.nodes[0], -x, 1e-15) && close(r2.nodes[1], x, 1e-15));
        assert!(close(r2.weights[0], 1.0, 1e-15) && close(r2.weights[1], 1.0, 1e-15));
    }

    #[test]
    fn weights_sum_to_moment() {
        for n in [3, 17, 64, 200, 256] {
            let l: f64 = gauss_laguerre(n).unwrap().weights.iter().sum();
            assert!(close(l, 1.0, 1e-13), "{n}: {l}");
            let g: f64 = gauss_legendre(n).unwrap().weights.iter().sum();
            assert!(close(g, 2.0, 1e-13), "{n}: {g}");
        }
    }

    fn worst_monomial_error(rule: &QuadratureRule, exact: impl Fn(i32) -> f64) -> f64 {
        let n = rule.len() as i32;
        (0..2 * n)
            .map(|d| {
                let got: f64 = rule.integrate(|x| x.powi(d));
                let scale: f64 = rule.integrate(|x| x.powi(d).abs());
                (got - exact(d)).abs() / scale
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn monomials_up_to_2n_minus_1() {
        let fact = |d: i32| (1..=d).map(f64::from).product::<f64>();
        for n in [1, 2, 5, 16, 33, 64] {
            let lag = worst_monomial_error(&gauss_laguerre(n).unwrap(), fact);
            let leg = worst_monomial_error(&gauss_legendre(n).unwrap(), |d| {
                if d % 2 == 1 { 0.0 } else { 2.0 / f64::from(d + 1) }
            });
            assert!(lag <= 1e-12 && leg <= 1e-12, "n={n}: laguerre {lag:e}, legendre {leg:e}");
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(gauss_laguerre(0).is_err());
        assert!(gauss_legendre(257).is_err());
        assert!(gauss_generalized_laguerre(4, -1.0).is_err());
    }

    #[test]
    fn rep_ids_are_unique() {
        let reps = integral_reps();
        assert_eq!(reps.len(), 12);
        let mut ids: Vec<_> = reps.iter().map(|r| r.rep_id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 12);
    }

    #[test]
    fn simplex_normalization_gives_one_at_origin() {
        let p = RepParams::First(Params1 {
            a1: r(1.0),
            a2: r(1.0),
            b1: r(0.4),
            b2: r(1.3),
            c: r(3.5),
            t1: r(2.0),
            t2: r(2.0),
            k1: 1,
            k2: 1,
        });
        let v = eval_integral_rep(&find_rep("INT1-1").unwrap(), &p, &Point::new(r(0.0), r(0.0)), 48, &TruncationPolicy::default())
            .unwrap();
        assert!((v - r(1.0)).norm() < 1e-13, "{v}");
    }

    #[test]
    fn complex_exponent_is_a_validity_error() {
        let p = RepParams::First(Params1 {
            a1: Scalar::new(1.0, 0.5),
            a2: r(1.0),
            b1: r(1.0),
            b2: r(1.0),
            c: r(3.5),
            t1: r(2.0),
            t2: r(2.0),
            k1: 1,
            k2: 1,
        });
        let err = eval_integral_rep(&find_rep("INT1-2").unwrap(), &p, &Point::new(r(0.1), r(0.1)), 16, &TruncationPolicy::default())
            .unwrap_err();
        assert!(matches!(err, Error::Validity(_)));
    }
}
