//! Operators acting on the discrete F3 functions.
//!
//! An [`OperatorExpr`] is applied in two independent ways: as a weight
//! polynomial on the lattice indices (exact, used for identity checks) and
//! by literally shifting `t` and differentiating in `x`, `y` (float only,
//! used to validate the weight path).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::expr::{Env, Expr, IntExpr, IntSym, Sym};
use crate::numerics::{binomial, Field, Scalar};
use crate::series::{
    term_f3_disc1, term_f3_disc2, Evaluation, KdFSpec, Lattice, Params1, Params2, Point, TruncationPolicy, XiParams,
    XiVariant,
};

pub const MAX_WEIGHT_DEGREE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// `x d/dx`
    Theta,
    /// `y d/dy`
    Phi,
    /// `Theta_{t1} / k1`
    BigTheta1,
    /// `Theta_{t2} / k2`
    BigTheta2,
    /// `Theta_t / k`
    BigTheta,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Theta => "th",
            Op::Phi => "ph",
            Op::BigTheta1 => "T1",
            Op::BigTheta2 => "T2",
            Op::BigTheta => "T",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TSel {
    T1,
    T2,
    T,
}

impl TSel {
    pub fn sym(self) -> Sym {
        match self {
            TSel::T1 => Sym::T1,
            TSel::T2 => Sym::T2,
            TSel::T => Sym::T,
        }
    }

    pub fn k(self) -> IntSym {
        match self {
            TSel::T1 => IntSym::K1,
            TSel::T2 => IntSym::K2,
            TSel::T => IntSym::K,
        }
    }
}

/// `constant + sum coef * op`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFactor {
    pub constant: Expr,
    pub ops: Vec<(Expr, Op)>,
}

impl AffineFactor {
    pub fn new(constant: Expr, ops: Vec<(Expr, Op)>) -> Self {
        AffineFactor { constant, ops }
    }

    pub fn op(op: Op) -> Self {
        AffineFactor::new(Expr::Int(0), vec![(Expr::Int(1), op)])
    }

    /// `constant + op1 + op2 + ...` with unit coefficients.
    pub fn plus(constant: Expr, ops: &[Op]) -> Self {
        AffineFactor::new(constant, ops.iter().map(|o| (Expr::Int(1), *o)).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FactorSpec {
    Single(AffineFactor),
    /// `prod_{j<len} (base + j)`
    Rising { base: AffineFactor, len: IntExpr },
    /// `prod_{j<len} (base - j)`
    Falling { base: AffineFactor, len: IntExpr },
    /// `base^len`
    Power { base: AffineFactor, len: IntExpr },
}

/// Integer offsets on parameters plus optional `k` overrides.
///
/// Offsets on `t1`, `t2`, `t` are how `rho_t^k` is realized.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamShift {
    pub offsets: Vec<(Sym, IntExpr)>,
    pub k_override: Vec<(IntSym, u32)>,
}

impl ParamShift {
    pub fn none() -> Self {
        ParamShift::default()
    }

    pub fn by(offsets: Vec<(Sym, IntExpr)>) -> Self {
        ParamShift {
            offsets,
            k_override: vec![],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.offsets.iter().all(|(_, o)| o.is_zero_const()) && self.k_override.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointMap {
    pub x: Expr,
    pub y: Expr,
}

impl Default for PointMap {
    fn default() -> Self {
        PointMap {
            x: Expr::Sym(Sym::X),
            y: Expr::Sym(Sym::Y),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ListItem {
    E(Expr),
    /// `(-t+i)/k` for `i = 0..k`.
    TList(Sym, IntSym),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KdfTemplate {
    pub a: Vec<ListItem>,
    pub b: Vec<ListItem>,
    pub c: Vec<ListItem>,
    pub d: Vec<ListItem>,
    pub e: Vec<ListItem>,
    pub f: Vec<ListItem>,
}

impl KdfTemplate {
    pub fn resolve<S: Field>(&self, env: &Env<S>) -> Result<KdFSpec<S>> {
        let expand = |items: &[ListItem]| -> Result<Vec<S>> {
            let mut out = Vec::new();
            for item in items {
                match item {
                    ListItem::E(e) => out.push(e.eval(env)?),
                    ListItem::TList(t, k) => {
                        let t = env.get(*t)?;
                        let k = env.k(*k)?;
                        let kk = S::from_i64(k as i64);
                        for i in 0..k {
                            out.push((S::from_i64(i as i64) - t.clone()) / kk.clone());
                        }
                    }
                }
            }
            Ok(out)
        };
        Ok(KdFSpec {
            a: expand(&self.a)?,
            b: expand(&self.b)?,
            c: expand(&self.c)?,
            d: expand(&self.d)?,
            e: expand(&self.e)?,
            f: expand(&self.f)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Disc1,
    Disc2,
    Classical,
    Xi(XiVariant),
    Kdf(KdfTemplate),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Disc1 => "f3d1",
            Family::Disc2 => "f3d2",
            Family::Classical => "f3",
            Family::Xi(v) => v.name(),
            Family::Kdf(_) => "kdf",
        }
    }

    fn first_form(&self) -> bool {
        matches!(self, Family::Disc1 | Family::Xi(XiVariant::Xi11 | XiVariant::Xi21))
    }

    fn second_form(&self) -> bool {
        matches!(self, Family::Disc2 | Family::Xi(XiVariant::Xi12 | XiVariant::Xi22))
    }

    pub fn params1<S: Field>(env: &Env<S>) -> Result<Params1<S>> {
        Ok(Params1 {
            a1: env.get(Sym::A1)?,
            a2: env.get(Sym::A2)?,
            b1: env.get(Sym::B1)?,
            b2: env.get(Sym::B2)?,
            c: env.get(Sym::C)?,
            t1: env.get(Sym::T1)?,
            t2: env.get(Sym::T2)?,
            k1: env.k(IntSym::K1)?,
            k2: env.k(IntSym::K2)?,
        })
    }

    pub fn params2<S: Field>(env: &Env<S>) -> Result<Params2<S>> {
        Ok(Params2 {
            a1: env.get(Sym::A1)?,
            a2: env.get(Sym::A2)?,
            b1: env.get(Sym::B1)?,
            b2: env.get(Sym::B2)?,
            c: env.get(Sym::C)?,
            t: env.get(Sym::T)?,
            k: env.k(IntSym::K)?,
        })
    }

    /// Builds the lattice at the parameter values bound in `env`.
    pub fn lattice<S: Field>(&self, env: &Env<S>, delta: Option<(TSel, u32)>) -> Result<Lattice<S>> {
        let pt = Point::new(env.get(Sym::X)?, env.get(Sym::Y)?);
        let mut lat = match self {
            Family::Disc1 => Lattice::f3_disc1(&Self::params1(env)?, &pt),
            Family::Disc2 => Lattice::f3_disc2(&Self::params2(env)?, &pt),
            Family::Classical => Lattice::f3_classical(
                &env.get(Sym::A1)?,
                &env.get(Sym::A2)?,
                &env.get(Sym::B1)?,
                &env.get(Sym::B2)?,
                &env.get(Sym::C)?,
                &pt,
            ),
            Family::Xi(v) => {
                let params = if v.second_form() {
                    XiParams::Second(Params2 {
                        a2: env.get_opt(Sym::A2).cloned().unwrap_or_else(S::zero),
                        b2: S::zero(),
                        ..xi_base2(env)?
                    })
                } else {
                    XiParams::First(Params1 {
                        a2: env.get_opt(Sym::A2).cloned().unwrap_or_else(S::zero),
                        b2: S::zero(),
                        ..xi_base1(env)?
                    })
                };
                Lattice::xi(*v, &params, &pt)?
            }
            Family::Kdf(tpl) => Lattice::kdf(&tpl.resolve(env)?, &pt),
        };
        if let Some((which, d)) = delta {
            let slot = match (which, self) {
                (TSel::T1, f) if f.first_form() => lat.row_t.as_mut(),
                (TSel::T2, f) if f.first_form() => lat.col_t.as_mut(),
                (TSel::T, f) if f.second_form() => lat.joint_t.as_mut(),
                _ => None,
            };
            match slot {
                Some(tf) => tf.delta = d,
                None => return Err(Error::Operator(format!("Delta on {which:?} does not apply to {}", self.name()))),
            }
        }
        Ok(lat)
    }

    fn index_weight(&self, op: Op, env: &Env<impl Field>) -> Result<(i64, i64)> {
        let need_k = |k: IntSym| -> Result<()> {
            if env.k(k)? == 0 {
                Err(Error::Operator(format!("{} needs {} >= 1", op.name(), k.name())))
            } else {
                Ok(())
            }
        };
        match op {
            Op::Theta => Ok((1, 0)),
            Op::Phi => Ok((0, 1)),
            Op::BigTheta1 if self.first_form() => need_k(IntSym::K1).map(|_| (1, 0)),
            Op::BigTheta2 if self.first_form() => need_k(IntSym::K2).map(|_| (0, 1)),
            Op::BigTheta if self.second_form() => need_k(IntSym::K).map(|_| (1, 1)),
            _ => Err(Error::Operator(format!("{} does not act on {}", op.name(), self.name()))),
        }
    }
}

fn xi_base1<S: Field>(env: &Env<S>) -> Result<Params1<S>> {
    Ok(Params1 {
        a1: env.get(Sym::A1)?,
        a2: S::zero(),
        b1: env.get(Sym::B1)?,
        b2: S::zero(),
        c: env.get(Sym::C)?,
        t1: env.get(Sym::T1)?,
        t2: env.get(Sym::T2)?,
        k1: env.k(IntSym::K1)?,
        k2: env.k(IntSym::K2)?,
    })
}

fn xi_base2<S: Field>(env: &Env<S>) -> Result<Params2<S>> {
    Ok(Params2 {
        a1: env.get(Sym::A1)?,
        a2: S::zero(),
        b1: env.get(Sym::B1)?,
        b2: S::zero(),
        c: env.get(Sym::C)?,
        t: env.get(Sym::T)?,
        k: env.k(IntSym::K)?,
    })
}

/// Dense bivariate polynomial in the lattice indices; `coeffs[i][j]` multiplies `m^i n^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPoly<S> {
    pub coeffs: Vec<Vec<S>>,
}

impl<S: Field> WeightPoly<S> {
    pub fn one() -> Self {
        WeightPoly {
            coeffs: vec![vec![S::one()]],
        }
    }

    pub fn linear(c0: S, cm: S, cn: S) -> Self {
        WeightPoly {
            coeffs: vec![vec![c0, cn], vec![cm, S::zero()]],
        }
    }

    pub fn degree(&self) -> usize {
        let mut deg = 0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero_value() {
                    deg = deg.max(i + j);
                }
            }
        }
        deg
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rows = self.coeffs.len() + other.coeffs.len() - 1;
        let cols = self.coeffs[0].len() + other.coeffs[0].len() - 1;
        let mut out = vec![vec![S::zero(); cols]; rows];
        for (i, ra) in self.coeffs.iter().enumerate() {
            for (j, a) in ra.iter().enumerate() {
                if a.is_zero_value() {
                    continue;
                }
                for (p, rb) in other.coeffs.iter().enumerate() {
                    for (q, b) in rb.iter().enumerate() {
                        out[i + p][j + q] = out[i + p][j + q].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        WeightPoly { coeffs: out }
    }

    pub fn eval(&self, m: usize, n: usize) -> S {
        let mm = S::from_i64(m as i64);
        let nn = S::from_i64(n as i64);
        let mut acc = S::zero();
        let mut mp = S::one();
        for row in &self.coeffs {
            let mut np = S::one();
            for c in row {
                if !c.is_zero_value() {
                    acc = acc + c.clone() * mp.clone() * np.clone();
                }
                np = np * nn.clone();
            }
            mp = mp * mm.clone();
        }
        acc
    }
}

/// A product of affine operator factors applied to a shifted function,
/// times a scalar.  The parameter shift is outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorExpr {
    pub scalar: Expr,
    pub factors: Vec<FactorSpec>,
    pub delta: Option<(TSel, IntExpr)>,
    pub shift: ParamShift,
    pub point: PointMap,
    pub family: Family,
}

/// One affine factor with its coefficients evaluated.
#[derive(Clone, Debug)]
struct ResolvedFactor<S> {
    constant: S,
    ops: Vec<(S, Op)>,
}

impl OperatorExpr {
    pub fn plain(family: Family) -> Self {
        OperatorExpr {
            scalar: Expr::Int(1),
            factors: vec![],
            delta: None,
            shift: ParamShift::none(),
            point: PointMap::default(),
            family,
        }
    }

    pub fn with_scalar(mut self, e: Expr) -> Self {
        self.scalar = e;
        self
    }

    pub fn with_factor(mut self, f: FactorSpec) -> Self {
        self.factors.push(f);
        self
    }

    pub fn with_shift(mut self, s: ParamShift) -> Self {
        self.shift = s;
        self
    }

    pub fn with_point(mut self, p: PointMap) -> Self {
        self.point = p;
        self
    }

    pub fn with_delta(mut self, which: TSel, power: IntExpr) -> Self {
        self.delta = Some((which, power));
        self
    }

    pub fn uses_x_derivative(&self) -> bool {
        self.factors.iter().any(|f| {
            let base = match f {
                FactorSpec::Single(b) => b,
                FactorSpec::Rising { base, .. } | FactorSpec::Falling { base, .. } | FactorSpec::Power { base, .. } => {
                    base
                }
            };
            base.ops.iter().any(|(_, o)| matches!(o, Op::Theta | Op::Phi))
        })
    }

    /// The environment of the function the operators act on.
    pub fn shifted_env<S: Field>(&self, base: &Env<S>) -> Result<Env<S>> {
        let mut env = base.clone();
        for (sym, off) in &self.shift.offsets {
            let v = base.get(*sym)? + S::from_i64(off.eval(base)?);
            env.set(*sym, v);
        }
        for (k, v) in &self.shift.k_override {
            env.set_int(*k, *v as i64);
        }
        env.set(Sym::X, self.point.x.eval(base)?);
        env.set(Sym::Y, self.point.y.eval(base)?);
        Ok(env)
    }

    fn resolved_factors<S: Field>(&self, base: &Env<S>) -> Result<Vec<ResolvedFactor<S>>> {
        let resolve = |f: &AffineFactor, shift: i64| -> Result<ResolvedFactor<S>> {
            let mut ops = Vec::with_capacity(f.ops.len());
            for (coef, op) in &f.ops {
                ops.push((coef.eval(base)?, *op));
            }
            Ok(ResolvedFactor {
                constant: f.constant.eval(base)? + S::from_i64(shift),
                ops,
            })
        };
        let mut out = Vec::new();
        for spec in &self.factors {
            match spec {
                FactorSpec::Single(f) => out.push(resolve(f, 0)?),
                FactorSpec::Rising { base: f, len } => {
                    for j in 0..len.eval(base)?.max(0) {
                        out.push(resolve(f, j)?);
                    }
                }
                FactorSpec::Falling { base: f, len } => {
                    for j in 0..len.eval(base)?.max(0) {
                        out.push(resolve(f, -j)?);
                    }
                }
                FactorSpec::Power { base: f, len } => {
                    for _ in 0..len.eval(base)?.max(0) {
                        out.push(resolve(f, 0)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The weight polynomial in (m, n) that the operator factors amount to.
    pub fn weight_poly<S: Field>(&self, base: &Env<S>) -> Result<WeightPoly<S>> {
        let shifted = self.shifted_env(base)?;
        let mut poly = WeightPoly::one();
        for f in self.resolved_factors(base)? {
            let mut cm = S::zero();
            let mut cn = S::zero();
            for (coef, op) in &f.ops {
                let (wm, wn) = self.family.index_weight(*op, &shifted)?;
                cm = cm + coef.clone() * S::from_i64(wm);
                cn = cn + coef.clone() * S::from_i64(wn);
            }
            poly = poly.mul(&WeightPoly::linear(f.constant, cm, cn));
        }
        if poly.degree() > MAX_WEIGHT_DEGREE {
            return Err(Error::Operator(format!(
                "weight degree {} exceeds {MAX_WEIGHT_DEGREE}",
                poly.degree()
            )));
        }
        Ok(poly)
    }

    fn delta_power<S: Field>(&self, base: &Env<S>) -> Result<Option<(TSel, u32)>> {
        match &self.delta {
            None => Ok(None),
            Some((which, p)) => {
                let p = p.eval(base)?;
                let p = u32::try_from(p).map_err(|_| Error::Operator(format!("negative Delta power {p}")))?;
                Ok(Some((*which, p)))
            }
        }
    }

    fn map_pole(&self, err: Error) -> Error {
        match err {
            Error::Pole(msg) if !self.shift.is_identity() => Error::ShiftPole(msg),
            other => other,
        }
    }

    /// Weight path: `scalar * sum W(m,n) A'_{mn} x'^m y'^n`, exact in the terminating regime.
    pub fn apply<S: Field>(&self, base: &Env<S>, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
        let scalar = self.scalar.eval(base)?;
        if scalar.is_zero_value() {
            return Ok(Evaluation {
                value: S::zero(),
                terms_used: 0,
                terminated: true,
                converged: true,
                est_error: 0.0,
            });
        }
        let shifted = self.shifted_env(base)?;
        let poly = self.weight_poly(base)?;
        let lattice = self
            .family
            .lattice(&shifted, self.delta_power(base)?)
            .map_err(|e| self.map_pole(e))?;
        let weighted = poly.degree() > 0 || !poly.coeffs[0][0].is_zero_value() && poly.coeffs[0][0] != S::one();
        let ev = if weighted {
            lattice.sum_weighted(Some(|m: usize, n: usize| poly.eval(m, n)), pol)
        } else {
            lattice.sum(pol)
        }
        .map_err(|e| self.map_pole(e))?;
        Ok(Evaluation {
            value: scalar.clone() * ev.value,
            est_error: ev.est_error * scalar.magnitude(),
            ..ev
        })
    }

    /// Shift path: operators realized by re-evaluating at shifted `t` and by
    /// contour differentiation in `x`, `y`.
    pub fn apply_shift_path(&self, base: &Env<Scalar>, pol: &TruncationPolicy) -> Result<Scalar> {
        let scalar = self.scalar.eval(base)?;
        if scalar.is_zero_value() {
            return Ok(Scalar::new(0.0, 0.0));
        }
        let shifted = self.shifted_env(base)?;
        let factors = self.resolved_factors(base)?;
        for f in &factors {
            for (_, op) in &f.ops {
                self.family.index_weight(*op, &shifted)?;
            }
        }
        let delta = self.delta_power(base)?;
        let probe = self.family.lattice(&shifted, None).map_err(|e| self.map_pole(e))?;
        let contour = Contour::for_lattice(&probe);
        let walker = ShiftWalker {
            family: &self.family,
            factors: &factors,
            delta,
            pol,
            contour,
        };
        Ok(scalar * walker.eval(0, &shifted).map_err(|e| self.map_pole(e))?)
    }
}

#[derive(Clone, Copy, Debug)]
struct Contour {
    radius: f64,
    points: usize,
}

impl Contour {
    fn for_lattice(lat: &Lattice<Scalar>) -> Self {
        if lat.is_finite() {
            Contour { radius: 0.5, points: 16 }
        } else {
            let reach = lat.x.norm().max(lat.y.norm());
            Contour {
                radius: (0.5 * (1.0 - reach)).clamp(0.05, 0.5),
                points: 48,
            }
        }
    }
}

struct ShiftWalker<'a> {
    family: &'a Family,
    factors: &'a [ResolvedFactor<Scalar>],
    delta: Option<(TSel, u32)>,
    pol: &'a TruncationPolicy,
    contour: Contour,
}

impl ShiftWalker<'_> {
    fn eval(&self, level: usize, env: &Env<Scalar>) -> Result<Scalar> {
        if level == self.factors.len() {
            return self.inner(env);
        }
        let f = &self.factors[level];
        let mut acc = Scalar::new(0.0, 0.0);
        if !f.constant.is_zero_value() {
            acc += f.constant * self.eval(level + 1, env)?;
        }
        for (coef, op) in &f.ops {
            if coef.is_zero_value() {
                continue;
            }
            acc += coef * self.apply_op(*op, level + 1, env)?;
        }
        Ok(acc)
    }

    fn inner(&self, env: &Env<Scalar>) -> Result<Scalar> {
        match self.delta {
            None | Some((_, 0)) => Ok(self.family.lattice(env, None)?.sum(self.pol)?.value),
            Some((which, d)) => {
                let t = env.get(which.sym())?;
                let mut acc = Scalar::new(0.0, 0.0);
                for j in 0..=d {
                    let mut e = env.clone();
                    e.set(which.sym(), t + j as f64);
                    let sign = if (d - j) % 2 == 0 { 1.0 } else { -1.0 };
                    let v = self.family.lattice(&e, None)?.sum(self.pol)?.value;
                    acc += v * (sign * binomial(d as u64, j as u64) as f64);
                }
                Ok(acc)
            }
        }
    }

    fn apply_op(&self, op: Op, level: usize, env: &Env<Scalar>) -> Result<Scalar> {
        match op {
            Op::Theta => self.euler(Sym::X, level, env),
            Op::Phi => self.euler(Sym::Y, level, env),
            Op::BigTheta1 => self.big_theta(TSel::T1, level, env),
            Op::BigTheta2 => self.big_theta(TSel::T2, level, env),
            Op::BigTheta => self.big_theta(TSel::T, level, env),
        }
    }

    /// `(1/k) t (f(t) - f(t-1))`
    fn big_theta(&self, which: TSel, level: usize, env: &Env<Scalar>) -> Result<Scalar> {
        let t = env.get(which.sym())?;
        if t.is_zero_value() {
            return Ok(Scalar::new(0.0, 0.0));
        }
        let k = env.k(which.k())? as f64;
        let here = self.eval(level, env)?;
        let mut e = env.clone();
        e.set(which.sym(), t - 1.0);
        let before = self.eval(level, &e)?;
        Ok(t * (here - before) / k)
    }

    /// `v d/dv` through the trapezoid rule on a circle around `v`.
    fn euler(&self, var: Sym, level: usize, env: &Env<Scalar>) -> Result<Scalar> {
        let v0 = env.get(var)?;
        let Contour { radius, points } = self.contour;
        let mut acc = Scalar::new(0.0, 0.0);
        for j in 0..points {
            let w = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / points as f64);
            let mut e = env.clone();
            e.set(var, v0 + w * radius);
            acc += self.eval(level, &e)? / w;
        }
        Ok(v0 * acc / (points as f64 * radius))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub abs: f64,
    pub rel: f64,
    pub scale: f64,
}

impl Residual {
    pub fn between(a: Scalar, b: Scalar) -> Self {
        let abs = (a - b).norm();
        let scale = a.norm().max(b.norm());
        Residual {
            abs,
            rel: if scale > 0.0 { abs / scale } else { abs },
            scale,
        }
    }
}

/// Compares the weight path and the shift path for one expression.  The
/// scale also covers the operand (the expression without its operator
/// factors and Delta power), so an exact zero such as `th (th - 1)` on a
/// linear series is measured against the function the operators act on.
pub fn operator_cross_check(e: &OperatorExpr, base: &Env<Scalar>, pol: &TruncationPolicy) -> Result<Residual> {
    let weight = e.apply(base, pol)?.value;
    let shift = e.apply_shift_path(base, pol)?;
    let operand = OperatorExpr {
        factors: vec![],
        delta: None,
        ..e.clone()
    };
    let floor = operand.apply(base, pol)?.value.norm();
    let mut res = Residual::between(weight, shift);
    if floor > res.scale {
        res.scale = floor;
        res.rel = res.abs / floor;
    }
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftOp {
    Delta,
    Rho,
    Theta,
}

/// One of `Delta_t`, `rho_t`, `Theta_t` applied by re-evaluating the series.
pub fn numeric_shift_apply(
    op: ShiftOp,
    which: TSel,
    family: &Family,
    base: &Env<Scalar>,
    pol: &TruncationPolicy,
) -> Result<Scalar> {
    let t = base.get(which.sym())?;
    let at = |tv: Scalar| -> Result<Scalar> {
        let mut e = base.clone();
        e.set(which.sym(), tv);
        Ok(family.lattice(&e, None)?.sum(pol)?.value)
    };
    match op {
        ShiftOp::Delta => Ok(at(t + 1.0)? - at(t)?),
        ShiftOp::Rho => at(t - 1.0),
        ShiftOp::Theta => {
            if t.is_zero_value() {
                Ok(Scalar::new(0.0, 0.0))
            } else {
                Ok(t * (at(t)? - at(t - 1.0)?))
            }
        }
    }
}

/// Left and right sides of the eigen-relation `Theta_t A = (index * k) A` on
/// one lattice coefficient; exact for exact fields.
pub fn theta_eigen_pair1<S: Field>(p: &Params1<S>, which: TSel, m: u64, n: u64) -> Result<(S, S)> {
    let mut q = p.clone();
    let (t, k, idx) = match which {
        TSel::T1 => {
            q.t1 = p.t1.clone() - S::one();
            (p.t1.clone(), p.k1, m)
        }
        TSel::T2 => {
            q.t2 = p.t2.clone() - S::one();
            (p.t2.clone(), p.k2, n)
        }
        TSel::T => return Err(Error::Operator("t belongs to the second form".into())),
    };
    let here = term_f3_disc1(p, m, n)?;
    let lhs = t * (here.clone() - term_f3_disc1(&q, m, n)?);
    let rhs = S::from_i64((idx * k as u64) as i64) * here;
    Ok((lhs, rhs))
}

pub fn theta_eigen_pair2<S: Field>(p: &Params2<S>, m: u64, n: u64) -> Result<(S, S)> {
    let q = Params2 {
        t: p.t.clone() - S::one(),
        ..p.clone()
    };
    let here = term_f3_disc2(p, m, n)?;
    let lhs = p.t.clone() * (here.clone() - term_f3_disc2(&q, m, n)?);
    let rhs = S::from_i64(((m + n) * p.k as u64) as i64) * here;
    Ok((lhs, rhs))
}

pub fn env_from_params1<S: Field>(p: &Params1<S>, pt: &Point<S>) -> Env<S> {
    Env::new()
        .with(Sym::A1, p.a1.clone())
        .with(Sym::A2, p.a2.clone())
        .with(Sym::B1, p.b1.clone())
        .with(Sym::B2, p.b2.clone())
        .with(Sym::C, p.c.clone())
        .with(Sym::T1, p.t1.clone())
        .with(Sym::T2, p.t2.clone())
        .with(Sym::X, pt.x.clone())
        .with(Sym::Y, pt.y.clone())
        .with_int(IntSym::K1, p.k1 as i64)
        .with_int(IntSym::K2, p.k2 as i64)
}

pub fn env_from_params2<S: Field>(p: &Params2<S>, pt: &Point<S>) -> Env<S> {
    Env::new()
        .with(Sym::A1, p.a1.clone())
        .with(Sym::A2, p.a2.clone())
        .with(Sym::B1, p.b1.clone())
        .with(Sym::B2, p.b2.clone())
        .with(Sym::C, p.c.clone())
        .with(Sym::T, p.t.clone())
        .with(Sym::X, pt.x.clone())
        .with(Sym::Y, pt.y.clone())
        .with_int(IntSym::K, p.k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{ic, iv, n, s};
    use crate::numerics::{c, parse_exact, r, ExactScalar};

    fn base1() -> Params1 {
        Params1 {
            a1: r(7.0 / 3.0),
            a2: c(0.5, 0.25),
            b1: r(0.4),
            b2: r(9.0 / 7.0),
            c: r(13.0 / 6.0),
            t1: r(4.0),
            t2: r(3.0),
            k1: 2,
            k2: 1,
        }
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn affine_at_origin_gives_constant() {
        let env = env_from_params1(&base1(), &Point::new(r(0.0), r(0.0)));
        let e = OperatorExpr::plain(Family::Disc1)
            .with_factor(FactorSpec::Single(AffineFactor::plus(s(Sym::A1), &[Op::Theta])));
        let v = e.apply(&env, &pol()).unwrap().value;
        assert_eq!(v, r(7.0 / 3.0));
    }

    #[test]
    fn big_theta_on_single_coefficient() {
        // t1 = 4, k1 = 2, m = 1: f(4) = 12, 4 (12 - 6) = 24 = 2 * 12
        let p = Params1 {
            a1: r(1.0),
            a2: r(1.0),
            b1: r(1.0),
            b2: r(1.0),
            c: r(1.0),
            t1: r(4.0),
            t2: r(0.0),
            k1: 2,
            k2: 1,
        };
        let (lhs, rhs) = theta_eigen_pair1(&p, TSel::T1, 1, 0).unwrap();
        assert_eq!(lhs, r(24.0));
        assert_eq!(rhs, r(24.0));
    }

    #[test]
    fn eigen_relation_exact() {
        let q = |t: &str| parse_exact(t).unwrap();
        let p: Params1<ExactScalar> = Params1 {
            a1: q("7/3"),
            a2: q("1/2+1/4i"),
            b1: q("2/5"),
            b2: q("9/7"),
            c: q("13/6"),
            t1: q("-5/2"),
            t2: q("3"),
            k1: 3,
            k2: 2,
        };
        for m in 0..5 {
            for n in 0..4 {
                let (l, r) = theta_eigen_pair1(&p, TSel::T1, m, n).unwrap();
                assert_eq!(l, r);
                let (l, r) = theta_eigen_pair1(&p, TSel::T2, m, n).unwrap();
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn delta_matches_contiguous_form() {
        // Delta_{t1} F(k1 = 1) = a1 b1 x / c F(a1+1, b1+1, c+1)
        let mut p = base1();
        p.k1 = 1;
        let pt = Point::new(r(0.3), c(0.2, 0.1));
        let env = env_from_params1(&p, &pt);
        let lhs = numeric_shift_apply(ShiftOp::Delta, TSel::T1, &Family::Disc1, &env, &pol()).unwrap();
        let mut q = p.clone();
        q.a1 += 1.0;
        q.b1 += 1.0;
        q.c += 1.0;
        let rhs = p.a1 * p.b1 * pt.x / p.c * crate::series::eval_f3_disc1(&q, &pt, &pol()).unwrap().value;
        assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }

    #[test]
    fn cross_check_difference_equation_factor() {
        let env = env_from_params1(&base1(), &Point::new(r(0.3), c(0.2, 0.1)));
        let e = OperatorExpr::plain(Family::Disc1)
            .with_scalar(ival_k1())
            .with_factor(FactorSpec::Single(AffineFactor::op(Op::BigTheta1)))
            .with_factor(FactorSpec::Single(AffineFactor::plus(
                s(Sym::C) - n(1),
                &[Op::BigTheta1, Op::BigTheta2],
            )));
        let res = operator_cross_check(&e, &env, &pol()).unwrap();
        assert!(res.rel <= 1e-11, "{res:?}");
    }

    fn ival_k1() -> Expr {
        crate::expr::ival(iv(IntSym::K1))
    }

    #[test]
    fn cross_check_rho_alone() {
        let env = env_from_params1(&base1(), &Point::new(r(0.5), r(-0.3)));
        let e = OperatorExpr::plain(Family::Disc1)
            .with_shift(ParamShift::by(vec![(Sym::T1, -iv(IntSym::K1))]));
        let res = operator_cross_check(&e, &env, &pol()).unwrap();
        assert!(res.rel <= 1e-12);
        let rho = numeric_shift_apply(ShiftOp::Rho, TSel::T1, &Family::Disc1, &env, &pol()).unwrap();
        let e1 = OperatorExpr::plain(Family::Disc1).with_shift(ParamShift::by(vec![(Sym::T1, ic(-1))]));
        assert_eq!(e1.apply(&env, &pol()).unwrap().value, rho);
    }

    #[test]
    fn cross_check_exact_zero_uses_operand_scale() {
        // t1 = 1 with k1 = 1 leaves a series linear in x, which th (th - 1) kills
        let mut p = base1();
        p.t1 = r(1.0);
        p.k1 = 1;
        let env = env_from_params1(&p, &Point::new(r(0.5), c(0.2, 0.1)));
        let th = |shift: i64| {
            FactorSpec::Single(AffineFactor::new(Expr::Int(-shift), vec![(Expr::Int(1), Op::Theta)]))
        };
        let e = OperatorExpr::plain(Family::Disc1).with_factor(th(0)).with_factor(th(1));
        assert_eq!(e.apply(&env, &pol()).unwrap().value, Scalar::new(0.0, 0.0));
        let res = operator_cross_check(&e, &env, &pol()).unwrap();
        assert!(res.rel <= 1e-13, "{res:?}");
        assert!(res.scale > 0.5);
    }

    #[test]
    fn euler_operators_commute() {
        let env = env_from_params1(&base1(), &Point::new(r(0.3), c(0.2, 0.1)));
        let th = FactorSpec::Single(AffineFactor::op(Op::Theta));
        let ph = FactorSpec::Single(AffineFactor::op(Op::Phi));
        let a = OperatorExpr::plain(Family::Disc1).with_factor(th.clone()).with_factor(ph.clone());
        let b = OperatorExpr::plain(Family::Disc1).with_factor(ph).with_factor(th);
        assert_eq!(a.apply(&env, &pol()).unwrap().value, b.apply(&env, &pol()).unwrap().value);
        let res = operator_cross_check(&a, &env, &pol()).unwrap();
        assert!(res.rel <= 1e-11, "{res:?}");
    }

    #[test]
    fn big_theta_rejected_without_k() {
        let mut p = base1();
        p.k1 = 0;
        let env = env_from_params1(&p, &Point::new(r(0.3), r(0.1)));
        let e = OperatorExpr::plain(Family::Disc1).with_factor(FactorSpec::Single(AffineFactor::op(Op::BigTheta1)));
        assert!(matches!(e.apply(&env, &pol()), Err(Error::Operator(_))));
    }

    #[test]
    fn shift_onto_pole() {
        let mut p = base1();
        p.c = r(1.0);
        let env = env_from_params1(&p, &Point::new(r(0.3), r(0.1)));
        let e = OperatorExpr::plain(Family::Disc1).with_shift(ParamShift::by(vec![(Sym::C, ic(-1))]));
        assert!(matches!(e.apply(&env, &pol()), Err(Error::ShiftPole(_))));
    }

    #[test]
    fn weight_poly_products() {
        let a = WeightPoly::linear(r(1.0), r(1.0), r(0.0));
        let b = WeightPoly::linear(r(-1.0), r(0.0), r(2.0));
        let p = a.mul(&b);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(3, 2), r(4.0 * 3.0));
    }
}
