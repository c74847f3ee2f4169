//! Lattice summation for the discrete F3 functions and their relatives.
//!
//! Every family handled here is a separable double series
//! `sum A(m+n) B(m) C(n) x^m y^n`, so one [`Lattice`] description covers
//! F3, both discrete forms, the Humbert functions, Kampe de Feriet and 1F0.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::numerics::{rising_factorial, ExactScalar, Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Params1<S = Scalar> {
    pub a1: S,
    pub a2: S,
    pub b1: S,
    pub b2: S,
    pub c: S,
    pub t1: S,
    pub t2: S,
    pub k1: u32,
    pub k2: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params2<S = Scalar> {
    pub a1: S,
    pub a2: S,
    pub b1: S,
    pub b2: S,
    pub c: S,
    pub t: S,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point<S = Scalar> {
    pub x: S,
    pub y: S,
}

impl<S: Field> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub max_m: usize,
    pub max_n: usize,
    pub tol: f64,
    pub divergence_window: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_m: 256,
            max_n: 256,
            tol: 1e-14,
            divergence_window: 5,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_m < 1 || self.max_n < 1 {
            return Err(Error::InvalidPolicy("max_m and max_n must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidPolicy("tol must be positive".into()));
        }
        if self.divergence_window < 3 {
            return Err(Error::InvalidPolicy("divergence_window must be at least 3".into()));
        }
        Ok(())
    }

    pub fn with_caps(mut self, cap: usize) -> Self {
        self.max_m = cap;
        self.max_n = cap;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<S = Scalar> {
    pub value: S,
    pub terms_used: usize,
    pub terminated: bool,
    pub converged: bool,
    pub est_error: f64,
}

/// Parameter lists of a Kampe de Feriet function: `A` joint upper, `B`/`C`
/// upper in x/y, `D` joint lower, `E`/`F` lower in x/y.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KdFSpec<S = Scalar> {
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub d: Vec<S>,
    pub e: Vec<S>,
    pub f: Vec<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XiVariant {
    /// Xi_1 from the first discrete form.
    Xi11,
    /// Xi_2 from the first discrete form.
    Xi21,
    /// Xi_1 from the second discrete form.
    Xi12,
    /// Xi_2 from the second discrete form.
    Xi22,
}

impl XiVariant {
    pub fn name(self) -> &'static str {
        match self {
            XiVariant::Xi11 => "xi11",
            XiVariant::Xi21 => "xi21",
            XiVariant::Xi12 => "xi12",
            XiVariant::Xi22 => "xi22",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "xi11" => Some(XiVariant::Xi11),
            "xi21" => Some(XiVariant::Xi21),
            "xi12" => Some(XiVariant::Xi12),
            "xi22" => Some(XiVariant::Xi22),
            _ => None,
        }
    }

    pub fn second_form(self) -> bool {
        matches!(self, XiVariant::Xi12 | XiVariant::Xi22)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum XiParams<S = Scalar> {
    First(Params1<S>),
    Second(Params2<S>),
}

/// The factor `falling(ik, delta) * (-1)^{ik-delta} (-t)_{ik-delta}` at lattice index `i`.
///
/// `delta > 0` is what `Delta_t^delta` leaves behind on `(-1)^{ik}(-t)_{ik}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFactor<S> {
    pub t: S,
    pub k: u32,
    pub delta: u32,
}

impl<S: Field> TFactor<S> {
    pub fn new(t: S, k: u32) -> Self {
        TFactor { t, k, delta: 0 }
    }

    /// Last index with a nonzero factor, if the factor terminates.
    fn bound(&self) -> Option<i64> {
        if self.k == 0 {
            return if self.delta > 0 { Some(-1) } else { None };
        }
        self.t
            .nonnegative_integer()
            .map(|j| (j + self.delta as i64) / self.k as i64)
    }

    fn values(&self, upto: usize) -> Vec<S> {
        let k = self.k as u64;
        let d = self.delta as u64;
        let top = upto as u64 * k;
        let mut falls = Vec::with_capacity(top as usize + 1);
        let mut acc = S::one();
        let terminate_at = self.t.nonnegative_integer();
        for n in 0..=top {
            if n > 0 {
                if terminate_at.is_some_and(|j| (n as i64) > j) {
                    acc = S::zero();
                } else {
                    acc = acc * (self.t.clone() - S::from_i64(n as i64 - 1));
                }
            }
            falls.push(acc.clone());
            if acc.is_zero_value() && n > 0 {
                falls.resize(top as usize + 1, S::zero());
                break;
            }
        }
        (0..=upto as u64)
            .map(|i| {
                let big_n = i * k;
                if big_n < d {
                    S::zero()
                } else {
                    let lead: i128 = (0..d).map(|j| (big_n - j) as i128).product();
                    S::from_i64(lead as i64) * falls[(big_n - d) as usize].clone()
                }
            })
            .collect()
    }
}

/// A separable double series with optional termination data.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice<S> {
    pub joint_up: Vec<S>,
    pub joint_low: Vec<S>,
    pub row_up: Vec<S>,
    pub row_low: Vec<S>,
    pub col_up: Vec<S>,
    pub col_low: Vec<S>,
    pub joint_t: Option<TFactor<S>>,
    pub row_t: Option<TFactor<S>>,
    pub col_t: Option<TFactor<S>>,
    pub x: S,
    pub y: S,
}

fn min_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(u), Some(v)) => Some(u.min(v)),
        (Some(u), None) | (None, Some(u)) => Some(u),
        (None, None) => None,
    }
}

fn upper_bound<S: Field>(ups: &[S]) -> Option<i64> {
    ups.iter()
        .filter_map(|u| u.nonpositive_integer())
        .map(|j| -j)
        .min()
}

/// Outcome of a lattice summation, before it is wrapped as an [`Evaluation`].
struct Summed<S> {
    value: S,
    terms: usize,
    terminated: bool,
    converged: bool,
    est_error: f64,
}

impl<S: Field> Lattice<S> {
    fn empty(x: S, y: S) -> Self {
        Lattice {
            joint_up: vec![],
            joint_low: vec![],
            row_up: vec![],
            row_low: vec![],
            col_up: vec![],
            col_low: vec![],
            joint_t: None,
            row_t: None,
            col_t: None,
            x,
            y,
        }
    }

    pub fn f3_disc1(p: &Params1<S>, pt: &Point<S>) -> Self {
        let mut l = Lattice::empty(pt.x.clone(), pt.y.clone());
        l.row_up = vec![p.a1.clone(), p.b1.clone()];
        l.col_up = vec![p.a2.clone(), p.b2.clone()];
        l.joint_low = vec![p.c.clone()];
        l.row_t = Some(TFactor::new(p.t1.clone(), p.k1));
        l.col_t = Some(TFactor::new(p.t2.clone(), p.k2));
        l
    }

    pub fn f3_disc2(p: &Params2<S>, pt: &Point<S>) -> Self {
        let mut l = Lattice::empty(pt.x.clone(), pt.y.clone());
        l.row_up = vec![p.a1.clone(), p.b1.clone()];
        l.col_up = vec![p.a2.clone(), p.b2.clone()];
        l.joint_low = vec![p.c.clone()];
        l.joint_t = Some(TFactor::new(p.t.clone(), p.k));
        l
    }

    pub fn f3_classical(a1: &S, a2: &S, b1: &S, b2: &S, c: &S, pt: &Point<S>) -> Self {
        let mut l = Lattice::empty(pt.x.clone(), pt.y.clone());
        l.row_up = vec![a1.clone(), b1.clone()];
        l.col_up = vec![a2.clone(), b2.clone()];
        l.joint_low = vec![c.clone()];
        l
    }

    pub fn kdf(spec: &KdFSpec<S>, pt: &Point<S>) -> Self {
        let mut l = Lattice::empty(pt.x.clone(), pt.y.clone());
        l.joint_up = spec.a.clone();
        l.row_up = spec.b.clone();
        l.col_up = spec.c.clone();
        l.joint_low = spec.d.clone();
        l.row_low = spec.e.clone();
        l.col_low = spec.f.clone();
        l
    }

    pub fn xi(variant: XiVariant, params: &XiParams<S>, pt: &Point<S>) -> Result<Self> {
        let mut l = Lattice::empty(pt.x.clone(), pt.y.clone());
        match (variant, params) {
            (XiVariant::Xi11 | XiVariant::Xi21, XiParams::First(p)) => {
                l.row_up = vec![p.a1.clone(), p.b1.clone()];
                if variant == XiVariant::Xi11 {
                    l.col_up = vec![p.a2.clone()];
                }
                l.joint_low = vec![p.c.clone()];
                l.row_t = Some(TFactor::new(p.t1.clone(), p.k1));
                l.col_t = Some(TFactor::new(p.t2.clone(), p.k2));
            }
            (XiVariant::Xi12 | XiVariant::Xi22, XiParams::Second(p)) => {
                l.row_up = vec![p.a1.clone(), p.b1.clone()];
                if variant == XiVariant::Xi12 {
                    l.col_up = vec![p.a2.clone()];
                }
                l.joint_low = vec![p.c.clone()];
                l.joint_t = Some(TFactor::new(p.t.clone(), p.k));
            }
            _ => {
                return Err(Error::InvalidParams(format!(
                    "{} needs the matching parameter record",
                    variant.name()
                )))
            }
        }
        Ok(l)
    }

    pub fn one_f0_disc(a: &S, t: &S, k: u32, z: &S) -> Self {
        let mut l = Lattice::empty(z.clone(), S::zero());
        l.row_up = vec![a.clone()];
        l.row_t = Some(TFactor::new(t.clone(), k));
        l
    }

    /// Whether the double sum has finitely many nonzero terms.
    pub fn is_finite(&self) -> bool {
        let (row, col, joint) = self.bounds();
        joint.is_some() || (row.is_some() && col.is_some())
    }

    fn bounds(&self) -> (Option<i64>, Option<i64>, Option<i64>) {
        let mut row = min_bound(upper_bound(&self.row_up), self.row_t.as_ref().and_then(|t| t.bound()));
        let mut col = min_bound(upper_bound(&self.col_up), self.col_t.as_ref().and_then(|t| t.bound()));
        let joint = min_bound(
            upper_bound(&self.joint_up),
            self.joint_t.as_ref().and_then(|t| t.bound()),
        );
        if self.x.is_zero_value() {
            row = Some(0);
        }
        if self.y.is_zero_value() {
            col = Some(0);
        }
        (row, col, joint)
    }

    fn check_poles(&self, max_row: Option<i64>, max_col: Option<i64>, max_joint: Option<i64>) -> Result<()> {
        let reach = |lows: &[S], extent: Option<i64>, what: &str| -> Result<()> {
            for d in lows {
                if let Some(j) = d.nonpositive_integer() {
                    if extent.is_none_or(|e| e > -j) {
                        return Err(Error::Pole(format!(
                            "lower {what} parameter {} is a nonpositive integer",
                            -j
                        )));
                    }
                }
            }
            Ok(())
        };
        reach(&self.joint_low, max_joint, "joint")?;
        reach(&self.row_low, max_row, "x")?;
        reach(&self.col_low, max_col, "y")
    }

    /// Product sequence `prod (u)_i / prod (l)_i * t(i) * z^i / i!` for i <= upto.
    fn side(ups: &[S], lows: &[S], t: Option<&TFactor<S>>, z: &S, with_factorial: bool, upto: usize) -> Vec<Scaled<S>> {
        let tvals = t.map(|t| t.values(upto));
        let mut out = Vec::with_capacity(upto + 1);
        let mut acc = Scaled::one();
        for i in 0..=upto {
            if i > 0 {
                let ii = S::from_i64(i as i64 - 1);
                for u in ups {
                    acc.v = acc.v * (u.clone() + ii.clone());
                }
                for l in lows {
                    acc.v = acc.v / (l.clone() + ii.clone());
                }
                acc.v = acc.v * z.clone();
                if with_factorial {
                    acc.v = acc.v / S::from_i64(i as i64);
                }
                acc.normalize();
            }
            let mut v = acc.clone();
            if let Some(tv) = &tvals {
                v.v = v.v * tv[i].clone();
                v.normalize();
            }
            out.push(v);
        }
        out
    }

    /// Sums `sum W(m,n) A_{mn} x^m y^n`; `weight` of `None` means 1.
    pub fn sum_weighted<W>(&self, weight: Option<W>, pol: &TruncationPolicy) -> Result<Evaluation<S>>
    where
        W: Fn(usize, usize) -> S,
    {
        pol.validate()?;
        let (row_b, col_b, joint_b) = self.bounds();
        if row_b == Some(-1) || col_b == Some(-1) || joint_b == Some(-1) {
            return Ok(Evaluation {
                value: S::zero(),
                terms_used: 0,
                terminated: true,
                converged: true,
                est_error: 0.0,
            });
        }
        let m_lim = min_bound(row_b, joint_b);
        let n_lim = min_bound(col_b, joint_b);
        let terminated = matches!(m_lim, Some(m) if m as usize <= pol.max_m)
            && matches!(n_lim, Some(n) if n as usize <= pol.max_n);
        let m_cap = m_lim.map_or(pol.max_m, |m| (m as usize).min(pol.max_m));
        let n_cap = n_lim.map_or(pol.max_n, |n| (n as usize).min(pol.max_n));
        let s_cap = joint_b.map_or(m_cap + n_cap, |j| (j as usize).min(m_cap + n_cap));
        if terminated {
            self.check_poles(m_lim, n_lim, Some(s_cap as i64))?;
        } else {
            self.check_poles(None, None, None)?;
            if S::is_exact() {
                return Err(Error::NotExact("series does not terminate".into()));
            }
        }

        let rows = Self::side(&self.row_up, &self.row_low, self.row_t.as_ref(), &self.x, true, m_cap);
        let cols = Self::side(&self.col_up, &self.col_low, self.col_t.as_ref(), &self.y, true, n_cap);
        let joint = Self::side(&self.joint_up, &self.joint_low, self.joint_t.as_ref(), &S::one(), false, s_cap);

        let summed = self.sum_antidiagonals(&rows, &cols, &joint, m_cap, n_cap, s_cap, terminated, weight, pol)?;
        Ok(Evaluation {
            value: summed.value,
            terms_used: summed.terms,
            terminated: summed.terminated,
            converged: summed.converged,
            est_error: summed.est_error,
        })
    }

    pub fn sum(&self, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
        self.sum_weighted(None::<fn(usize, usize) -> S>, pol)
    }

    #[allow(clippy::too_many_arguments)]
    fn sum_antidiagonals<W>(
        &self,
        rows: &[Scaled<S>],
        cols: &[Scaled<S>],
        joint: &[Scaled<S>],
        m_cap: usize,
        n_cap: usize,
        s_cap: usize,
        terminated: bool,
        weight: Option<W>,
        pol: &TruncationPolicy,
    ) -> Result<Summed<S>>
    where
        W: Fn(usize, usize) -> S,
    {
        let mut total = S::zero();
        let mut terms = 0usize;
        let mut mags: Vec<f64> = Vec::new();
        let mut growth_run = 0usize;
        let mut last_ratio = 0.0f64;
        let mut small_run = 0usize;
        let mut seen_nonzero = false;
        for s in 0..=s_cap {
            let lo = s.saturating_sub(n_cap);
            let hi = s.min(m_cap);
            let mut diag = S::zero();
            let mut mag = 0.0f64;
            let mut raw_mag = 0.0f64;
            if lo <= hi && !joint[s].v.is_zero_value() {
                for m in lo..=hi {
                    let n = s - m;
                    terms += 1;
                    let mut term = rows[m].v.clone() * cols[n].v.clone();
                    if term.is_zero_value() {
                        continue;
                    }
                    term = scale_pow2(term * joint[s].v.clone(), rows[m].e + cols[n].e + joint[s].e);
                    if !S::is_exact() {
                        raw_mag += term.magnitude();
                    }
                    if let Some(w) = &weight {
                        term = term * w(m, n);
                    }
                    if !S::is_exact() {
                        mag += term.magnitude();
                    }
                    diag = diag + term;
                }
            } else {
                terms += hi.saturating_sub(lo) + usize::from(lo <= hi);
            }
            total = total + diag;
            if terminated {
                continue;
            }
            if !mag.is_finite() || !total.is_finite_value() {
                return Err(Error::Divergence {
                    antidiagonals: s + 1,
                    last_magnitude: mag,
                });
            }
            let prev = mags.last().copied();
            mags.push(mag);
            if let Some(p) = prev {
                if p > 0.0 && mag > p {
                    let ratio = mag / p;
                    if growth_run == 0 || ratio >= last_ratio * (1.0 - 1e-12) {
                        growth_run += 1;
                    } else {
                        growth_run = 1;
                    }
                    last_ratio = ratio;
                    if growth_run >= pol.divergence_window {
                        return Err(Error::Divergence {
                            antidiagonals: s + 1,
                            last_magnitude: mag,
                        });
                    }
                } else {
                    growth_run = 0;
                }
            }
            let scale = total.magnitude();
            seen_nonzero |= mag > 0.0;
            // Leading zeros (from a Delta factor) and diagonals wiped out by a
            // zero of the weight say nothing about the tail.
            if seen_nonzero && (raw_mag == 0.0 || (mag > 0.0 && mag <= pol.tol * scale)) {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 2 && s >= 1 {
                return Ok(Summed {
                    value: total,
                    terms,
                    terminated: false,
                    converged: true,
                    est_error: tail_estimate(&mags),
                });
            }
        }
        if terminated {
            return Ok(Summed {
                value: total,
                terms,
                terminated: true,
                converged: true,
                est_error: 0.0,
            });
        }
        let n = mags.len();
        if n >= 2 && mags[n - 1] > mags[n - 2] && mags[n - 2] > 0.0 {
            return Err(Error::Divergence {
                antidiagonals: n,
                last_magnitude: mags[n - 1],
            });
        }
        Ok(Summed {
            value: total,
            terms,
            terminated: false,
            converged: !seen_nonzero,
            est_error: tail_estimate(&mags),
        })
    }
}

/// `v * 2^e`; float sides are renormalized so factorial growth in one
/// direction cannot overflow before the balancing factor is applied.
#[derive(Clone, Debug)]
struct Scaled<S> {
    v: S,
    e: i32,
}

impl<S: Field> Scaled<S> {
    fn one() -> Self {
        Scaled { v: S::one(), e: 0 }
    }

    fn normalize(&mut self) {
        if S::is_exact() {
            return;
        }
        let mag = self.v.magnitude();
        if mag == 0.0 || !mag.is_finite() || (2f64.powi(-64)..2f64.powi(64)).contains(&mag) {
            return;
        }
        let k = mag.log2().floor() as i32;
        self.v = scale_pow2(self.v.clone(), -k);
        self.e += k;
    }
}

fn scale_pow2<S: Field>(v: S, e: i32) -> S {
    if e == 0 || S::is_exact() {
        return v;
    }
    if e < -1200 {
        return S::zero();
    }
    let mut out = v;
    let mut rest = e;
    while rest != 0 {
        let step = rest.clamp(-1000, 1000);
        out = out * S::from_scalar(Scalar::new(2f64.powi(step), 0.0)).expect("float field");
        rest -= step;
    }
    out
}

/// `|last| / (1 - rho)` with `rho` the ratio of the last two magnitudes, clamped to [0, 0.9].
pub fn tail_estimate(mags: &[f64]) -> f64 {
    match mags {
        [] => 0.0,
        [only] => *only,
        [.., prev, last] => {
            let rho = if *prev > 0.0 { (last / prev).clamp(0.0, 0.9) } else { 0.0 };
            last / (1.0 - rho)
        }
    }
}

fn require_c<S: Field>(c: &S) -> Result<()> {
    if let Some(j) = c.nonpositive_integer() {
        return Err(Error::Pole(format!("c = {j} is a nonpositive integer")));
    }
    Ok(())
}

/// Lattice coefficient of the first discrete form, without `x^m y^n`.
pub fn term_f3_disc1<S: Field>(p: &Params1<S>, m: u64, n: u64) -> Result<S> {
    let den = rising_factorial(&p.c, m + n);
    if den.is_zero_value() {
        return Err(Error::Pole(format!("(c)_{} vanishes", m + n)));
    }
    let num = rising_factorial(&p.a1, m)
        * rising_factorial(&p.a2, n)
        * rising_factorial(&p.b1, m)
        * rising_factorial(&p.b2, n)
        * crate::numerics::pochhammer_scaled(&p.t1, p.k1, m)
        * crate::numerics::pochhammer_scaled(&p.t2, p.k2, n);
    Ok(num / (den * crate::numerics::factorial::<S>(m) * crate::numerics::factorial::<S>(n)))
}

/// Lattice coefficient of the second discrete form, without `x^m y^n`.
pub fn term_f3_disc2<S: Field>(p: &Params2<S>, m: u64, n: u64) -> Result<S> {
    let den = rising_factorial(&p.c, m + n);
    if den.is_zero_value() {
        return Err(Error::Pole(format!("(c)_{} vanishes", m + n)));
    }
    let num = rising_factorial(&p.a1, m)
        * rising_factorial(&p.a2, n)
        * rising_factorial(&p.b1, m)
        * rising_factorial(&p.b2, n)
        * crate::numerics::pochhammer_scaled(&p.t, p.k, m + n);
    Ok(num / (den * crate::numerics::factorial::<S>(m) * crate::numerics::factorial::<S>(n)))
}

pub fn eval_f3_disc1<S: Field>(p: &Params1<S>, pt: &Point<S>, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
    require_c(&p.c)?;
    Lattice::f3_disc1(p, pt).sum(pol)
}

pub fn eval_f3_disc2<S: Field>(p: &Params2<S>, pt: &Point<S>, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
    require_c(&p.c)?;
    Lattice::f3_disc2(p, pt).sum(pol)
}

pub fn eval_f3_classical<S: Field>(
    a1: &S,
    a2: &S,
    b1: &S,
    b2: &S,
    c: &S,
    pt: &Point<S>,
    pol: &TruncationPolicy,
) -> Result<Evaluation<S>> {
    require_c(c)?;
    Lattice::f3_classical(a1, a2, b1, b2, c, pt).sum(pol)
}

pub fn eval_kdf<S: Field>(spec: &KdFSpec<S>, pt: &Point<S>, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
    for lower in spec.d.iter().chain(&spec.e).chain(&spec.f) {
        if let Some(j) = lower.nonpositive_integer() {
            return Err(Error::InvalidParams(format!(
                "lower parameter {j} is a nonpositive integer"
            )));
        }
    }
    Lattice::kdf(spec, pt).sum(pol)
}

pub fn eval_xi<S: Field>(
    variant: XiVariant,
    params: &XiParams<S>,
    pt: &Point<S>,
    pol: &TruncationPolicy,
) -> Result<Evaluation<S>> {
    match params {
        XiParams::First(p) => require_c(&p.c)?,
        XiParams::Second(p) => require_c(&p.c)?,
    }
    Lattice::xi(variant, params, pt)?.sum(pol)
}

/// `sum_m (a)_m (-1)^{mk} (-t)_{mk} z^m / m!`.
pub fn eval_1f0_disc<S: Field>(a: &S, t: &S, k: u32, z: &S, pol: &TruncationPolicy) -> Result<Evaluation<S>> {
    Lattice::one_f0_disc(a, t, k, z).sum(pol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub target: XiVariant,
    pub eps: Vec<f64>,
    pub errors: Vec<f64>,
    pub xi_value: Scalar,
    pub monotone: bool,
}

impl LimitReport {
    /// Final error over initial error; zero when both vanish.
    pub fn reduction(&self) -> f64 {
        match (self.errors.first(), self.errors.last()) {
            (Some(first), Some(last)) if *first > 0.0 => last / first,
            (Some(_), Some(last)) if *last == 0.0 => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn passes(&self, factor: f64) -> bool {
        let all_zero = self.errors.iter().all(|e| *e == 0.0);
        all_zero || (self.monotone && self.reduction() <= factor)
    }
}

fn check_eps(n: usize, decreasing: bool, positive: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("empty epsilon list".into()));
    }
    if !positive || !decreasing {
        return Err(Error::InvalidParams("epsilons must be positive and strictly decreasing".into()));
    }
    Ok(())
}

/// Humbert value and the parent function at each epsilon along the
/// confluence path toward `target`.
fn confluence_values<S: Field>(
    target: XiVariant,
    base: &XiParams<S>,
    pt: &Point<S>,
    eps_list: &[S],
    pol: &TruncationPolicy,
) -> Result<(S, Vec<S>)> {
    let xi = eval_xi(target, base, pt, pol)?.value;
    let mut values = Vec::with_capacity(eps_list.len());
    for eps in eps_list {
        let inv = S::one() / eps.clone();
        let y1 = pt.y.clone() * eps.clone();
        let y2 = y1.clone() * eps.clone();
        let value = match (target, base) {
            (XiVariant::Xi11, XiParams::First(p)) => {
                let q = Params1 { b2: inv, ..p.clone() };
                eval_f3_disc1(&q, &Point::new(pt.x.clone(), y1), pol)?.value
            }
            (XiVariant::Xi21, XiParams::First(p)) => {
                let q = Params1 { a2: inv.clone(), b2: inv, ..p.clone() };
                eval_f3_disc1(&q, &Point::new(pt.x.clone(), y2), pol)?.value
            }
            (XiVariant::Xi12, XiParams::Second(p)) => {
                let q = Params2 { b2: inv, ..p.clone() };
                eval_f3_disc2(&q, &Point::new(pt.x.clone(), y1), pol)?.value
            }
            (XiVariant::Xi22, XiParams::Second(p)) => {
                let q = Params2 { a2: inv.clone(), b2: inv, ..p.clone() };
                eval_f3_disc2(&q, &Point::new(pt.x.clone(), y2), pol)?.value
            }
            _ => {
                return Err(Error::InvalidParams(format!(
                    "{} needs the matching parameter record",
                    target.name()
                )))
            }
        };
        values.push(value);
    }
    Ok((xi, values))
}

/// Evaluates the parent function along the confluence path toward `target`
/// and records the distance to the Humbert value at each epsilon.
pub fn limit_degeneration(
    target: XiVariant,
    base: &XiParams<Scalar>,
    pt: &Point<Scalar>,
    eps_list: &[f64],
    pol: &TruncationPolicy,
) -> Result<LimitReport> {
    check_eps(
        eps_list.len(),
        eps_list.windows(2).all(|w| w[1] < w[0]),
        eps_list.iter().all(|e| *e > 0.0),
    )?;
    let eps: Vec<Scalar> = eps_list.iter().map(|e| Scalar::new(*e, 0.0)).collect();
    let (xi, values) = confluence_values(target, base, pt, &eps, pol)?;
    let errors: Vec<f64> = values.iter().map(|v| (v - xi).norm()).collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]) || errors.iter().all(|e| *e == 0.0);
    Ok(LimitReport {
        target,
        eps: eps_list.to_vec(),
        errors,
        xi_value: xi,
        monotone,
    })
}

/// [`LimitReport`] with squared errors kept as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactLimitReport {
    pub report: LimitReport,
    pub errors_sq: Vec<BigRational>,
}

impl ExactLimitReport {
    pub fn passes(&self, factor: &BigRational) -> bool {
        let e = &self.errors_sq;
        if e.iter().all(|v| v.is_zero()) {
            return true;
        }
        let monotone = e.windows(2).all(|w| w[1] < w[0]);
        let (first, last) = (&e[0], &e[e.len() - 1]);
        monotone && *last <= factor * factor * first
    }
}

/// Exact-arithmetic variant of [`limit_degeneration`]; the parent lattice
/// must terminate for every epsilon.
pub fn limit_degeneration_exact(
    target: XiVariant,
    base: &XiParams<ExactScalar>,
    pt: &Point<ExactScalar>,
    eps_list: &[BigRational],
    pol: &TruncationPolicy,
) -> Result<ExactLimitReport> {
    check_eps(
        eps_list.len(),
        eps_list.windows(2).all(|w| w[1] < w[0]),
        eps_list.iter().all(|e| e.is_positive()),
    )?;
    let eps: Vec<ExactScalar> = eps_list.iter().map(|e| ExactScalar::new(e.clone(), BigRational::zero())).collect();
    let (xi, values) = confluence_values(target, base, pt, &eps, pol)?;
    let errors_sq: Vec<BigRational> = values.iter().map(|v| (v.clone() - xi.clone()).norm_sqr()).collect();
    let errors: Vec<f64> = errors_sq.iter().map(|q| q.to_f64().unwrap_or(f64::INFINITY).sqrt()).collect();
    let monotone = errors_sq.windows(2).all(|w| w[1] < w[0]) || errors_sq.iter().all(|v| v.is_zero());
    Ok(ExactLimitReport {
        report: LimitReport {
            target,
            eps: eps_list.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)).collect(),
            errors,
            xi_value: xi.to_scalar(),
            monotone,
        },
        errors_sq,
    })
}
