//! Scalars, Pochhammer symbols, the complex gamma function and small
//! combinatorial helpers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = Complex<f64>;
pub type Rational = BigRational;
pub type ExactScalar = Complex<BigRational>;

/// Integer snapping tolerance for float parameters.
pub const SNAP_TOL: f64 = 1e-9;

/// Arithmetic shared by the float and exact-rational evaluation paths.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_exact(q: &ExactScalar) -> Self;
    /// Only the float field can represent arbitrary floats.
    fn from_scalar(z: Scalar) -> Option<Self>;
    fn to_scalar(&self) -> Scalar;
    fn magnitude(&self) -> f64 {
        self.to_scalar().norm()
    }
    /// Integer value, snapped within [`SNAP_TOL`] in float mode.
    fn as_integer(&self) -> Option<i64>;
    fn is_exact() -> bool;
    fn is_zero_value(&self) -> bool;
    fn is_finite_value(&self) -> bool;

    fn powi(&self, n: i64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc * self.clone();
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    fn nonpositive_integer(&self) -> Option<i64> {
        self.as_integer().filter(|v| *v <= 0)
    }

    fn nonnegative_integer(&self) -> Option<i64> {
        self.as_integer().filter(|v| *v >= 0)
    }
}

impl Field for Scalar {
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }
    fn from_exact(q: &ExactScalar) -> Self {
        exact_to_scalar(q)
    }
    fn from_scalar(z: Scalar) -> Option<Self> {
        Some(z)
    }
    fn to_scalar(&self) -> Scalar {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn as_integer(&self) -> Option<i64> {
        if !self.is_finite_value() || self.im.abs() > SNAP_TOL {
            return None;
        }
        let r = self.re.round();
        if (self.re - r).abs() <= SNAP_TOL && r.abs() < 9.0e15 {
            Some(r as i64)
        } else {
            None
        }
    }
    fn is_exact() -> bool {
        false
    }
    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Field for ExactScalar {
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn from_exact(q: &ExactScalar) -> Self {
        q.clone()
    }
    fn from_scalar(_z: Scalar) -> Option<Self> {
        None
    }
    fn to_scalar(&self) -> Scalar {
        exact_to_scalar(self)
    }
    fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }
    fn is_exact() -> bool {
        true
    }
    fn is_zero_value(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_finite_value(&self) -> bool {
        true
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn exact_to_scalar(q: &ExactScalar) -> Scalar {
    Complex::new(rational_to_f64(&q.re), rational_to_f64(&q.im))
}

/// `(a)_n = a (a+1) ... (a+n-1)`, computed by repeated multiplication so that
/// nonpositive-integer hits give an exact zero.
pub fn rising_factorial<S: Field>(a: &S, n: u64) -> S {
    let mut acc = S::one();
    for i in 0..n {
        acc = acc * (a.clone() + S::from_i64(i as i64));
    }
    acc
}

/// Falling factorial `t (t-1) ... (t-n+1) = (-1)^n (-t)_n`.
pub fn falling_factorial<S: Field>(t: &S, n: u64) -> S {
    if let Some(j) = t.nonnegative_integer() {
        if n as i128 > j as i128 {
            return S::zero();
        }
    }
    let mut acc = S::one();
    for i in 0..n {
        acc = acc * (t.clone() - S::from_i64(i as i64));
    }
    acc
}

/// `(-1)^{mk} (-t)_{mk}` by direct product.
pub fn pochhammer_scaled<S: Field>(t: &S, k: u32, m: u64) -> S {
    if k == 0 || m == 0 {
        return S::one();
    }
    falling_factorial(t, m * k as u64)
}

/// The same quantity through `k^{mk} prod_{i<k} ((-t+i)/k)_m`.
pub fn pochhammer_scaled_factorized<S: Field>(t: &S, k: u32, m: u64) -> S {
    if k == 0 || m == 0 {
        return S::one();
    }
    let kk = S::from_i64(k as i64);
    let mut acc = S::one();
    for i in 0..k {
        let base = (S::from_i64(i as i64) - t.clone()) / kk.clone();
        acc = acc * rising_factorial(&base, m);
    }
    let mk = (m * k as u64) as i64;
    let scale = kk.powi(mk);
    let sign = if mk % 2 == 0 { S::one() } else { -S::one() };
    sign * scale * acc
}

pub fn factorial<S: Field>(n: u64) -> S {
    rising_factorial(&S::one(), n)
}

/// Binomial coefficient; exact for results below 2^128.
pub fn binomial(r: u64, s: u64) -> u128 {
    if s > r {
        return 0;
    }
    let s = s.min(r - s);
    let mut acc: u128 = 1;
    for i in 0..s {
        acc = acc * (r - i) as u128 / (i + 1) as u128;
    }
    acc
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex gamma function (Lanczos, g = 7, with reflection for Re z < 1/2).
pub fn complex_gamma(z: Scalar) -> Result<Scalar> {
    if !z.is_finite_value() {
        return Err(Error::InvalidParams(format!("gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(format!("gamma at nonpositive integer {}", z.re)));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Scalar) -> Scalar {
    let pi = std::f64::consts::PI;
    if z.re < 0.5 {
        let s = (z * pi).sin();
        return Complex::new(pi, 0.0) / (s * gamma_unchecked(Complex::new(1.0, 0.0) - z));
    }
    let zm = z - 1.0;
    let mut acc = Complex::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (zm + i as f64);
    }
    let w = zm + LANCZOS_G + 0.5;
    let log = (zm + 0.5) * w.ln() - w;
    (2.0 * pi).sqrt() * log.exp() * acc
}

/// Parses a decimal, fraction or `a+bi` literal into an exact value.
pub fn parse_exact(text: &str) -> Result<ExactScalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) {
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let ch = bytes[idx];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E' | b'/') {
                split = Some(idx);
                break;
            }
        }
        let (re_txt, im_txt) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_txt.is_empty() {
            BigRational::zero()
        } else {
            parse_real(re_txt)?
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_real(t)?,
        };
        return Ok(Complex::new(re, im));
    }
    Ok(Complex::new(parse_real(&s)?, BigRational::zero()))
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    parse_exact(text).map(|q| exact_to_scalar(&q))
}

fn parse_real(text: &str) -> Result<Rational> {
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_decimal(num)?;
        let d = parse_decimal(den)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed number `{text}`"));
    let (neg, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(idx) => {
            let e: i64 = body[idx + 1..].parse().map_err(|_| bad())?;
            (&body[..idx], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.abs() > 4000 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift > 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else if shift < 0 {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `a+bi` rendering with shortest round-trip floats.
pub fn format_scalar(z: Scalar) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_exact(q: &ExactScalar) -> String {
    if q.im.is_zero() {
        format_rational(&q.re)
    } else if q.im.is_negative() {
        format!("{}-{}i", format_rational(&q.re), format_rational(&-q.im.clone()))
    } else {
        format!("{}+{}i", format_rational(&q.re), format_rational(&q.im))
    }
}

pub fn c(re: f64, im: f64) -> Scalar {
    Complex::new(re, im)
}

pub fn r(re: f64) -> Scalar {
    Complex::new(re, 0.0)
}
