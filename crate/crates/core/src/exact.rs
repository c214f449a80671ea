//! Exact rational scalars, their JSON form and decimal rendering.
//!
//! [`Rational`] is GMP's `mpq_t` through `rug`; it keeps the denominator
//! positive and the fraction reduced after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Complex, Precision};

/// Significant digits used when no explicit count is requested.
pub const DEFAULT_DIGITS: usize = 17;

/// An exact complex rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational {
            re,
            im: Rational::new(),
        }
    }

    pub fn imag(im: Rational) -> Self {
        ComplexRational {
            re: Rational::new(),
            im,
        }
    }

    pub fn one() -> Self {
        Self::real(Rational::from(1))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == Ordering::Equal
    }

    /// `self * i^k`.
    pub fn mul_i_pow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => ComplexRational::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => ComplexRational::new(self.im.clone(), -self.re.clone()),
        }
    }

    /// `(i * ell)^k` for integer `ell`.
    pub fn i_times_pow(ell: &Integer, k: u32) -> Self {
        let mag = Rational::from(Integer::from(ell.pow(k)));
        ComplexRational::real(mag).mul_i_pow(k)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        ComplexRational::new(
            Rational::from(&self.re * s),
            Rational::from(&self.im * s),
        )
    }

    pub fn to_complex(&self, prec: Precision) -> Complex {
        Complex::from_rational(prec, &self.re, &self.im)
    }
}

impl Add for ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: ComplexRational) -> ComplexRational {
        ComplexRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: ComplexRational) -> ComplexRational {
        ComplexRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        ComplexRational::new(re, im)
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-self.re, -self.im)
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.cmp0(), self.im.cmp0()) {
            (_, Ordering::Equal) => write!(f, "{}", self.re),
            (Ordering::Equal, _) => write!(f, "{}i", self.im),
            (_, Ordering::Less) => write!(f, "{}-{}i", self.re, Rational::from(-&self.im)),
            _ => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

/// `{"num": "...", "den": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = Error;
    fn try_from(j: &RationalJson) -> Result<Rational> {
        let num: Integer = j
            .num
            .parse()
            .map_err(|e| Error::Parse(format!("numerator {:?}: {e}", j.num)))?;
        let den: Integer = j
            .den
            .parse()
            .map_err(|e| Error::Parse(format!("denominator {:?}: {e}", j.den)))?;
        if den.cmp0() == Ordering::Equal {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::from((num, den)))
    }
}

/// `{"re": {...}, "im": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRationalJson {
    pub re: RationalJson,
    pub im: RationalJson,
}

impl From<&ComplexRational> for ComplexRationalJson {
    fn from(z: &ComplexRational) -> Self {
        ComplexRationalJson {
            re: (&z.re).into(),
            im: (&z.im).into(),
        }
    }
}

impl TryFrom<&ComplexRationalJson> for ComplexRational {
    type Error = Error;
    fn try_from(j: &ComplexRationalJson) -> Result<ComplexRational> {
        Ok(ComplexRational::new((&j.re).try_into()?, (&j.im).try_into()?))
    }
}

/// Parse `"p/q"`, an integer, or a finite decimal like `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(q);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let digits: Integer = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let scale = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let mut q = Rational::from(digits);
    if scale >= 0 {
        q *= ten.pow(scale as u32);
    } else {
        q /= ten.pow((-scale) as u32);
    }
    Ok(if neg { -q } else { q })
}

fn round_half_even(q: &Rational) -> Integer {
    let floor = Integer::from(q.floor_ref());
    let frac = Rational::from(q - &floor);
    match frac.cmp(&Rational::from((1, 2))) {
        Ordering::Less => floor,
        Ordering::Greater => floor + 1u32,
        Ordering::Equal => {
            if floor.is_even() {
                floor
            } else {
                floor + 1u32
            }
        }
    }
}

fn pow10(e: i64) -> Rational {
    let p = Integer::from(Integer::u_pow_u(10, e.unsigned_abs() as u32));
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1), p))
    }
}

/// Render `q` with `digits` significant digits, rounding half to even.
///
/// Positional notation is used for decimal exponents in `-5..digits`,
/// scientific notation otherwise. Trailing fractional zeros are dropped.
pub fn render_rational(q: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if q.cmp0() == Ordering::Equal {
        return "0".to_string();
    }
    let neg = q.cmp0() == Ordering::Less;
    let a = Rational::from(q.abs_ref());

    // log10 estimate from bit lengths, then fix up.
    let bits = a.numer().significant_bits() as i64 - a.denom().significant_bits() as i64;
    let mut e = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    while a >= pow10(e + 1) {
        e += 1;
    }
    while a < pow10(e) {
        e -= 1;
    }
    let mut mant = round_half_even(&(&a * pow10(digits as i64 - 1 - e)));
    if mant >= Integer::from(Integer::u_pow_u(10, digits as u32)) {
        mant /= 10u32;
        e += 1;
    }
    let s = mant.to_string();
    let sign = if neg { "-" } else { "" };

    if e >= -5 && e < digits as i64 {
        let out = if e >= 0 {
            let split = (e + 1) as usize;
            let (ip, fp) = s.split_at(split);
            let fp = fp.trim_end_matches('0');
            if fp.is_empty() {
                ip.to_string()
            } else {
                format!("{ip}.{fp}")
            }
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{}", s.trim_end_matches('0'))
        };
        format!("{sign}{out}")
    } else {
        let (lead, rest) = s.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{lead}e{e}")
        } else {
            format!("{sign}{lead}.{rest}e{e}")
        }
    }
}

/// Render a float exactly (it is a dyadic rational) with `digits` significant digits.
pub fn render_float(x: &Float, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    match x.to_rational() {
        Some(q) => render_rational(&q, digits),
        None => "nan".to_string(),
    }
}
