//! Extended-precision scalars used for rule and bound evaluation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Working precision in bits. Never below IEEE double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 53;
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Config(format!(
                "precision of {bits} bits is below the minimum of {} bits",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision with `extra` guard bits added.
    pub fn with_guard(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    pub fn zero(self) -> Float {
        Float::new(self.0)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.0, Constant::Pi)
    }

    pub fn two_pi(self) -> Float {
        self.pi() * 2u32
    }

    pub fn from_rational(self, q: &Rational) -> Float {
        Float::with_val(self.0, q)
    }

    pub fn from_f64(self, x: f64) -> Float {
        Float::with_val(self.0, x)
    }

    /// `2^-(bits - slack)`, the level below which results are treated as roundoff.
    pub fn floor(self, slack: u32) -> Float {
        let exp = -(self.0 as i32) + slack as i32;
        Float::with_val(self.0, 1u32) << exp
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// A complex number with [`Float`] parts of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(prec: Precision) -> Self {
        Complex {
            re: Float::new(prec.bits()),
            im: Float::new(prec.bits()),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn from_rational(prec: Precision, re: &Rational, im: &Rational) -> Self {
        Complex {
            re: prec.from_rational(re),
            im: prec.from_rational(im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex { re: c, im: s }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiply by `i`.
    pub fn mul_i(self) -> Self {
        Complex {
            re: -self.im,
            im: self.re,
        }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let denom = Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref());
        Complex {
            re: Float::with_val(p, &self.re / &denom),
            im: -Float::with_val(p, &self.im / &denom),
        }
    }

    /// Round both parts to `prec`.
    pub fn rounded(mut self, prec: Precision) -> Self {
        self.re.set_prec(prec.bits());
        self.im.set_prec(prec.bits());
        self
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(mut self, rhs: Complex) -> Complex {
        self += &rhs;
        self
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        Complex { re, im }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im >= 0.0 {
            write!(f, "{re:e}+{im:e}i")
        } else {
            write!(f, "{re:e}{im:e}i")
        }
    }
}
