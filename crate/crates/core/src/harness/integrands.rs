//! Test integrands with closed-form derivative oracles.

use std::sync::{Arc, Mutex};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::exact::ComplexRational;
use crate::numeric::{Complex, Precision};
use crate::rules::{Integrand, IntegrandKind, OracleError};

/// Highest derivative order the built-in oracles accept.
pub const ORACLE_MAX_ORDER: u32 = 64;

fn check_order(upto: u32, max: u32) -> Result<(), OracleError> {
    if upto > max {
        return Err(OracleError::new(
            upto,
            format!("derivative order {upto} exceeds the oracle limit {max}"),
        ));
    }
    Ok(())
}

/// `i^k z`.
fn times_i_pow(z: Complex, k: u32) -> Complex {
    match k % 4 {
        0 => z,
        1 => z.mul_i(),
        2 => -z,
        _ => -z.mul_i(),
    }
}

/// `v(theta) = 1 / (e^b + e^{i theta})`, expanded as
/// `sum_{l >= 0} (-1)^l e^{-b(l+1)} e^{i l theta}` and differentiated termwise.
#[derive(Clone, Debug)]
pub struct GeometricFourier {
    b: Float,
}

impl GeometricFourier {
    pub fn new(b: Float) -> Self {
        GeometricFourier { b }
    }

    pub fn b(&self) -> &Float {
        &self.b
    }

    /// Closed form of `v` itself.
    pub fn value(&self, theta: &Float, prec: Precision) -> Complex {
        let eb = Float::with_val(prec.bits(), self.b.exp_ref());
        let mut z = Complex::cis(&Float::with_val(prec.bits(), theta));
        z.re += &eb;
        z.recip()
    }
}

impl Integrand for GeometricFourier {
    fn kind(&self) -> IntegrandKind {
        IntegrandKind::Periodic
    }

    fn max_order(&self) -> u32 {
        ORACLE_MAX_ORDER
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> Result<Vec<Complex>, OracleError> {
        check_order(upto, ORACLE_MAX_ORDER)?;
        let bits = prec.bits();
        let r = Float::with_val(bits, -&self.b).exp();
        let eps = Float::with_val(bits, 1u32) >> bits;
        // u = -r e^{i theta}; term_l = r u^l
        let u = Complex::cis(&Float::with_val(bits, x)).scale(&Float::with_val(bits, -&r));
        let mut base = Complex::from_real(r.clone());
        let mut base_abs = r.clone();
        let mut out = vec![Complex::zero(prec); upto as usize + 1];
        let mut mags = vec![Float::with_val(bits, 0u32); upto as usize + 1];
        let mut ell: u64 = 0;
        loop {
            let lf = Float::with_val(bits, ell);
            let mut pow = Float::with_val(bits, 1u32);
            let mut done = true;
            for k in 0..=upto {
                if k > 0 {
                    pow *= &lf;
                }
                if ell > 0 || k == 0 {
                    let term = times_i_pow(base.scale(&pow), k);
                    out[k as usize] += &term;
                    mags[k as usize] += Float::with_val(bits, &base_abs * &pow);
                }
                // tail after this term, once the term ratio drops below 1
                if ell == 0 {
                    done = false;
                    continue;
                }
                let ratio = Float::with_val(bits, Float::with_val(bits, ell + 1) / ell).pow(k) * &r;
                if ratio >= 1 {
                    done = false;
                    continue;
                }
                let term_abs = Float::with_val(bits, &base_abs * &pow);
                let tail = term_abs * &ratio / (1u32 - ratio);
                if tail > Float::with_val(bits, &mags[k as usize] * &eps) {
                    done = false;
                }
            }
            if done {
                return Ok(out);
            }
            ell += 1;
            if ell > 1_000_000 {
                return Err(OracleError::new(upto, "geometric Fourier series failed to converge"));
            }
            base = &base * &u;
            base_abs *= &r;
        }
    }
}

/// `e^{cos theta} = I_0(1) + 2 sum_{l >= 1} I_l(1) cos(l theta)`.
#[derive(Debug, Default)]
pub struct ExpCos {
    cache: Mutex<Vec<(u32, Arc<Vec<Float>>)>>,
}

impl ExpCos {
    pub fn new() -> Self {
        Self::default()
    }

    /// `I_l(1)` for `l = 0..=T`, `T` large enough for every order up to
    /// [`ORACLE_MAX_ORDER`] at `bits` of precision.
    pub fn bessel_values(&self, bits: u32) -> Arc<Vec<Float>> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((_, v)) = cache.iter().find(|(b, _)| *b == bits) {
            return v.clone();
        }
        let values = Arc::new(bessel_i_at_one(bits));
        cache.push((bits, values.clone()));
        values
    }

    pub fn value(theta: &Float, prec: Precision) -> Float {
        Float::with_val(prec.bits(), theta.cos_ref()).exp()
    }
}

/// Number of Bessel terms whose contribution `(1/2)^l l^64 / l!` can exceed
/// `2^-(bits + 64)`.
fn bessel_term_count(bits: u32) -> u32 {
    let target = -((bits + 64) as f64);
    let mut log2_fact = 0.0;
    for t in 1..100_000u32 {
        log2_fact += (t as f64).log2();
        let log2_term = -(t as f64) - log2_fact + ORACLE_MAX_ORDER as f64 * (t as f64).log2();
        if t > ORACLE_MAX_ORDER && log2_term < target {
            return t;
        }
    }
    100_000
}

/// Miller's downward recurrence `I_{l-1} = 2l I_l + I_{l+1}` at `x = 1`,
/// normalized by `e = I_0 + 2 sum I_l`.
fn bessel_i_at_one(bits: u32) -> Vec<Float> {
    let t = bessel_term_count(bits);
    let start = 2 * t + 20;
    let wp = bits + 64;
    let mut vals = vec![Float::with_val(wp, 0u32); start as usize + 2];
    vals[start as usize] = Float::with_val(wp, 1u32);
    for l in (1..=start).rev() {
        let next = Float::with_val(wp, &vals[l as usize] * (2 * l)) + &vals[l as usize + 1];
        vals[l as usize - 1] = next;
    }
    let mut norm = Float::with_val(wp, 0u32);
    for v in vals.iter().skip(1) {
        norm += v;
    }
    norm *= 2u32;
    norm += &vals[0];
    let e = Float::with_val(wp, 1u32).exp();
    let scale = e / norm;
    vals.truncate(t as usize + 1);
    vals.into_iter()
        .map(|v| Float::with_val(bits, v * &scale))
        .collect()
}

/// `I_0(1) = sum_j (1/4)^j / (j!)^2`, independent of the recurrence.
pub fn bessel_i0_at_one(prec: Precision) -> Float {
    let wp = prec.bits() + 32;
    let eps = Float::with_val(wp, 1u32) >> (prec.bits() + 16);
    let mut term = Float::with_val(wp, 1u32);
    let mut acc = Float::with_val(wp, 1u32);
    let mut j = 1u32;
    loop {
        term /= 4u32 * j * j;
        acc += &term;
        if term < eps {
            break;
        }
        j += 1;
    }
    Float::with_val(prec.bits(), acc)
}

impl Integrand for ExpCos {
    fn kind(&self) -> IntegrandKind {
        IntegrandKind::Periodic
    }

    fn max_order(&self) -> u32 {
        ORACLE_MAX_ORDER
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> Result<Vec<Complex>, OracleError> {
        check_order(upto, ORACLE_MAX_ORDER)?;
        let bits = prec.bits();
        let bessel = self.bessel_values(bits);
        let mut out = vec![Float::with_val(bits, 0u32); upto as usize + 1];
        out[0] += &bessel[0];
        for (l, i_l) in bessel.iter().enumerate().skip(1) {
            let w = Float::with_val(bits, i_l * 2u32);
            let angle = Float::with_val(bits, x * l as u32);
            let (s, c) = angle.sin_cos(Float::new(bits));
            let mut pow = w;
            for k in 0..=upto {
                if k > 0 {
                    pow *= l as u32;
                }
                // d^k/dx^k cos(l x) = l^k cos(l x + k pi/2)
                let trig = match k % 4 {
                    0 => Float::with_val(bits, &pow * &c),
                    1 => -Float::with_val(bits, &pow * &s),
                    2 => -Float::with_val(bits, &pow * &c),
                    _ => Float::with_val(bits, &pow * &s),
                };
                out[k as usize] += trig;
            }
        }
        Ok(out.into_iter().map(Complex::from_real).collect())
    }
}

/// `w(x) = cos(c x) / (x^2 + L^2)` with `c = 2 pi (D/2 + 1) / h`.
#[derive(Clone, Debug)]
pub struct Sharpness {
    d: u32,
    h: Rational,
    l: Rational,
}

impl Sharpness {
    pub fn new(d: u32, h: Rational, l: Rational) -> Self {
        Sharpness { d, h, l }
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn l(&self) -> &Rational {
        &self.l
    }

    /// `c = 2 pi (D/2 + 1) / h`.
    pub fn frequency(&self, prec: Precision) -> Float {
        let bits = prec.bits();
        Float::with_val(bits, prec.two_pi() * (self.d / 2 + 1)) / Float::with_val(bits, &self.h)
    }

    pub fn value(&self, x: &Float, prec: Precision) -> Float {
        let bits = prec.bits();
        let c = self.frequency(prec);
        let num = Float::with_val(bits, &c * x).cos();
        let l2 = Float::with_val(bits, Rational::from(&self.l * &self.l));
        num / (Float::with_val(bits, x.square_ref()) + l2)
    }
}

/// `d^n/dx^n 1/(x^2 + L^2) = (-1)^n n! Im[(x - iL)^{-n-1}] / L`.
fn lorentzian_derivatives(x: &Float, l: &Float, upto: u32, bits: u32) -> Vec<Float> {
    let z = Complex::new(Float::with_val(bits, x), -Float::with_val(bits, l)).recip();
    let mut zp = z.clone();
    let mut fact = Float::with_val(bits, 1u32);
    let mut out = Vec::with_capacity(upto as usize + 1);
    for n in 0..=upto {
        if n > 0 {
            fact *= n;
            zp = &zp * &z;
        }
        let mut v = Float::with_val(bits, &zp.im * &fact) / l;
        if n % 2 == 1 {
            v = -v;
        }
        out.push(v);
    }
    out
}

impl Integrand for Sharpness {
    fn kind(&self) -> IntegrandKind {
        IntegrandKind::RealLine
    }

    fn max_order(&self) -> u32 {
        ORACLE_MAX_ORDER
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> Result<Vec<Complex>, OracleError> {
        check_order(upto, ORACLE_MAX_ORDER)?;
        let bits = prec.bits();
        let c = self.frequency(prec);
        let l = Float::with_val(bits, &self.l);
        let g = lorentzian_derivatives(x, &l, upto, bits);
        let (s, co) = Float::with_val(bits, &c * x).sin_cos(Float::new(bits));
        // cos^{(j)}(c x) = c^j cos(c x + j pi/2)
        let mut trig = Vec::with_capacity(upto as usize + 1);
        let mut cj = Float::with_val(bits, 1u32);
        for j in 0..=upto {
            if j > 0 {
                cj *= &c;
            }
            let t = match j % 4 {
                0 => Float::with_val(bits, &cj * &co),
                1 => -Float::with_val(bits, &cj * &s),
                2 => -Float::with_val(bits, &cj * &co),
                _ => Float::with_val(bits, &cj * &s),
            };
            trig.push(t);
        }
        let mut out = Vec::with_capacity(upto as usize + 1);
        for n in 0..=upto {
            let mut acc = Float::with_val(bits, 0u32);
            for j in 0..=n {
                let binom = Integer::from(n).binomial(j);
                acc += Float::with_val(bits, &trig[j as usize] * &g[(n - j) as usize]) * binom;
            }
            out.push(Complex::from_real(acc));
        }
        Ok(out)
    }
}

/// `w(x) = e^{-x^2}`, with `w^{(n)} = (-1)^n H_n(x) e^{-x^2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gaussian;

impl Gaussian {
    pub fn value(x: &Float, prec: Precision) -> Float {
        (-Float::with_val(prec.bits(), x.square_ref())).exp()
    }
}

impl Integrand for Gaussian {
    fn kind(&self) -> IntegrandKind {
        IntegrandKind::RealLine
    }

    fn max_order(&self) -> u32 {
        ORACLE_MAX_ORDER
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> Result<Vec<Complex>, OracleError> {
        check_order(upto, ORACLE_MAX_ORDER)?;
        let bits = prec.bits();
        let e = Self::value(x, prec);
        let mut h_prev = Float::with_val(bits, 0u32);
        let mut h_cur = Float::with_val(bits, 1u32);
        let mut out = Vec::with_capacity(upto as usize + 1);
        for n in 0..=upto {
            let mut v = Float::with_val(bits, &h_cur * &e);
            if n % 2 == 1 {
                v = -v;
            }
            out.push(Complex::from_real(v));
            // H_{n+1} = 2x H_n - 2n H_{n-1}
            let next = Float::with_val(bits, x * &h_cur) * 2u32 - Float::with_val(bits, &h_prev * (2 * n));
            h_prev = std::mem::replace(&mut h_cur, next);
        }
        Ok(out)
    }
}

/// Finite Fourier series `sum_l c_l e^{i l theta}` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSeries {
    terms: Vec<(i64, ComplexRational)>,
}

impl FourierSeries {
    pub fn new(mut terms: Vec<(i64, ComplexRational)>) -> Self {
        terms.sort_by_key(|(l, _)| *l);
        FourierSeries { terms }
    }

    pub fn terms(&self) -> &[(i64, ComplexRational)] {
        &self.terms
    }

    /// `2 pi c_0`.
    pub fn integral(&self, prec: Precision) -> Complex {
        let c0 = self
            .terms
            .iter()
            .filter(|(l, _)| *l == 0)
            .fold(ComplexRational::zero(), |acc, (_, c)| acc + c.clone());
        c0.to_complex(prec).scale(&prec.two_pi())
    }
}

impl Integrand for FourierSeries {
    fn kind(&self) -> IntegrandKind {
        IntegrandKind::Periodic
    }

    fn max_order(&self) -> u32 {
        ORACLE_MAX_ORDER
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> Result<Vec<Complex>, OracleError> {
        check_order(upto, ORACLE_MAX_ORDER)?;
        let bits = prec.bits();
        let mut out = vec![Complex::zero(prec); upto as usize + 1];
        for (l, c) in &self.terms {
            let angle = Float::with_val(bits, x * *l);
            let mut term = &c.to_complex(prec) * &Complex::cis(&angle);
            let lf = Float::with_val(bits, *l);
            for k in 0..=upto {
                if k > 0 {
                    term = term.scale(&lf).mul_i();
                }
                out[k as usize] += &term;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(256).unwrap()
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        let scale = b.abs().to_f64().max(1.0);
        (a - b).abs().to_f64() <= tol * scale
    }

    #[test]
    fn geometric_series_matches_closed_form() {
        let b = Float::with_val(300, 2u32).ln();
        let v = GeometricFourier::new(b);
        for t in [0.0, 0.3, 1.7, 3.0, 6.0] {
            let x = Float::with_val(256, t);
            let d = v.derivatives(&x, 3, p()).unwrap();
            assert!(close(&d[0], &v.value(&x, p()), 1e-70));
        }
    }

    #[test]
    fn bessel_normalization_and_i0() {
        let e = ExpCos::new();
        let vals = e.bessel_values(256);
        let i0 = bessel_i0_at_one(p());
        let diff = Float::with_val(256, &vals[0] - &i0).abs().to_f64();
        assert!(diff < 1e-70, "{diff}");
        // I_1(1) = 0.565159103992485...
        assert!((vals[1].to_f64() - 0.565_159_103_992_485).abs() < 1e-15);
    }

    #[test]
    fn exp_cos_value() {
        let e = ExpCos::new();
        for t in [0.0, 0.5, 2.0, 4.5] {
            let x = Float::with_val(256, t);
            let d = e.derivatives(&x, 2, p()).unwrap();
            let want = Complex::from_real(ExpCos::value(&x, p()));
            assert!(close(&d[0], &want, 1e-70));
            // v' = -sin(x) v
            let dv = Float::with_val(256, x.sin_ref()) * ExpCos::value(&x, p());
            assert!(close(&d[1], &Complex::from_real(-dv), 1e-70));
        }
    }

    #[test]
    fn sharpness_value_and_first_derivative() {
        let s = Sharpness::new(2, Rational::from(1), Rational::from(1));
        let x = Float::with_val(256, 0.37);
        let d = s.derivatives(&x, 1, p()).unwrap();
        assert!(close(&d[0], &Complex::from_real(s.value(&x, p())), 1e-70));
        // w' = -c sin(cx)/(x^2+L^2) - 2x cos(cx)/(x^2+L^2)^2
        let c = s.frequency(p());
        let den = Float::with_val(256, x.square_ref()) + 1u32;
        let cx = Float::with_val(256, &c * &x);
        let t1 = -Float::with_val(256, &c * Float::with_val(256, cx.sin_ref())) / &den;
        let t2 = -Float::with_val(256, &x * Float::with_val(256, cx.cos_ref())) * 2u32 / Float::with_val(256, den.square_ref());
        assert!(close(&d[1], &Complex::from_real(t1 + t2), 1e-60));
    }

    #[test]
    fn fourier_series_derivatives() {
        // 1/2 + (1/4) e^{2i theta}
        let f = FourierSeries::new(vec![
            (0, ComplexRational::real(Rational::from((1, 2)))),
            (2, ComplexRational::real(Rational::from((1, 4)))),
        ]);
        let x = Float::with_val(256, 0u32);
        let d = f.derivatives(&x, 2, p()).unwrap();
        assert_eq!(d[0].re.to_f64(), 0.75);
        assert_eq!(d[1].im.to_f64(), 0.5);
        assert_eq!(d[2].re.to_f64(), -1.0);
        assert!(close(&f.integral(p()), &Complex::from_real(p().pi()), 1e-70));
    }

    #[test]
    fn order_limit() {
        let x = Float::with_val(64, 0u32);
        assert!(Gaussian.derivatives(&x, ORACLE_MAX_ORDER + 1, p()).is_err());
    }
}
