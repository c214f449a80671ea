//! Generalized trapezoidal rules using derivative values at the nodes.
//!
//! Periodic, over `[0, 2pi]` with nodes `theta_j = 2 pi j / N`, `j = 1..=N`:
//!
//! ```text
//! I_{N,D} = (2pi/N) sum_j sum_{k=0}^{D} N^-k C_k v^(k)(theta_j)
//! ```
//!
//! Real line, nodes `x_j = j h`:
//!
//! ```text
//! I_{h,D} = h sum_j sum_{k=0}^{D} (h/2pi)^k B_k w^(k)(x_j)
//! ```
//!
//! Weights stay exact until they are scaled and rounded to the working
//! precision, right before the sum.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::coefficients::{CoeffFamily, CoeffSetA, CoeffSetB};
use crate::error::{Error, Result};
use crate::exact::ComplexRational;
use crate::numeric::{Complex, Precision};

/// Extra bits carried through every rule evaluation.
pub const GUARD_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegrandKind {
    /// `2 pi`-periodic, integrated over one period.
    Periodic,
    /// Decaying on the whole real line.
    RealLine,
}

impl fmt::Display for IntegrandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntegrandKind::Periodic => "periodic",
            IntegrandKind::RealLine => "real-line",
        })
    }
}

/// Why a derivative oracle could not produce a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleError {
    pub order: u32,
    pub reason: String,
}

impl OracleError {
    pub fn new(order: u32, reason: impl Into<String>) -> Self {
        OracleError {
            order,
            reason: reason.into(),
        }
    }
}

/// A function together with a derivative oracle.
///
/// Implementations must be safe to call from several threads at once.
pub trait Integrand: Send + Sync {
    fn kind(&self) -> IntegrandKind;

    /// Highest derivative order the oracle supports.
    fn max_order(&self) -> u32;

    /// `f^(k)(x)` for `k = 0..=upto`, accurate to about `prec` bits.
    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> std::result::Result<Vec<Complex>, OracleError>;

    /// `f^(k)(x)` alone.
    fn derivative(
        &self,
        x: &Float,
        k: u32,
        prec: Precision,
    ) -> std::result::Result<Complex, OracleError> {
        let mut all = self.derivatives(x, k, prec)?;
        all.pop()
            .ok_or_else(|| OracleError::new(k, "oracle returned no values"))
    }
}

/// Closure-backed integrand.
pub struct FnIntegrand<F> {
    kind: IntegrandKind,
    max_order: u32,
    f: F,
}

impl<F> FnIntegrand<F>
where
    F: Fn(&Float, u32, Precision) -> std::result::Result<Vec<Complex>, OracleError> + Send + Sync,
{
    pub fn new(kind: IntegrandKind, max_order: u32, f: F) -> Self {
        FnIntegrand { kind, max_order, f }
    }
}

impl<F> Integrand for FnIntegrand<F>
where
    F: Fn(&Float, u32, Precision) -> std::result::Result<Vec<Complex>, OracleError> + Send + Sync,
{
    fn kind(&self) -> IntegrandKind {
        self.kind
    }

    fn max_order(&self) -> u32 {
        self.max_order
    }

    fn derivatives(
        &self,
        x: &Float,
        upto: u32,
        prec: Precision,
    ) -> std::result::Result<Vec<Complex>, OracleError> {
        (self.f)(x, upto, prec)
    }
}

/// Exact weights `C_0..=C_D` of one rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleCoefficients {
    family: CoeffFamily,
    values: Vec<ComplexRational>,
}

impl RuleCoefficients {
    /// `D = 0`: the plain trapezoid rule.
    pub fn unit() -> Self {
        RuleCoefficients {
            family: CoeffFamily::Unit,
            values: vec![ComplexRational::one()],
        }
    }

    /// `B_0 = 1`, `B_{2m} = (-1)^{m+1}`, all others zero.
    pub fn bailey(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("Bailey correction needs m >= 1"));
        }
        let mut values = vec![ComplexRational::zero(); 2 * m as usize + 1];
        values[0] = ComplexRational::one();
        let sign = if m % 2 == 1 { 1 } else { -1 };
        values[2 * m as usize] = ComplexRational::real(Rational::from(sign));
        Ok(RuleCoefficients {
            family: CoeffFamily::Bailey,
            values,
        })
    }

    pub fn family(&self) -> CoeffFamily {
        self.family
    }

    pub fn order(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn values(&self) -> &[ComplexRational] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(ComplexRational::is_real)
    }
}

impl From<&CoeffSetA> for RuleCoefficients {
    fn from(a: &CoeffSetA) -> Self {
        RuleCoefficients {
            family: CoeffFamily::HalfPlane,
            values: a.values().to_vec(),
        }
    }
}

impl From<&CoeffSetB> for RuleCoefficients {
    fn from(b: &CoeffSetB) -> Self {
        RuleCoefficients {
            family: CoeffFamily::Strip,
            values: b.values().iter().cloned().map(ComplexRational::real).collect(),
        }
    }
}

fn check_oracle(
    f: &dyn Integrand,
    kind: IntegrandKind,
    order: u32,
) -> Result<()> {
    if f.kind() != kind {
        return Err(Error::domain(format!(
            "rule needs a {kind} integrand, got a {} one",
            f.kind()
        )));
    }
    if f.max_order() < order {
        return Err(Error::domain(format!(
            "rule of order {order} needs derivatives the oracle does not provide (max order {})",
            f.max_order()
        )));
    }
    Ok(())
}

fn eval_node(
    f: &dyn Integrand,
    x: &Float,
    weights: &[Complex],
    wp: Precision,
) -> Result<Complex> {
    let order = weights.len() as u32 - 1;
    let derivs = f.derivatives(x, order, wp).map_err(|e| Error::Oracle {
        point: x.to_string_radix(10, Some(20)),
        order: e.order,
        reason: e.reason,
    })?;
    if derivs.len() <= order as usize {
        return Err(Error::Oracle {
            point: x.to_string_radix(10, Some(20)),
            order: derivs.len() as u32,
            reason: format!("oracle returned {} values, expected {}", derivs.len(), order + 1),
        });
    }
    let mut acc = Complex::zero(wp);
    for (k, (w, d)) in weights.iter().zip(&derivs).enumerate() {
        if !d.is_finite() {
            return Err(Error::Oracle {
                point: x.to_string_radix(10, Some(20)),
                order: k as u32,
                reason: "non-finite derivative value".into(),
            });
        }
        if !w.is_zero() {
            acc += &(w * d);
        }
    }
    Ok(acc)
}

fn periodic_node(j: u32, n: u32, wp: Precision) -> Float {
    wp.two_pi() * j / n
}

/// Plain periodic trapezoid `(2pi/N) sum_j v(theta_j)`.
pub fn plain_trapezoid_periodic(v: &dyn Integrand, n: u32, prec: Precision) -> Result<Complex> {
    check_oracle(v, IntegrandKind::Periodic, 0)?;
    if n < 1 {
        return Err(Error::domain("periodic rule needs N >= 1"));
    }
    let wp = prec.with_guard(GUARD_BITS);
    let mut total = Complex::zero(wp);
    for j in 1..=n {
        let value = v
            .derivative(&periodic_node(j, n, wp), 0, wp)
            .map_err(|e| Error::Oracle {
                point: format!("theta_{j}"),
                order: e.order,
                reason: e.reason,
            })?;
        total += &value;
    }
    Ok(total.scale(&(wp.two_pi() / n)).rounded(prec))
}

/// `I_{N,D}` with the given weights; `D` is `coeffs.order()`.
pub fn trapezoid_periodic(
    v: &dyn Integrand,
    n: u32,
    coeffs: &RuleCoefficients,
    prec: Precision,
) -> Result<Complex> {
    let order = coeffs.order();
    check_oracle(v, IntegrandKind::Periodic, order)?;
    if n < 1 {
        return Err(Error::domain("periodic rule needs N >= 1"));
    }
    let wp = prec.with_guard(GUARD_BITS);
    let n_int = Integer::from(n);
    let mut scale = Rational::from(1);
    let weights: Vec<Complex> = coeffs
        .values()
        .iter()
        .map(|c| {
            let w = c.scale(&scale).to_complex(wp);
            scale /= &n_int;
            w
        })
        .collect();

    let mut total = Complex::zero(wp);
    for j in 1..=n {
        let node = eval_node(v, &periodic_node(j, n, wp), &weights, wp)?;
        total += &node;
    }
    Ok(total.scale(&(wp.two_pi() / n)).rounded(prec))
}

/// How the infinite real-line sum is cut off.
#[derive(Clone, Debug, PartialEq)]
pub enum TruncationPolicy {
    /// All nodes with `|x_j| <= window`.
    FixedWindow { window: f64 },
    /// Symmetric pairs `j, -j` are added until `consecutive_below`
    /// successive pairs have magnitude below `tail_tolerance`.
    Adaptive {
        tail_tolerance: f64,
        consecutive_below: u32,
        max_terms: u64,
    },
    /// For summands with algebraic decay: partial sums at
    /// `initial_terms * 2^i` nodes per side are Richardson-extrapolated in
    /// powers of `1/n` until successive diagonal estimates agree to
    /// `tolerance` (relative).
    Extrapolated {
        initial_terms: u64,
        max_levels: u32,
        tolerance: f64,
    },
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::Adaptive {
            tail_tolerance: 1e-30,
            consecutive_below: 8,
            max_terms: 1_000_000,
        }
    }
}

impl TruncationPolicy {
    /// Adaptive cutoff with the tail tolerance at the precision floor
    /// (clamped to the smallest normal `f64`), for fast-decaying summands.
    pub fn adaptive_for(prec: Precision) -> Self {
        let exp = -(prec.bits() as i32 + 8);
        TruncationPolicy::Adaptive {
            tail_tolerance: 2f64.powi(exp).max(f64::MIN_POSITIVE),
            consecutive_below: 8,
            max_terms: 1_000_000,
        }
    }

    /// Extrapolation settings suited to `1/x^2` decay with poles at
    /// distance up to a few dozen node spacings.
    pub fn extrapolated() -> Self {
        TruncationPolicy::Extrapolated {
            initial_terms: 64,
            max_levels: 12,
            tolerance: 1e-30,
        }
    }
}

/// Result of a real-line sum.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLineSum {
    pub value: Complex,
    /// Largest `|j|` included.
    pub terms: u64,
    /// Richardson levels used, for the extrapolated policy.
    pub levels: Option<u32>,
}

struct RealLineSummer<'a> {
    w: &'a dyn Integrand,
    h: Float,
    weights: Vec<Complex>,
    wp: Precision,
}

impl RealLineSummer<'_> {
    fn term(&self, j: i64) -> Result<Complex> {
        let x = Float::with_val(self.wp.bits(), &self.h * j);
        eval_node(self.w, &x, &self.weights, self.wp)
    }

    /// `t(j) + t(-j)` for `j >= 1`.
    fn pair(&self, j: u64) -> Result<Complex> {
        let plus = self.term(j as i64)?;
        let minus = self.term(-(j as i64))?;
        Ok(plus + minus)
    }
}

/// `I_{h,D}` with real weights `B_k`; the sum is truncated per `trunc`.
pub fn trapezoid_realline(
    w: &dyn Integrand,
    h: &Float,
    coeffs: &RuleCoefficients,
    trunc: &TruncationPolicy,
    prec: Precision,
) -> Result<RealLineSum> {
    let order = coeffs.order();
    check_oracle(w, IntegrandKind::RealLine, order)?;
    if !coeffs.is_real() {
        return Err(Error::domain("real-line rule needs real weights"));
    }
    if !order.is_multiple_of(2) {
        return Err(Error::domain(format!("real-line rule needs an even D, got {order}")));
    }
    if !(h.is_finite() && *h > 0) {
        return Err(Error::domain("step h must be positive and finite"));
    }
    let wp = prec.with_guard(GUARD_BITS);
    let h = Float::with_val(wp.bits(), h);
    let ratio = Float::with_val(wp.bits(), &h / wp.two_pi());
    let mut scale = Float::with_val(wp.bits(), 1u32);
    let weights = coeffs
        .values()
        .iter()
        .map(|c| {
            let w = Complex::from_real(Float::with_val(wp.bits(), &c.re) * &scale);
            scale *= &ratio;
            w
        })
        .collect();
    let summer = RealLineSummer {
        w,
        h: h.clone(),
        weights,
        wp,
    };

    let mut total = summer.term(0)?;
    let (total, terms, levels) = match *trunc {
        TruncationPolicy::FixedWindow { window } => {
            if !(window >= 0.0 && window.is_finite()) {
                return Err(Error::domain("truncation window must be finite and >= 0"));
            }
            let n = (Float::with_val(wp.bits(), window) / &h)
                .floor()
                .to_integer()
                .and_then(|i| i.to_u64())
                .ok_or_else(|| Error::domain("truncation window too large"))?;
            for j in 1..=n {
                total += &summer.pair(j)?;
            }
            (total, n, None)
        }
        TruncationPolicy::Adaptive {
            tail_tolerance,
            consecutive_below,
            max_terms,
        } => {
            let tol = Float::with_val(wp.bits(), tail_tolerance);
            let mut below = 0u32;
            let mut j = 0u64;
            let mut last = Float::with_val(wp.bits(), 0u32);
            while below < consecutive_below.max(1) {
                j += 1;
                if j > max_terms {
                    return Err(Error::Truncation(format!(
                        "adaptive sum still above tolerance {tail_tolerance:e} after {max_terms} \
                         node pairs (last pair magnitude {})",
                        last.to_f64()
                    )));
                }
                let pair = summer.pair(j)?;
                last = pair.abs() * &h;
                if last < tol {
                    below += 1;
                } else {
                    below = 0;
                }
                total += &pair;
            }
            (total, j, None)
        }
        TruncationPolicy::Extrapolated {
            initial_terms,
            max_levels,
            tolerance,
        } => {
            let (value, terms, levels) =
                richardson(&summer, total, initial_terms.max(1), max_levels, tolerance)?;
            (value, terms, Some(levels))
        }
    };
    Ok(RealLineSum {
        value: total.scale(&h).rounded(prec),
        terms,
        levels,
    })
}

fn richardson(
    summer: &RealLineSummer<'_>,
    mut partial: Complex,
    initial: u64,
    max_levels: u32,
    tolerance: f64,
) -> Result<(Complex, u64, u32)> {
    let wp = summer.wp;
    let tol = Float::with_val(wp.bits(), tolerance);
    let mut table: Vec<Vec<Complex>> = Vec::new();
    let mut done = 0u64;
    let mut last_change = None;
    for level in 0..=max_levels {
        let target = initial << level;
        for j in done + 1..=target {
            partial += &summer.pair(j)?;
        }
        done = target;

        let mut row = vec![partial.clone()];
        for k in 1..=level as usize {
            let factor = Float::with_val(wp.bits(), 1u32) << k as u32;
            let denom = Float::with_val(wp.bits(), &factor - 1u32);
            let hi = row[k - 1].scale(&factor);
            let diff = &hi - &table[level as usize - 1][k - 1];
            row.push(diff.scale(&Float::with_val(wp.bits(), 1u32 / &denom)));
        }
        if level >= 1 {
            let prev = &table[level as usize - 1][level as usize - 1];
            let cur = &row[level as usize];
            let change = (cur - prev).abs();
            let mag = cur.abs().max(&Float::with_val(wp.bits(), 1u32));
            if change <= Float::with_val(wp.bits(), &tol * &mag) {
                return Ok((cur.clone(), done, level));
            }
            last_change = Some(change.to_f64());
        }
        table.push(row);
    }
    Err(Error::Truncation(format!(
        "Richardson extrapolation did not reach tolerance {tolerance:e} after {max_levels} \
         levels ({done} node pairs, last change {:e})",
        last_change.unwrap_or(f64::NAN)
    )))
}

/// `I_h + E_2(h, m)`: the real-line rule with only `B_0` and `B_{2m}` set.
pub fn bailey_corrected_trapezoid(
    w: &dyn Integrand,
    h: &Float,
    m: u32,
    trunc: &TruncationPolicy,
    prec: Precision,
) -> Result<RealLineSum> {
    let coeffs = RuleCoefficients::bailey(m)?;
    trapezoid_realline(w, h, &coeffs, trunc, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{coeff_a, coeff_b};

    fn p() -> Precision {
        Precision::new(128).unwrap()
    }

    fn constant(kind: IntegrandKind) -> impl Integrand {
        FnIntegrand::new(kind, 40, |_x, upto, prec| {
            let mut out = vec![Complex::zero(prec); upto as usize + 1];
            out[0] = Complex::from_real(Float::with_val(prec.bits(), 1u32));
            Ok(out)
        })
    }

    /// `e^{i l theta}` with derivatives `(i l)^k e^{i l theta}`.
    fn mode(ell: i64) -> impl Integrand {
        FnIntegrand::new(IntegrandKind::Periodic, 40, move |x, upto, prec| {
            let theta = Float::with_val(prec.bits(), x * ell);
            let mut z = Complex::cis(&theta);
            let l = Float::with_val(prec.bits(), ell);
            let mut out = Vec::new();
            for _ in 0..=upto {
                out.push(z.clone());
                z = z.scale(&l).mul_i();
            }
            Ok(out)
        })
    }

    #[test]
    fn constant_integrates_to_two_pi() {
        let v = constant(IntegrandKind::Periodic);
        for d in [2, 4, 6] {
            let b = RuleCoefficients::from(&coeff_b(d).unwrap());
            let r = trapezoid_periodic(&v, 5, &b, p()).unwrap();
            assert_eq!(r.re, p().two_pi());
            assert!(r.im.is_zero());
        }
    }

    #[test]
    fn aliased_mode_looks_constant() {
        let n = 6;
        let v = mode(n as i64);
        let r = trapezoid_periodic(&v, n, &RuleCoefficients::unit(), p()).unwrap();
        let err = (&r - &Complex::from_real(p().two_pi())).abs();
        assert!(err < 1e-30, "{err}");
    }

    #[test]
    fn half_plane_rule_kills_low_aliases() {
        // E_{l,D} = 0 for 1 <= l <= D, so modes lN for those l integrate to 0.
        let n = 3;
        let a = RuleCoefficients::from(&coeff_a(2).unwrap());
        for l in 1..=2 {
            let r = trapezoid_periodic(&mode(l * n as i64), n, &a, p()).unwrap();
            assert!(r.abs() < 1e-30, "l={l}: {r}");
        }
        // l = 3 survives with 2 pi E_{3,2} = 2 pi.
        let r = trapezoid_periodic(&mode(3 * n as i64), n, &a, p()).unwrap();
        assert!((&r - &Complex::from_real(p().two_pi())).abs() < 1e-30);
    }

    #[test]
    fn kind_and_order_are_checked() {
        let v = constant(IntegrandKind::RealLine);
        let b = RuleCoefficients::from(&coeff_b(2).unwrap());
        assert!(matches!(trapezoid_periodic(&v, 4, &b, p()), Err(Error::Domain(_))));
        let low = FnIntegrand::new(IntegrandKind::Periodic, 1, |_x, upto, prec| {
            Ok(vec![Complex::zero(prec); upto as usize + 1])
        });
        assert!(matches!(trapezoid_periodic(&low, 4, &b, p()), Err(Error::Domain(_))));
        assert!(matches!(
            trapezoid_periodic(&constant(IntegrandKind::Periodic), 0, &b, p()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn oracle_failure_carries_point_and_order() {
        let bad = FnIntegrand::new(IntegrandKind::Periodic, 4, |_x, _upto, _prec| {
            Err(OracleError::new(3, "boom"))
        });
        let b = RuleCoefficients::from(&coeff_b(4).unwrap());
        match trapezoid_periodic(&bad, 2, &b, p()) {
            Err(Error::Oracle { order, reason, .. }) => {
                assert_eq!(order, 3);
                assert_eq!(reason, "boom");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn gaussian() -> impl Integrand {
        // (-1)^n H_n(x) e^{-x^2}, H_{n+1} = 2x H_n - 2n H_{n-1}
        FnIntegrand::new(IntegrandKind::RealLine, 40, |x, upto, prec| {
            let bits = prec.bits();
            let e = (-Float::with_val(bits, x.square_ref())).exp();
            let mut h_prev = Float::with_val(bits, 0u32);
            let mut h_cur = Float::with_val(bits, 1u32);
            let mut out = Vec::new();
            for n in 0..=upto {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                out.push(Complex::from_real(Float::with_val(bits, &h_cur * &e) * sign));
                let next = Float::with_val(bits, x * &h_cur) * 2u32
                    - Float::with_val(bits, &h_prev * (2 * n));
                h_prev = std::mem::replace(&mut h_cur, next);
            }
            Ok(out)
        })
    }

    #[test]
    fn gaussian_plain_and_bailey() {
        let h = Float::with_val(128, 0.5);
        let sqrt_pi = p().pi().sqrt();
        let plain = trapezoid_realline(
            &gaussian(),
            &h,
            &RuleCoefficients::unit(),
            &TruncationPolicy::default(),
            p(),
        )
        .unwrap();
        let err = (plain.value.re.clone() - &sqrt_pi).abs();
        assert!(err < 1e-12, "{err}");
        let corrected =
            bailey_corrected_trapezoid(&gaussian(), &h, 1, &TruncationPolicy::default(), p())
                .unwrap();
        let err = (corrected.value.re.clone() - &sqrt_pi).abs();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn odd_integrand_sums_to_zero() {
        let odd = FnIntegrand::new(IntegrandKind::RealLine, 40, |x, upto, prec| {
            // x e^{-x^2}: every derivative is odd in x
            let bits = prec.bits();
            let mut out = Vec::new();
            let e = (-Float::with_val(bits, x.square_ref())).exp();
            // derivatives of x e^{-x^2} = -(1/2) d/dx e^{-x^2}: -(1/2) (-1)^{n+1} H_{n+1} e^{-x^2}
            let mut hs = vec![Float::with_val(bits, 1u32), Float::with_val(bits, x * 2u32)];
            for n in 1..=upto as usize {
                let next = Float::with_val(bits, x * &hs[n]) * 2u32
                    - Float::with_val(bits, &hs[n - 1] * (2 * n as u32));
                hs.push(next);
            }
            for n in 0..=upto as usize {
                let sign: i32 = if n % 2 == 0 { 1 } else { -1 };
                let v = Float::with_val(bits, &hs[n + 1] * &e) * sign / 2i32;
                out.push(Complex::from_real(v));
            }
            Ok(out)
        });
        let h = Float::with_val(128, 0.3);
        for d in [0, 2, 4] {
            let c = if d == 0 {
                RuleCoefficients::unit()
            } else {
                RuleCoefficients::from(&coeff_b(d).unwrap())
            };
            let r = trapezoid_realline(&odd, &h, &c, &TruncationPolicy::FixedWindow { window: 12.0 }, p())
                .unwrap();
            assert!(r.value.is_zero(), "D={d}: {}", r.value);
        }
    }

    #[test]
    fn non_decaying_integrand_fails_adaptive() {
        let v = constant(IntegrandKind::RealLine);
        let trunc = TruncationPolicy::Adaptive {
            tail_tolerance: 1e-30,
            consecutive_below: 8,
            max_terms: 500,
        };
        let h = Float::with_val(64, 1u32);
        assert!(matches!(
            trapezoid_realline(&v, &h, &RuleCoefficients::unit(), &trunc, p()),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn zero_integrand_bailey_is_zero() {
        let z = FnIntegrand::new(IntegrandKind::RealLine, 10, |_x, upto, prec| {
            Ok(vec![Complex::zero(prec); upto as usize + 1])
        });
        let h = Float::with_val(64, 0.7);
        let r = bailey_corrected_trapezoid(&z, &h, 2, &TruncationPolicy::default(), p()).unwrap();
        assert!(r.value.is_zero());
        assert_eq!(r.terms, 8);
    }

    #[test]
    fn bailey_weights() {
        let b1 = RuleCoefficients::bailey(1).unwrap();
        assert_eq!(b1.values()[2], ComplexRational::real(Rational::from(1)));
        let b2 = RuleCoefficients::bailey(2).unwrap();
        assert_eq!(b2.order(), 4);
        assert_eq!(b2.values()[4], ComplexRational::real(Rational::from(-1)));
        assert!(b2.values()[2].is_zero());
        assert!(RuleCoefficients::bailey(0).is_err());
    }

    #[test]
    fn richardson_recovers_basel_like_sum() {
        // w(x) = 1/(1+x^2): h sum_j 1/(1 + j^2 h^2) = (pi/1) coth(pi/h) (h=1 -> pi coth pi)
        let f = FnIntegrand::new(IntegrandKind::RealLine, 0, |x, _upto, prec| {
            let v = Float::with_val(prec.bits(), x.square_ref()) + 1u32;
            Ok(vec![Complex::from_real(v.recip())])
        });
        let h = Float::with_val(128, 1u32);
        let r = trapezoid_realline(&f, &h, &RuleCoefficients::unit(), &TruncationPolicy::extrapolated(), p())
            .unwrap();
        let exact = p().pi() / p().pi().tanh();
        let err = (r.value.re.clone() - exact).abs();
        assert!(err < 1e-30, "{err}");
        assert!(r.levels.is_some());
    }
}
