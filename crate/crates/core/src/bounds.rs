//! Derivative-free error bounds for the generalized trapezoidal rules.
//!
//! Every bound depends on the analyticity data `(M, a)`, the order `D` and
//! the resolution, through the decay parameter `q = aN` (periodic) or
//! `q = 2 pi a / h` (real line).

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::coefficients::coeff_b;
use crate::error::{Error, Result};
use crate::numeric::Precision;

const GUARD_BITS: u32 = 64;
const GOLDEN_ITERATIONS: u32 = 90;

/// Which error bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Periodic `v`, analytic and bounded by `M` for `Im theta > -a`.
    PeriodicHalfPlane,
    /// Periodic `v`, analytic and bounded by `M` in `|Im theta| < a`.
    PeriodicStrip,
    /// `w` on the real line with `int |w(x + ib)| dx <= M` for `|b| < a`.
    RealLineStrip,
    /// As [`Theorem::RealLineStrip`], for `0 <= b < a` only.
    RealLineHalfPlane,
    /// Plain real-line rule plus the single correction of order `2m`.
    Bailey { m: u32 },
}

impl Theorem {
    pub fn label(self) -> String {
        match self {
            Theorem::PeriodicHalfPlane => "periodic-halfplane".into(),
            Theorem::PeriodicStrip => "periodic-strip".into(),
            Theorem::RealLineStrip => "realline-strip".into(),
            Theorem::RealLineHalfPlane => "realline-halfplane".into(),
            Theorem::Bailey { m } => format!("bailey-m{m}"),
        }
    }

    pub fn is_periodic(self) -> bool {
        matches!(self, Theorem::PeriodicHalfPlane | Theorem::PeriodicStrip)
    }

    fn needs_even_order(self) -> bool {
        matches!(self, Theorem::PeriodicStrip | Theorem::RealLineStrip)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundForm {
    /// Closed binomial sum, valid for every resolution.
    Exact,
    /// Leading geometric term as `N -> inf` or `h -> 0`.
    Asymptotic,
    /// Sum of negative-order polylogarithms.
    Polylog,
}

impl FromStr for BoundForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BoundForm::Exact),
            "asymptotic" => Ok(BoundForm::Asymptotic),
            "polylog" => Ok(BoundForm::Polylog),
            other => Err(Error::Parse(format!("unknown bound form '{other}'"))),
        }
    }
}

/// `N` for periodic rules, `h` for real-line rules.
#[derive(Clone, Debug, PartialEq)]
pub enum Resolution {
    Points(u32),
    Spacing(Float),
}

impl Resolution {
    /// `q / a`: `N` or `2 pi / h`.
    fn rate(&self, prec: Precision) -> Float {
        match self {
            Resolution::Points(n) => Float::with_val(prec.bits(), *n),
            Resolution::Spacing(h) => Float::with_val(prec.bits(), prec.two_pi() / h),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundSpec {
    pub m: Float,
    pub a: Float,
    pub order: u32,
    pub resolution: Resolution,
    pub theorem: Theorem,
}

impl BoundSpec {
    fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0) {
            return Err(Error::domain("M must be positive and finite"));
        }
        if !(self.a.is_finite() && self.a > 0) {
            return Err(Error::domain("a must be positive and finite"));
        }
        match &self.resolution {
            Resolution::Points(0) => return Err(Error::domain("N must be >= 1")),
            Resolution::Spacing(h) if !(h.is_finite() && *h > 0) => {
                return Err(Error::domain("h must be positive and finite"))
            }
            _ => {}
        }
        if self.theorem.is_periodic() != matches!(self.resolution, Resolution::Points(_)) {
            return Err(Error::domain(format!(
                "{} needs {}",
                self.theorem,
                if self.theorem.is_periodic() { "a point count N" } else { "a spacing h" }
            )));
        }
        if self.theorem.needs_even_order() && !self.order.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "{} needs an even D, got {}",
                self.theorem, self.order
            )));
        }
        if let Theorem::Bailey { m } = self.theorem {
            if m < 1 {
                return Err(Error::domain("Bailey bound needs m >= 1"));
            }
        }
        Ok(())
    }

    /// `q = aN` or `q = 2 pi a / h`.
    pub fn decay(&self, prec: Precision) -> Float {
        self.resolution.rate(prec) * &self.a
    }
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(n).binomial(k)
}

/// `|sum_{l=D/2+1}^{D+1} (-1)^l C(D+1, l) e^{-q l}|` with enough guard bits
/// to absorb the cancellation at small `q`.
pub fn strip_binomial_sum(d: u32, q: &Float, prec: Precision) -> Float {
    let lost = if *q < 1 {
        let lg = Float::with_val(53, q.log2_ref()).to_f64();
        ((-lg).ceil().max(0.0) as u32 + 1) * (d + 1)
    } else {
        0
    };
    let wp = prec.bits() + GUARD_BITS + lost;
    let q = Float::with_val(wp, q);
    let mut acc = Float::with_val(wp, 0u32);
    for ell in d / 2 + 1..=d + 1 {
        let term = (-Float::with_val(wp, &q * ell)).exp() * binomial(d + 1, ell);
        if ell % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let mut out = acc.abs();
    out.set_prec(prec.bits());
    out
}

/// `1 - e^{-q}` without cancellation.
fn one_minus_exp_neg(q: &Float, bits: u32) -> Float {
    -Float::with_val(bits, -q).exp_m1()
}

fn exact_strip(prefactor: Float, d: u32, q: &Float, prec: Precision) -> Float {
    let wp = prec.bits() + GUARD_BITS;
    let denom = Float::with_val(wp, one_minus_exp_neg(q, wp).pow(d + 1));
    let out = prefactor * strip_binomial_sum(d, q, prec.with_guard(GUARD_BITS)) / denom;
    Float::with_val(prec.bits(), out)
}

fn asymptotic_strip(prefactor: Float, d: u32, q: &Float, prec: Precision) -> Float {
    let wp = prec.bits() + GUARD_BITS;
    let e = (-Float::with_val(wp, q * (d / 2 + 1))).exp();
    Float::with_val(prec.bits(), prefactor * binomial(d + 1, d / 2) * e)
}

fn polylog_strip(prefactor: Float, d: u32, q: &Float, prec: Precision) -> Result<Float> {
    let mut terms = vec![(0, Rational::from(1))];
    if d >= 2 {
        let b = coeff_b(d)?;
        for m in 1..=d / 2 {
            let c = if m % 2 == 0 { b.get(2 * m).clone() } else { -b.get(2 * m).clone() };
            terms.push((2 * m, c));
        }
    }
    let acc = polylog_neg_sum_at(&terms, q, prec.with_guard(GUARD_BITS))?;
    Ok(Float::with_val(prec.bits(), prefactor * acc.abs()))
}

fn halfplane(prefactor: Float, d: u32, q: &Float, form: BoundForm, prec: Precision) -> Result<Float> {
    let wp = prec.bits() + GUARD_BITS;
    match form {
        BoundForm::Exact => {
            let denom = Float::with_val(wp, q.exp_m1_ref()).pow(d + 1);
            Ok(Float::with_val(prec.bits(), prefactor / denom))
        }
        BoundForm::Asymptotic => {
            let e = (-Float::with_val(wp, q * (d + 1))).exp();
            Ok(Float::with_val(prec.bits(), prefactor * e))
        }
        BoundForm::Polylog => Err(Error::domain("half-plane bounds have no polylog form")),
    }
}

/// `2 pi M / (e^{aN} - 1)^{D+1}`; the asymptotic form is `2 pi M e^{-a(D+1)N}`.
pub fn bound_periodic_halfplane(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    expect(spec, Theorem::PeriodicHalfPlane)?;
    let wp = prec.bits() + GUARD_BITS;
    let pre = Float::with_val(wp, prec.with_guard(GUARD_BITS).two_pi() * &spec.m);
    halfplane(pre, spec.order, &spec.decay(prec.with_guard(GUARD_BITS)), form, prec)
}

/// Periodic strip bound with prefactor `4 pi M`.
pub fn bound_periodic_strip(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    expect(spec, Theorem::PeriodicStrip)?;
    let wp = prec.with_guard(GUARD_BITS);
    let pre = Float::with_val(wp.bits(), wp.two_pi() * &spec.m) * 2u32;
    strip(pre, spec, form, prec)
}

/// Real-line strip bound with prefactor `2M`.
pub fn bound_realline_strip(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    expect(spec, Theorem::RealLineStrip)?;
    let pre = Float::with_val(prec.bits() + GUARD_BITS, &spec.m * 2u32);
    strip(pre, spec, form, prec)
}

/// `M / (e^{2 pi a/h} - 1)^{D+1}`; the asymptotic form is `M e^{-2 pi a (D+1)/h}`.
pub fn bound_realline_halfplane(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    expect(spec, Theorem::RealLineHalfPlane)?;
    let pre = Float::with_val(prec.bits() + GUARD_BITS, &spec.m);
    halfplane(pre, spec.order, &spec.decay(prec.with_guard(GUARD_BITS)), form, prec)
}

/// Bound for the rule with `B_0 = 1`, `B_{2m} = (-1)^{m+1}`.
///
/// The error weight of alias `l` is `1 - l^{2m}`, so the polylog form is
/// `2M |Li_0(z) - Li_{-2m}(z)|` with `z = e^{-2 pi a/h}`, whose leading term
/// is the asymptotic form `2M (2^{2m} - 1) z^2`. `Exact` is the polylog form.
pub fn bound_bailey(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    let m = match spec.theorem {
        Theorem::Bailey { m } => m,
        other => {
            return Err(Error::domain(format!("expected a Bailey spec, got {other}")));
        }
    };
    spec.validate()?;
    let wp = prec.with_guard(GUARD_BITS);
    let q = spec.decay(wp);
    let pre = Float::with_val(wp.bits(), &spec.m * 2u32);
    match form {
        BoundForm::Exact | BoundForm::Polylog => {
            let diff = polylog_neg_sum_at(&[(2 * m, Rational::from(1)), (0, Rational::from(-1))], &q, wp)?;
            Ok(Float::with_val(prec.bits(), pre * diff.abs()))
        }
        BoundForm::Asymptotic => {
            let factor = (Integer::from(1) << (2 * m)) - 1u32;
            let e = (-Float::with_val(wp.bits(), q * 2u32)).exp();
            Ok(Float::with_val(prec.bits(), pre * factor * e))
        }
    }
}

/// Dispatch on `spec.theorem`.
pub fn bound(spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    match spec.theorem {
        Theorem::PeriodicHalfPlane => bound_periodic_halfplane(spec, form, prec),
        Theorem::PeriodicStrip => bound_periodic_strip(spec, form, prec),
        Theorem::RealLineStrip => bound_realline_strip(spec, form, prec),
        Theorem::RealLineHalfPlane => bound_realline_halfplane(spec, form, prec),
        Theorem::Bailey { .. } => bound_bailey(spec, form, prec),
    }
}

fn expect(spec: &BoundSpec, theorem: Theorem) -> Result<()> {
    if spec.theorem != theorem {
        return Err(Error::domain(format!(
            "expected a {theorem} spec, got {}",
            spec.theorem
        )));
    }
    spec.validate()
}

fn strip(pre: Float, spec: &BoundSpec, form: BoundForm, prec: Precision) -> Result<Float> {
    let q = spec.decay(prec.with_guard(GUARD_BITS));
    let d = spec.order;
    match form {
        BoundForm::Exact => Ok(exact_strip(pre, d, &q, prec)),
        BoundForm::Asymptotic => Ok(asymptotic_strip(pre, d, &q, prec)),
        BoundForm::Polylog => polylog_strip(pre, d, &q, prec),
    }
}

/// Eulerian numbers `A(n, j)`, `j = 0..n`, with `A(0, 0) = 1`.
fn eulerian_row(n: u32) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for r in 1..=n {
        let mut next = vec![Integer::new(); r as usize];
        for j in 0..r as usize {
            if j < row.len() {
                next[j] += Integer::from(&row[j] * (j as u32 + 1));
            }
            if j >= 1 && j - 1 < row.len() {
                next[j] += Integer::from(&row[j - 1] * (r - j as u32));
            }
        }
        row = next;
    }
    row
}

/// Exact numerator `P` with `sum_k c_k Li_{-k}(z) = P(z) / (1-z)^{K+1}`,
/// `K = max k`, using `Li_{-k}(z) = z E_k(z) / (1-z)^{k+1}`.
fn polylog_numerator(terms: &[(u32, Rational)]) -> (u32, Vec<Rational>) {
    let top = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut num = vec![Rational::new(); top as usize + 2];
    for (k, c) in terms {
        // z E_k(z) (1 - z)^{top - k}
        let mut poly: Vec<Rational> = std::iter::once(Rational::new())
            .chain(eulerian_row(*k).into_iter().map(Rational::from))
            .collect();
        for _ in 0..top - k {
            let mut next = vec![Rational::new(); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i] += p;
                next[i + 1] -= p;
            }
            poly = next;
        }
        for (i, p) in poly.iter().enumerate() {
            num[i] += Rational::from(p * c);
        }
    }
    while num.len() > 1 && num.last().is_some_and(|c| *c == 0) {
        num.pop();
    }
    (top, num)
}

fn horner(coeffs: &[Rational], z: &Float, bits: u32) -> Float {
    let mut acc = Float::with_val(bits, 0u32);
    for c in coeffs.iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

/// `sum_k c_k Li_{-k}(e^{-q})` for `q > 0`, with guard bits scaled to the
/// cancellation near `q = 0`.
fn polylog_neg_sum_at(terms: &[(u32, Rational)], q: &Float, prec: Precision) -> Result<Float> {
    if !(q.is_finite() && *q > 0) {
        return Err(Error::domain("polylog needs q > 0"));
    }
    let (top, num) = polylog_numerator(terms);
    let lost = if *q < 1 {
        let lg = Float::with_val(53, q.log2_ref()).to_f64();
        ((-lg).ceil().max(0.0) as u32 + 1) * (top + 2)
    } else {
        0
    };
    let wp = prec.bits() + GUARD_BITS + lost;
    let q = Float::with_val(wp, q);
    let z = Float::with_val(wp, -&q).exp();
    let denom = Float::with_val(wp, one_minus_exp_neg(&q, wp).pow(top + 1));
    let mut out = horner(&num, &z, wp) / denom;
    out.set_prec(prec.bits());
    Ok(out)
}

/// `Li_{-k}(z) = sum_{l >= 1} l^k z^l` for real `0 < z < 1`, in closed form
/// through the Eulerian polynomials.
pub fn polylog_neg(k: u32, z: &Float, prec: Precision) -> Result<Float> {
    if !(z.is_finite() && *z > 0 && *z < 1) {
        return Err(Error::domain(format!(
            "polylog needs 0 < z < 1, got {}",
            z.to_f64()
        )));
    }
    let (top, num) = polylog_numerator(&[(k, Rational::from(1))]);
    let wp = prec.bits() + GUARD_BITS;
    let z = Float::with_val(wp, z);
    let one_minus = Float::with_val(wp, 1u32 - &z);
    let out = horner(&num, &z, wp) / Float::with_val(wp, one_minus.pow(top + 1));
    Ok(Float::with_val(prec.bits(), out))
}

/// Result of [`optimize_bound`].
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizedBound {
    pub a_opt: Float,
    /// Exact form at `a_opt`.
    pub bound: Float,
    /// Leading term at `a_opt`.
    pub asymptotic: Float,
    /// Search interval actually used.
    pub interval: (Float, Float),
    /// True when the upper end was pulled in because `M(a)` was not finite.
    pub shrunk: bool,
}

/// Minimize the exact bound over `a` in `(eps, a_max - eps)`,
/// `eps = 1e-6 a_max`, by golden-section search on its logarithm, and report
/// the exact and asymptotic forms at the minimizer.
pub fn optimize_bound(
    theorem: Theorem,
    order: u32,
    resolution: &Resolution,
    m_of_a: &dyn Fn(&Float) -> Float,
    a_max: &Float,
    prec: Precision,
) -> Result<OptimizedBound> {
    if !(a_max.is_finite() && *a_max > 0) {
        return Err(Error::domain("a_max must be positive and finite"));
    }
    let wp = prec.with_guard(GUARD_BITS);
    let bits = wp.bits();
    let eps = Float::with_val(bits, a_max * 1e-6);
    let lo = eps.clone();
    let mut hi = Float::with_val(bits, a_max - &eps);

    let finite_m = |a: &Float| {
        let m = m_of_a(a);
        m.is_finite() && m > 0
    };
    if !finite_m(&lo) {
        return Err(Error::domain(format!(
            "M(a) is not finite and positive even at a = {}",
            lo.to_f64()
        )));
    }
    let mut shrunk = false;
    while !finite_m(&hi) {
        shrunk = true;
        hi = Float::with_val(bits, &lo + &hi) / 2u32;
        if Float::with_val(bits, &hi - &lo) <= Float::with_val(bits, &eps * 1e-6) {
            return Err(Error::domain("no interval on which M(a) is finite"));
        }
    }

    let objective = |a: &Float| -> Float {
        let spec = BoundSpec {
            m: m_of_a(a),
            a: a.clone(),
            order,
            resolution: resolution.clone(),
            theorem,
        };
        match bound(&spec, BoundForm::Exact, wp) {
            Ok(b) if b.is_finite() && b > 0 => b.ln(),
            _ => Float::with_val(bits, rug::float::Special::Infinity),
        }
    };
    let inv_phi = Float::with_val(bits, (Float::with_val(bits, 5u32).sqrt() - 1u32) / 2u32);
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut x1 = Float::with_val(bits, &b - Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
    let mut x2 = Float::with_val(bits, &a + Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
    let mut f1 = objective(&x1);
    let mut f2 = objective(&x2);
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = Float::with_val(bits, &b - Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
            f1 = objective(&x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = Float::with_val(bits, &a + Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
            f2 = objective(&x2);
        }
    }
    // Prefer an endpoint if the objective is monotone up to it.
    let mut a_opt = if f1 <= f2 { x1 } else { x2 };
    let best = objective(&a_opt);
    for end in [&lo, &hi] {
        if objective(end) < best {
            a_opt = end.clone();
        }
    }

    let spec = BoundSpec {
        m: m_of_a(&a_opt),
        a: a_opt.clone(),
        order,
        resolution: resolution.clone(),
        theorem,
    };
    let exact = bound(&spec, BoundForm::Exact, prec)?;
    let asymptotic = bound(&spec, BoundForm::Asymptotic, prec)?;
    Ok(OptimizedBound {
        a_opt: Float::with_val(prec.bits(), a_opt),
        bound: exact,
        asymptotic,
        interval: (Float::with_val(prec.bits(), lo), Float::with_val(prec.bits(), hi)),
        shrunk,
    })
}
