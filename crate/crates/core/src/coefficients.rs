//! Exact derivative-correction weights for the generalized trapezoidal rules.
//!
//! Two families are produced:
//!
//! * `A_{k,D}` for integrands analytic in a half-plane. They alternate
//!   between real and imaginary, with `i^k A_{k,D} = (-1)^D s(D+1,k+1) / D!`
//!   in terms of signed Stirling numbers of the first kind.
//! * `B_{k,D}` (even `D`) for integrands analytic in a strip. Odd-order
//!   entries vanish and the even ones solve a real Vandermonde system.
//!
//! Both are characterized by the polynomials `E_{l,D}` and `F_{l,D}`,
//! which vanish at the low integer frequencies the rules are built to
//! cancel.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::ComplexRational;
use crate::numeric::Precision;

/// Largest derivative order accepted unless configured otherwise.
pub const DEFAULT_MAX_ORDER: u32 = 40;

/// Which rule family a coefficient set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffFamily {
    /// Plain trapezoid: a single unit weight.
    Unit,
    /// Half-plane analyticity, Stirling-number weights.
    HalfPlane,
    /// Strip analyticity, Vandermonde weights.
    Strip,
    /// Single-order Euler-Maclaurin style correction.
    Bailey,
    /// Truncated Taylor expansion about each node.
    TaylorTruncation,
    /// Composite Hermite-interpolation stencil.
    HermiteInterpolation,
}

impl CoeffFamily {
    pub fn label(self) -> &'static str {
        match self {
            CoeffFamily::Unit => "unit",
            CoeffFamily::HalfPlane => "A",
            CoeffFamily::Strip => "B",
            CoeffFamily::Bailey => "bailey",
            CoeffFamily::TaylorTruncation => "G-taylor",
            CoeffFamily::HermiteInterpolation => "G-hermite",
        }
    }
}

/// Signed Stirling numbers of the first kind, rows `0..=n`.
///
/// Built once per call from `s(n+1,k) = s(n,k-1) - n s(n,k)`.
#[derive(Clone, Debug)]
pub struct StirlingTriangle {
    rows: Vec<Vec<Integer>>,
}

impl StirlingTriangle {
    pub fn new(n: u32) -> Self {
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n as usize + 1);
        rows.push(vec![Integer::from(1)]);
        for m in 0..n {
            let prev = &rows[m as usize];
            let mut next = vec![Integer::new(); m as usize + 2];
            for (k, slot) in next.iter_mut().enumerate() {
                let left = if k >= 1 { prev.get(k - 1) } else { None };
                let same = prev.get(k);
                if let Some(l) = left {
                    *slot += l;
                }
                if let Some(s) = same {
                    *slot -= Integer::from(s * m);
                }
            }
            rows.push(next);
        }
        StirlingTriangle { rows }
    }

    pub fn max_n(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    /// `s(n, k)`; zero for `k > n`.
    pub fn get(&self, n: u32, k: u32) -> &Integer {
        static ZERO: Integer = Integer::ZERO;
        self.rows
            .get(n as usize)
            .and_then(|row| row.get(k as usize))
            .unwrap_or(&ZERO)
    }
}

/// Signed Stirling number of the first kind `s(n, k)`.
pub fn stirling_first(n: u32, k: u32) -> Result<Integer> {
    if k > n {
        return Err(Error::domain(format!("stirling_first requires k <= n, got n={n}, k={k}")));
    }
    Ok(StirlingTriangle::new(n).get(n, k).clone())
}

/// `A_{k,D}` for `k = 0..=D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSetA {
    order: u32,
    values: Vec<ComplexRational>,
}

impl CoeffSetA {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn values(&self) -> &[ComplexRational] {
        &self.values
    }

    pub fn get(&self, k: u32) -> &ComplexRational {
        &self.values[k as usize]
    }

    /// `i^k A_{k,D}`, which is always real.
    pub fn rotated(&self, k: u32) -> Rational {
        let r = self.values[k as usize].mul_i_pow(k);
        debug_assert!(r.is_real());
        r.re
    }

    fn from_rotated(order: u32, rotated: Vec<Rational>) -> Self {
        // A_k = i^{-k} (i^k A_k)
        let values = rotated
            .into_iter()
            .enumerate()
            .map(|(k, r)| ComplexRational::real(r).mul_i_pow((4 - (k as u32 % 4)) % 4))
            .collect();
        CoeffSetA { order, values }
    }
}

/// `B_{k,D}` for `k = 0..=D`, `D` even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSetB {
    order: u32,
    values: Vec<Rational>,
}

impl CoeffSetB {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, k: u32) -> &Rational {
        &self.values[k as usize]
    }

    /// `B_{2m,D}` for `m = 0..=D/2`.
    pub fn even(&self) -> impl Iterator<Item = &Rational> {
        self.values.iter().step_by(2)
    }
}

/// Coefficient generation with a configurable ceiling on `D`.
#[derive(Clone, Copy, Debug)]
pub struct CoeffGenerator {
    pub max_order: u32,
}

impl Default for CoeffGenerator {
    fn default() -> Self {
        CoeffGenerator {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl CoeffGenerator {
    pub fn new(max_order: u32) -> Self {
        CoeffGenerator { max_order }
    }

    fn check_order(&self, d: u32) -> Result<()> {
        if d > self.max_order {
            return Err(Error::domain(format!(
                "derivative order {d} exceeds the configured maximum {}",
                self.max_order
            )));
        }
        Ok(())
    }

    /// Half-plane weights from Stirling numbers.
    pub fn coeff_a(&self, d: u32) -> Result<CoeffSetA> {
        if d < 1 {
            return Err(Error::domain("A coefficients need D >= 1"));
        }
        self.check_order(d)?;
        let stirling = StirlingTriangle::new(d + 1);
        let fact = Integer::from(Integer::factorial(d));
        let sign = if d.is_multiple_of(2) { 1 } else { -1 };
        let rotated = (0..=d)
            .map(|k| Rational::from((stirling.get(d + 1, k + 1) * Integer::from(sign), fact.clone())))
            .collect();
        Ok(CoeffSetA::from_rotated(d, rotated))
    }

    /// Half-plane weights from `E_{l,D} = (1 - l/D) E_{l,D-1}`, independent of
    /// the Stirling route.
    pub fn coeff_a_recurrence(&self, d: u32) -> Result<CoeffSetA> {
        if d < 1 {
            return Err(Error::domain("A coefficients need D >= 1"));
        }
        self.check_order(d)?;
        let mut rotated = vec![Rational::from(1)];
        for order in 1..=d {
            let mut next = vec![Rational::new(); order as usize + 1];
            for k in 0..=order as usize {
                let mut v = rotated.get(k).cloned().unwrap_or_default();
                if k >= 1 {
                    v -= Rational::from(&rotated[k - 1] / order);
                }
                next[k] = v;
            }
            rotated = next;
        }
        Ok(CoeffSetA::from_rotated(d, rotated))
    }

    /// Strip weights from `B_{2m,D} = B_{2m,D-2} + (2/D)^2 B_{2m-2,D-2}`.
    pub fn coeff_b(&self, d: u32) -> Result<CoeffSetB> {
        if d < 2 || !d.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "B coefficients need an even D >= 2, got {d}"
            )));
        }
        self.check_order(d)?;
        let mut even = vec![Rational::from(1)];
        for order in (2..=d).step_by(2) {
            let factor = Rational::from((4, order * order));
            let half = (order / 2) as usize;
            let mut next = vec![Rational::new(); half + 1];
            for m in 0..=half {
                let mut v = even.get(m).cloned().unwrap_or_default();
                if m >= 1 {
                    v += Rational::from(&even[m - 1] * &factor);
                }
                next[m] = v;
            }
            even = next;
        }
        let mut values = vec![Rational::new(); d as usize + 1];
        for (m, v) in even.into_iter().enumerate() {
            values[2 * m] = v;
        }
        Ok(CoeffSetB { order: d, values })
    }
}

/// See [`CoeffGenerator::coeff_a`].
pub fn coeff_a(d: u32) -> Result<CoeffSetA> {
    CoeffGenerator::default().coeff_a(d)
}

/// See [`CoeffGenerator::coeff_a_recurrence`].
pub fn coeff_a_recurrence(d: u32) -> Result<CoeffSetA> {
    CoeffGenerator::default().coeff_a_recurrence(d)
}

/// See [`CoeffGenerator::coeff_b`].
pub fn coeff_b(d: u32) -> Result<CoeffSetB> {
    CoeffGenerator::default().coeff_b(d)
}

/// `lim_{D -> inf} B_{2m,D} = pi^{2m} / (2m+1)!`.
pub fn coeff_b_limit(m: u32, prec: Precision) -> Float {
    let p = prec.bits() + 16;
    let pi = Float::with_val(p, Constant::Pi);
    let num = pi.pow(2 * m);
    let den = Integer::from(Integer::factorial(2 * m + 1));
    let mut out = num / den;
    out.set_prec(prec.bits());
    out
}

/// `E_{l,D} = prod_{k=1}^{D} (1 - l/k)`.
pub fn e_poly(ell: u32, d: u32) -> Rational {
    (1..=d).fold(Rational::from(1), |acc, k| {
        acc * Rational::from((Integer::from(k) - ell, Integer::from(k)))
    })
}

/// `(-1)^D C(l-1, D)`, equal to [`e_poly`] for `l > D`.
pub fn e_poly_binomial(ell: u32, d: u32) -> Result<Rational> {
    if ell <= d {
        return Err(Error::domain(format!("binomial form of E needs l > D, got l={ell}, D={d}")));
    }
    let c = Integer::from(ell - 1).binomial(d);
    Ok(Rational::from(if d.is_multiple_of(2) { c } else { -c }))
}

fn check_even(d: u32) -> Result<()> {
    if !d.is_multiple_of(2) {
        return Err(Error::domain(format!("F needs an even D, got {d}")));
    }
    Ok(())
}

/// `F_{l,D} = prod_{m=1}^{D/2} (1 - (l/m)^2)`.
pub fn f_poly(ell: u32, d: u32) -> Result<Rational> {
    check_even(d)?;
    Ok((1..=d / 2).fold(Rational::from(1), |acc, m| {
        let l2 = Integer::from(ell) * ell;
        let m2 = Integer::from(m) * m;
        acc * Rational::from((m2.clone() - l2, m2))
    }))
}

/// `(-1)^{D/2} C(l + D/2, D/2) C(l-1, D/2)`, equal to [`f_poly`] for `l > D/2`.
pub fn f_poly_binomial(ell: u32, d: u32) -> Result<Rational> {
    check_even(d)?;
    let half = d / 2;
    if ell <= half {
        return Err(Error::domain(format!(
            "binomial form of F needs l > D/2, got l={ell}, D={d}"
        )));
    }
    let a = Integer::from(ell + half).binomial(half);
    let b = Integer::from(ell - 1).binomial(half);
    let v = a * b;
    Ok(Rational::from(if half.is_multiple_of(2) { v } else { -v }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    /// Brute force: s(n,k) = (-1)^{n-k} * #permutations of n with k cycles.
    fn stirling_by_permutations(n: usize, k: usize) -> i64 {
        fn cycles(perm: &[usize]) -> usize {
            let mut seen = vec![false; perm.len()];
            let mut c = 0;
            for i in 0..perm.len() {
                if !seen[i] {
                    c += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                    }
                }
            }
            c
        }
        fn permute(rest: &mut Vec<usize>, cur: &mut Vec<usize>, k: usize, count: &mut i64) {
            if rest.is_empty() {
                if cycles(cur) == k {
                    *count += 1;
                }
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                permute(rest, cur, k, count);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut count = 0;
        permute(&mut (0..n).collect(), &mut Vec::new(), k, &mut count);
        if (n - k).is_multiple_of(2) {
            count
        } else {
            -count
        }
    }

    #[test]
    fn stirling_matches_permutation_count() {
        for n in 1..=6u32 {
            for k in 0..=n {
                assert_eq!(
                    stirling_first(n, k).unwrap(),
                    stirling_by_permutations(n as usize, k as usize),
                    "s({n},{k})"
                );
            }
        }
        assert_eq!(stirling_first(4, 2).unwrap(), 11);
        assert_eq!(stirling_first(1, 1).unwrap(), 1);
        assert_eq!(stirling_first(5, 0).unwrap(), 0);
        assert_eq!(stirling_first(0, 0).unwrap(), 1);
        assert!(stirling_first(2, 3).is_err());
    }

    #[test]
    fn table_one() {
        let a1 = coeff_a(1).unwrap();
        assert_eq!(a1.get(1), &ComplexRational::imag(q(1, 1)));
        let a2 = coeff_a(2).unwrap();
        assert_eq!(a2.get(1), &ComplexRational::imag(q(3, 2)));
        assert_eq!(a2.get(2), &ComplexRational::real(q(-1, 2)));
        let a3 = coeff_a(3).unwrap();
        assert_eq!(a3.get(1), &ComplexRational::imag(q(11, 6)));
        assert_eq!(a3.get(2), &ComplexRational::real(q(-1, 1)));
        assert_eq!(a3.get(3), &ComplexRational::imag(q(-1, 6)));
        assert!(coeff_a(0).is_err());
    }

    #[test]
    fn a_invariants() {
        for d in 1..=12 {
            let a = coeff_a(d).unwrap();
            assert_eq!(a.get(0), &ComplexRational::one());
            for k in 0..=d {
                assert!(a.get(k).mul_i_pow(k).is_real());
            }
            let top = Rational::from((1, Integer::from(Integer::factorial(d))));
            let top = if d % 2 == 0 { top } else { -top };
            assert_eq!(a.rotated(d), top);
            assert_eq!(a, coeff_a_recurrence(d).unwrap(), "D={d}");
        }
    }

    #[test]
    fn table_two() {
        assert_eq!(coeff_b(2).unwrap().values(), &[q(1, 1), q(0, 1), q(1, 1)]);
        let b4 = coeff_b(4).unwrap();
        assert_eq!(b4.get(2), &q(5, 4));
        assert_eq!(b4.get(4), &q(1, 4));
        let b6 = coeff_b(6).unwrap();
        assert_eq!(b6.get(2), &q(49, 36));
        assert_eq!(b6.get(4), &q(7, 18));
        assert_eq!(b6.get(6), &q(1, 36));
        assert!(coeff_b(3).is_err());
        assert!(coeff_b(0).is_err());
    }

    #[test]
    fn order_ceiling_is_configurable() {
        assert!(coeff_b(42).is_err());
        assert!(CoeffGenerator::new(60).coeff_b(42).is_ok());
        assert!(CoeffGenerator::new(4).coeff_a(5).is_err());
    }

    #[test]
    fn e_and_f_examples() {
        assert_eq!(e_poly(0, 3), q(1, 1));
        assert_eq!(e_poly(2, 3), q(0, 1));
        assert_eq!(e_poly(4, 3), q(-1, 1));
        assert_eq!(e_poly_binomial(4, 3).unwrap(), q(-1, 1));
        assert_eq!(f_poly(2, 2).unwrap(), q(-3, 1));
        assert_eq!(f_poly(3, 4).unwrap(), q(10, 1));
        assert_eq!(f_poly(4, 6).unwrap(), q(-35, 1));
        assert_eq!(f_poly(1, 6).unwrap(), q(0, 1));
        assert!(f_poly(1, 3).is_err());
        assert!(f_poly_binomial(2, 4).is_err());
    }

    #[test]
    fn limit_values() {
        let p = Precision::new(128).unwrap();
        assert_eq!(coeff_b_limit(0, p), 1);
        let pi2_6 = coeff_b_limit(1, p).to_f64();
        assert!((pi2_6 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        let pi4 = coeff_b_limit(2, p).to_f64();
        assert!((pi4 - std::f64::consts::PI.powi(4) / 120.0).abs() < 1e-15);
    }
}
