//! Bring your own integrand: `w(x) = 1/(1 + x^2)` on the real line, with the
//! derivative oracle written as a closure, and its strip bound optimized with
//! `M(a) = int |w(x + ia)| dx`.
//!
//! ```text
//! cargo run --example custom_integrand
//! ```

use derivquad::bounds::{optimize_bound, Resolution, Theorem};
use derivquad::coefficients::coeff_b;
use derivquad::error::Result;
use derivquad::harness::sharpness_j;
use derivquad::numeric::{Complex, Precision};
use derivquad::rules::{trapezoid_realline, FnIntegrand, IntegrandKind, RuleCoefficients, TruncationPolicy};
use rug::{Float, Integer};

fn main() -> Result<()> {
    let prec = Precision::new(192)?;

    // w^(k)(x) = (-1)^k k! Im[(x - i)^{-k-1}]
    let w = FnIntegrand::new(IntegrandKind::RealLine, 40, |x: &Float, upto: u32, p: Precision| {
        let z = Complex::new(x.clone(), Float::with_val(p.bits(), -1)).recip();
        let mut pow = z.clone();
        let mut out = Vec::with_capacity(upto as usize + 1);
        for k in 0..=upto {
            let fact = Float::with_val(p.bits(), Integer::from(Integer::factorial(k)));
            let v = Float::with_val(p.bits(), &pow.im * &fact);
            out.push(Complex::from_real(if k % 2 == 0 { v } else { -v }));
            pow = &pow * &z;
        }
        Ok(out)
    });

    let one = Float::with_val(prec.bits(), 1u32);
    let m_of_a = |a: &Float| sharpness_j(a, &Float::with_val(a.prec(), 1u32));
    let pi = prec.pi();
    println!("{:>2} {:>5} {:>14} {:>14}", "D", "h", "|error|", "bound");
    for d in [0u32, 2, 4] {
        let coeffs = if d == 0 { RuleCoefficients::unit() } else { RuleCoefficients::from(&coeff_b(d)?) };
        for h in [1.0, 0.5, 0.25] {
            let hf = Float::with_val(prec.bits(), h);
            let sum = trapezoid_realline(&w, &hf, &coeffs, &TruncationPolicy::extrapolated(), prec)?;
            let err = Float::with_val(prec.bits(), &sum.value.re - &pi).abs();
            let res = Resolution::Spacing(hf);
            let opt = optimize_bound(Theorem::RealLineStrip, d, &res, &m_of_a, &one, prec)?;
            println!("{d:>2} {h:>5} {:>14.4e} {:>14.4e}", err.to_f64(), opt.bound.to_f64());
        }
    }
    Ok(())
}
