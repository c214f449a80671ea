//! The strip bound is attained up to a constant: for
//! `w(x) = cos(2 pi (D/2+1) x/h) / (x^2 + L^2)` the error of the order-D
//! real-line rule is a closed-form alias series, and stays of order one as
//! `h -> 0`.
//!
//! ```text
//! cargo run --example realline_sharpness
//! ```

use derivquad::error::Result;
use derivquad::harness::{run_sharpness_study, sharpness_error_limit, sharpness_error_series};
use derivquad::numeric::Precision;
use rug::Rational;

fn main() -> Result<()> {
    let prec = Precision::new(192)?;
    let l = Rational::from(1);
    let hs: Vec<Rational> = [(2, 1), (1, 1), (1, 2), (1, 4)].iter().map(|&q| Rational::from(q)).collect();
    let rows = run_sharpness_study(&[0, 2, 4], &hs, &l, None, prec)?;

    println!("{:>2} {:>5} {:>14} {:>14} {:>12}", "D", "h", "I_h,D - I", "alias series", "bound");
    for r in &rows {
        let h = hs.iter().find(|h| (h.to_f64() - res_h(r)).abs() < 1e-12).unwrap();
        let diff = (&r.approx - r.reference.as_ref().unwrap()).re.to_f64();
        let series = sharpness_error_series(r.d, h, &l, prec)?.to_f64();
        println!(
            "{:>2} {:>5} {diff:>14.6e} {series:>14.6e} {:>12.4e}",
            r.d,
            h.to_string(),
            r.bound_exact.as_ref().unwrap().to_f64()
        );
    }
    for d in [0, 2, 4] {
        println!("D={d}: h -> 0 limit {:.10}", sharpness_error_limit(d, &l, prec).to_f64());
    }
    Ok(())
}

fn res_h(r: &derivquad::harness::ConvergenceRow) -> f64 {
    match &r.resolution {
        derivquad::bounds::Resolution::Spacing(h) => h.to_f64(),
        derivquad::bounds::Resolution::Points(n) => *n as f64,
    }
}
