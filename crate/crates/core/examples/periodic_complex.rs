//! `v(theta) = 1/(e^b + e^{i theta})` with `e^b = 2`: the error of the
//! half-plane rule falls like `2^{-(D+1)N}`, and the optimized bound tracks it.
//!
//! ```text
//! cargo run --example periodic_complex
//! ```

use derivquad::bounds::Resolution;
use derivquad::error::Result;
use derivquad::harness::{example_periodic_complex_exp, run_convergence_study};
use derivquad::numeric::Precision;
use rug::Rational;

fn main() -> Result<()> {
    let prec = Precision::new(256)?;
    let case = example_periodic_complex_exp(&Rational::from(2), prec)?;
    let ns: Vec<Resolution> = (1..=16).map(Resolution::Points).collect();
    let rows = run_convergence_study(&case, &[0, 1, 2, 3], &ns, prec)?;

    println!("{:>2} {:>3} {:>12} {:>12} {:>8} {:>8} {:>8}", "D", "N", "|error|", "bound", "ratio", "a_opt", "a_pred");
    for r in &rows {
        let err = r.abs_error.as_ref().unwrap().to_f64();
        let bound = r.bound_exact.as_ref().unwrap().to_f64();
        let Resolution::Points(n) = r.resolution else { unreachable!() };
        println!(
            "{:>2} {n:>3} {err:>12.3e} {bound:>12.3e} {:>8.2} {:>8.4} {:>8.4}",
            r.d,
            bound / err,
            r.a_opt.as_ref().unwrap().to_f64(),
            r.predicted_a.as_ref().unwrap().to_f64(),
        );
    }

    for d in 0..=3u32 {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.d == d)
            .map(|r| {
                let Resolution::Points(n) = r.resolution else { unreachable!() };
                (n as f64, r.abs_error.as_ref().unwrap().to_f64().ln())
            })
            .collect();
        println!("D={d}: fitted slope {:.4}, expected {:.4}", slope(&pts), -((d + 1) as f64) * 2f64.ln());
    }
    Ok(())
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}
