//! `v(theta) = e^{cos theta}`, entire, integrated with the strip weights.
//!
//! The optimized `a` is compared with the asymptotic prediction
//! `e^a = (D+2)N`.
//!
//! ```text
//! cargo run --example periodic_real
//! ```

use derivquad::bounds::Resolution;
use derivquad::error::Result;
use derivquad::exact::render_float;
use derivquad::harness::{example_periodic_real, run_convergence_study};
use derivquad::numeric::Precision;

fn main() -> Result<()> {
    let prec = Precision::new(256)?;
    let case = example_periodic_real(prec)?;

    let i44 = case.evaluate(4, &Resolution::Points(4), prec)?;
    let exact = &case.reference.as_ref().unwrap().value;
    println!("I_4,4 = {}", render_float(&i44.re, 20));
    println!("I     = {}", render_float(&exact.re, 20));

    let ns: Vec<Resolution> = (2..=14).map(Resolution::Points).collect();
    let rows = run_convergence_study(&case, &[0, 2, 4], &ns, prec)?;
    println!("\n{:>2} {:>3} {:>12} {:>12} {:>8} {:>8}", "D", "N", "|error|", "bound", "a_opt", "ln((D+2)N)");
    for r in rows.iter().filter(|r| r.above_floor()) {
        let Resolution::Points(n) = r.resolution else { unreachable!() };
        println!(
            "{:>2} {n:>3} {:>12.3e} {:>12.3e} {:>8.4} {:>8.4}",
            r.d,
            r.abs_error.as_ref().unwrap().to_f64(),
            r.bound_exact.as_ref().unwrap().to_f64(),
            r.a_opt.as_ref().unwrap().to_f64(),
            r.predicted_a.as_ref().unwrap().to_f64(),
        );
    }
    Ok(())
}
