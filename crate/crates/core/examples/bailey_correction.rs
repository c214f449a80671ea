//! A single derivative correction `B_0 = 1`, `B_{2m} = (-1)^{m+1}` against the
//! full strip weights of the same order, on `e^{-x^2}`.
//!
//! ```text
//! cargo run --example bailey_correction
//! ```

use derivquad::bounds::Resolution;
use derivquad::error::Result;
use derivquad::harness::{example_gaussian, study_row};
use derivquad::numeric::Precision;
use rug::Float;

fn main() -> Result<()> {
    let prec = Precision::new(256)?;
    println!("{:>2} {:>5} {:>14} {:>14} {:>14} {:>14}", "m", "h", "strip error", "strip bound", "single error", "single bound");
    for m in 1..=3u32 {
        let strip = example_gaussian(prec)?;
        let single = example_gaussian(prec)?.with_bailey(m)?;
        for h in [1.0, 0.75, 0.5] {
            let res = Resolution::Spacing(Float::with_val(320, h));
            let a = study_row(&strip, 2 * m, &res, prec)?;
            let b = study_row(&single, 2 * m, &res, prec)?;
            println!(
                "{m:>2} {h:>5} {:>14.4e} {:>14.4e} {:>14.4e} {:>14.4e}",
                a.abs_error.unwrap().to_f64(),
                a.bound_exact.unwrap().to_f64(),
                b.abs_error.unwrap().to_f64(),
                b.bound_exact.unwrap().to_f64(),
            );
        }
    }
    Ok(())
}
