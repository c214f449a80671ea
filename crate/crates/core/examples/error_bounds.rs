//! Bound forms side by side, and the optimization over the strip half-width
//! for a function of your own.
//!
//! ```text
//! cargo run --example error_bounds
//! ```

use derivquad::bounds::{bound, optimize_bound, BoundForm, BoundSpec, Resolution, Theorem};
use derivquad::error::Result;
use derivquad::numeric::Precision;
use rug::Float;

fn main() -> Result<()> {
    let prec = Precision::new(128)?;
    let f = |x: f64| Float::with_val(128, x);

    println!("periodic strip, M=1, a=1/2, D=4");
    println!("{:>4} {:>12} {:>12} {:>12}", "N", "exact", "asymptotic", "polylog");
    for n in [2u32, 4, 8, 16, 32] {
        let spec = BoundSpec {
            m: f(1.0),
            a: f(0.5),
            order: 4,
            resolution: Resolution::Points(n),
            theorem: Theorem::PeriodicStrip,
        };
        println!(
            "{n:>4} {:>12.4e} {:>12.4e} {:>12.4e}",
            bound(&spec, BoundForm::Exact, prec)?.to_f64(),
            bound(&spec, BoundForm::Asymptotic, prec)?.to_f64(),
            bound(&spec, BoundForm::Polylog, prec)?.to_f64(),
        );
    }

    // v(theta) = 1/(3 + 2 cos theta) has poles at Im theta = +-ln(3/2 + sqrt(5)/2)
    let a_max = Float::with_val(128, (1.5f64 + 5f64.sqrt() / 2.0).ln());
    let m_of_a = |a: &Float| {
        let c = Float::with_val(a.prec(), a.cosh_ref());
        Float::with_val(a.prec(), 3u32 - Float::with_val(a.prec(), c * 2u32)).abs().recip()
    };
    println!("\n1/(3 + 2 cos theta), a_max = {:.6}", a_max.to_f64());
    for d in [0u32, 2, 4] {
        for n in [4u32, 8, 16] {
            let opt = optimize_bound(Theorem::PeriodicStrip, d, &Resolution::Points(n), &m_of_a, &a_max, prec)?;
            println!(
                "  D={d} N={n:>2}: a_opt {:.5}  bound {:.4e}  asymptotic {:.4e}",
                opt.a_opt.to_f64(),
                opt.bound.to_f64(),
                opt.asymptotic.to_f64()
            );
        }
    }
    Ok(())
}
