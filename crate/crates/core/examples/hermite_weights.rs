//! Derivative weights from composite Hermite interpolation, solved exactly,
//! approaching the strip weights `B_{k,D}/(2 pi)^k` as the stencil widens.
//!
//! ```text
//! cargo run --example hermite_weights
//! ```

use std::io::stdout;

use derivquad::error::Result;
use derivquad::hermite::{solve_stencil, taylor_truncation_coeffs, HermiteSolveSpec, HermiteTable};
use derivquad::numeric::Precision;
use rug::Rational;

fn main() -> Result<()> {
    let prec = Precision::new(128)?;
    HermiteTable::build(&[1, 2, 3, 4, 6], &[2, 4], 10, prec)?.write_csv(stdout())?;

    let taylor = taylor_truncation_coeffs(4);
    println!("\nTaylor truncation: G_2 = {}, G_4 = {}", taylor.get(2), taylor.get(4));

    // the N=2, D=2 stencil integrates x^p exactly on [-1/2, 1/2] up to its degree
    let spec = HermiteSolveSpec::new(2, 2)?;
    let stencil = solve_stencil(spec)?;
    for p in (0..=spec.degree()).step_by(2) {
        let exact = Rational::from((1, (1u64 << p) * (p as u64 + 1)));
        assert_eq!(stencil.apply_to_monomial(p), exact);
    }
    println!("N=2, D=2 stencil exact through degree {}", spec.degree());
    Ok(())
}
