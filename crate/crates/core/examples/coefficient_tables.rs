//! Exact half-plane and strip weights, and the large-D limit of the strip weights.
//!
//! ```text
//! cargo run --example coefficient_tables
//! ```

use derivquad::coefficients::{coeff_a, coeff_b, coeff_b_limit, e_poly, f_poly};
use derivquad::error::Result;
use derivquad::exact::render_rational;
use derivquad::numeric::Precision;

fn main() -> Result<()> {
    println!("A_{{k,D}} (half-plane weights)");
    for d in 1..=6 {
        let a = coeff_a(d)?;
        let row: Vec<String> = (1..=d).map(|k| a.get(k).to_string()).collect();
        println!("  D={d}: {}", row.join(", "));
    }

    println!("\nB_{{2m,D}} (strip weights)");
    for d in (2..=10).step_by(2) {
        let b = coeff_b(d)?;
        let row: Vec<String> = (2..=d).step_by(2).map(|k| b.get(k).to_string()).collect();
        println!("  D={d:2}: {}", row.join(", "));
    }

    let prec = Precision::new(128)?;
    println!("\nB_{{2m,40}} against pi^{{2m}}/(2m+1)!");
    let b40 = coeff_b(40)?;
    for m in 1..=4 {
        println!(
            "  m={m}: {:>22}  limit {}",
            render_rational(b40.get(2 * m), 15),
            derivquad::exact::render_float(&coeff_b_limit(m, prec), 15)
        );
    }

    // the weights annihilate the first aliases: E_{l,D} and F_{l,D} vanish there
    println!("\nalias weights for D=4");
    for ell in 0..=7 {
        println!("  l={ell}: E={:>6}  F={:>6}", e_poly(ell, 4).to_string(), f_poly(ell, 4)?.to_string());
    }
    Ok(())
}
