//! Alternative derivative weights for the real-line rule
//! `I_G = h sum_j sum_k h^k G_k w^(k)(x_j)`.
//!
//! Two constructions are provided: truncating the Taylor expansion of the
//! integrand about each node, and a composite rule built from a Hermite
//! interpolation stencil over `2N` equally spaced points. The stencil
//! weights `g+_{ik}` follow from requiring exact integration of monomials
//! over the central cell, which is solved here in exact arithmetic since
//! the system is badly conditioned.

use std::io::Write;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::coefficients::{coeff_b, CoeffFamily};
use crate::error::{Error, Result};
use crate::exact::{render_float, render_rational, RationalJson};
use crate::linalg::{solve, RationalMatrix};
use crate::numeric::Precision;

/// Largest stencil system `N (D + 1)` solved unless raised explicitly.
pub const DEFAULT_MAX_UNKNOWNS: u32 = 200;

/// The `N` values tabulated for `D = 2` and `D = 4`.
pub const TABLE_N_VALUES: [u32; 9] = [1, 2, 3, 4, 6, 8, 10, 15, 20];

/// A stencil of `2N` points with derivatives up to order `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermiteSolveSpec {
    pub n: u32,
    pub d: u32,
}

impl HermiteSolveSpec {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("Hermite stencil needs N >= 1"));
        }
        Ok(HermiteSolveSpec { n, d })
    }

    pub fn unknowns(&self) -> u32 {
        self.n * (self.d + 1)
    }

    /// Degree of the interpolating polynomial, `2N(D+1) - 1`.
    pub fn degree(&self) -> u32 {
        2 * self.unknowns() - 1
    }
}

/// `G_k` for `k = 0..=D`, from either construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSetG {
    family: CoeffFamily,
    n: Option<u32>,
    order: u32,
    values: Vec<Rational>,
}

impl CoeffSetG {
    pub fn family(&self) -> CoeffFamily {
        self.family
    }

    /// Stencil half-width, `None` for Taylor truncation.
    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, k: u32) -> &Rational {
        &self.values[k as usize]
    }
}

/// `G_k = 1 / (2^k (k+1)!)` for even `k`, zero for odd `k`.
pub fn taylor_truncation_coeffs(d: u32) -> CoeffSetG {
    let values = (0..=d)
        .map(|k| {
            if k % 2 == 1 {
                Rational::new()
            } else {
                let den = Integer::from(Integer::factorial(k + 1)) << k;
                Rational::from((Integer::from(1), den))
            }
        })
        .collect();
    CoeffSetG {
        family: CoeffFamily::TaylorTruncation,
        n: None,
        order: d,
        values,
    }
}

/// Solved stencil weights `g+_{ik}`, `i = 1..=N`, `k = 0..=D`.
#[derive(Clone, Debug)]
pub struct HermiteStencil {
    spec: HermiteSolveSpec,
    g_plus: Vec<Rational>,
}

impl HermiteStencil {
    pub fn spec(&self) -> HermiteSolveSpec {
        self.spec
    }

    pub fn g_plus(&self, i: u32, k: u32) -> &Rational {
        &self.g_plus[((i - 1) * (self.spec.d + 1) + k) as usize]
    }

    /// `g-_{ik} = (-1)^k g+_{ik}`.
    pub fn g_minus(&self, i: u32, k: u32) -> Rational {
        let g = self.g_plus(i, k).clone();
        if k.is_multiple_of(2) {
            g
        } else {
            -g
        }
    }

    /// Apply the stencil to `x^p` with `h = 1`; exact integration gives
    /// `1 / (2^p (p+1))` for even `p` and zero for odd `p`.
    pub fn apply_to_monomial(&self, p: u32) -> Rational {
        let HermiteSolveSpec { n, d } = self.spec;
        let mut total = Rational::new();
        for i in 1..=n {
            let node = Rational::from((2 * i as i64 - 1, 2));
            for k in 0..=d.min(p) {
                let falling = falling_factorial(p, k);
                let pow = pow_rational(&node, p - k);
                let term_plus = Rational::from(self.g_plus(i, k) * &pow);
                let neg_pow = if (p - k).is_multiple_of(2) { pow } else { -pow };
                let term_minus = Rational::from(&self.g_minus(i, k) * &neg_pow);
                total += (term_plus + term_minus) * Rational::from(falling);
            }
        }
        total
    }

    pub fn coeffs(&self) -> CoeffSetG {
        let HermiteSolveSpec { n, d } = self.spec;
        let values = (0..=d)
            .map(|k| {
                (1..=n).fold(Rational::new(), |acc, i| {
                    acc + self.g_minus(i, k) + self.g_plus(i, k)
                })
            })
            .collect();
        CoeffSetG {
            family: CoeffFamily::HermiteInterpolation,
            n: Some(n),
            order: d,
            values,
        }
    }
}

fn falling_factorial(p: u32, k: u32) -> Integer {
    (p - k + 1..=p).fold(Integer::from(1), |acc, j| acc * j)
}

fn pow_rational(x: &Rational, e: u32) -> Rational {
    let num = Integer::from(x.numer().pow(e));
    let den = Integer::from(x.denom().pow(e));
    Rational::from((num, den))
}

/// Solve the even-`p` moment equations
/// `1/(p+1) = 2 sum_i sum_k g+_{ik} p!/(p-k)! (2i-1)^{p-k} 2^k`.
pub fn solve_stencil(spec: HermiteSolveSpec) -> Result<HermiteStencil> {
    solve_stencil_with_limit(spec, DEFAULT_MAX_UNKNOWNS)
}

pub fn solve_stencil_with_limit(spec: HermiteSolveSpec, max_unknowns: u32) -> Result<HermiteStencil> {
    let size = spec.unknowns();
    if size > max_unknowns {
        return Err(Error::domain(format!(
            "stencil system has {size} unknowns, above the limit of {max_unknowns}"
        )));
    }
    let HermiteSolveSpec { n, d } = spec;
    let size = size as usize;
    let mut a = RationalMatrix::zeros(size, size);
    let mut rhs = Vec::with_capacity(size);
    for row in 0..size {
        let p = 2 * row as u32;
        rhs.push(Rational::from((1, p + 1)));
        for i in 1..=n {
            let base = Integer::from(2 * i - 1);
            for k in 0..=d.min(p) {
                let col = ((i - 1) * (d + 1) + k) as usize;
                let v = (falling_factorial(p, k) * Integer::from((&base).pow(p - k))) << (k + 1);
                a.set(row, col, Rational::from(v));
            }
        }
    }
    let g_plus = solve(&a, &rhs).map_err(|e| match e {
        Error::Singular(msg) => Error::Singular(format!("Hermite stencil N={n}, D={d}: {msg}")),
        other => other,
    })?;
    Ok(HermiteStencil { spec, g_plus })
}

/// Composite Hermite-interpolation weights `G_k = sum_i (g-_{ik} + g+_{ik})`.
pub fn hermite_interp_coeffs(spec: HermiteSolveSpec) -> Result<CoeffSetG> {
    Ok(solve_stencil(spec)?.coeffs())
}

/// `B_{k,D} / (2 pi)^k`, the values the Hermite weights approach as `N` grows.
pub fn g_limit_reference(d: u32, prec: Precision) -> Result<Vec<Float>> {
    let b = coeff_b(d)?;
    let p = prec.bits() + 16;
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let mut scale = Float::with_val(p, 1u32);
    let mut out = Vec::with_capacity(d as usize + 1);
    for k in 0..=d {
        let mut v = Float::with_val(p, b.get(k)) / &scale;
        v.set_prec(prec.bits());
        out.push(v);
        scale *= &two_pi;
    }
    Ok(out)
}

/// One tabulated entry.
#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub d: u32,
    pub k: u32,
    pub value: RationalJson,
    pub decimal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub entries: Vec<TableEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitEntry {
    pub d: u32,
    pub k: u32,
    pub decimal: String,
}

/// `G_k` for every even `k >= 2` across several `D`, one row per `N`,
/// followed by the large-`N` limits.
#[derive(Clone, Debug, Serialize)]
pub struct HermiteTable {
    pub orders: Vec<u32>,
    pub rows: Vec<TableRow>,
    pub limit: Vec<LimitEntry>,
}

impl HermiteTable {
    pub fn build(ns: &[u32], ds: &[u32], digits: usize, prec: Precision) -> Result<Self> {
        let mut rows = Vec::with_capacity(ns.len());
        for &n in ns {
            let mut entries = Vec::new();
            for &d in ds {
                let g = hermite_interp_coeffs(HermiteSolveSpec::new(n, d)?)?;
                for k in (2..=d).step_by(2) {
                    entries.push(TableEntry {
                        d,
                        k,
                        value: g.get(k).into(),
                        decimal: render_rational(g.get(k), digits),
                    });
                }
            }
            rows.push(TableRow { n, entries });
        }
        let mut limit = Vec::new();
        for &d in ds {
            let lim = g_limit_reference(d, prec)?;
            for k in (2..=d).step_by(2) {
                limit.push(LimitEntry {
                    d,
                    k,
                    decimal: render_float(&lim[k as usize], digits),
                });
            }
        }
        Ok(HermiteTable {
            orders: ds.to_vec(),
            rows,
            limit,
        })
    }

    /// CSV in the tabulated layout: `N,D2_G2,D4_G2,D4_G4,...`, last row `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["N".to_string()];
        for &d in &self.orders {
            for k in (2..=d).step_by(2) {
                header.push(format!("D{d}_G{k}"));
            }
        }
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec = vec![row.n.to_string()];
            rec.extend(row.entries.iter().map(|e| e.decimal.clone()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let mut rec = vec!["inf".to_string()];
        rec.extend(self.limit.iter().map(|e| e.decimal.clone()));
        w.write_record(&rec).map_err(csv_err)?;
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
