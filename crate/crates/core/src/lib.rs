//! Trapezoidal rules corrected with derivative values, in extended precision.
//!
//! For a periodic `v` the rule of order `D` is
//!
//! ```text
//! I_{N,D} = (2 pi / N) sum_{j=1}^{N} sum_{k=0}^{D} N^{-k} C_k v^(k)(2 pi j / N)
//! ```
//!
//! and on the whole real line `I_{h,D} = h sum_j sum_k (h / 2 pi)^k B_k w^(k)(jh)`.
//! The weights `C_k` are either the half-plane weights `A_{k,D}` (for `v`
//! analytic in `Im theta > -a`) or the strip weights `B_{k,D}` (analytic in
//! `|Im theta| < a`); both are exact rationals chosen so the first `D` (resp.
//! `D/2`) aliases of the plain rule cancel.
//!
//! * [`coefficients`]: `A_{k,D}`, `B_{k,D}`, their alias weights `E` and `F`.
//! * [`rules`]: the periodic and real-line rules over a derivative oracle.
//! * [`bounds`]: derivative-free error bounds in `(M, a)` and their
//!   optimization over `a`.
//! * [`hermite`]: weights from composite Hermite interpolation, solved exactly.
//! * [`harness`]: worked examples with reference values and convergence studies.
//! * [`cli`]: the `derivquad` command line.
//!
//! ```
//! use derivquad::coefficients::coeff_b;
//! use derivquad::harness::{example_periodic_real, study_row};
//! use derivquad::bounds::Resolution;
//! use derivquad::numeric::Precision;
//!
//! let b = coeff_b(4).unwrap();
//! assert_eq!(b.get(2).to_string(), "5/4");
//!
//! // e^{cos theta} with N = 4 points and derivatives up to order 4
//! let prec = Precision::new(256).unwrap();
//! let case = example_periodic_real(prec).unwrap();
//! let row = study_row(&case, 4, &Resolution::Points(4), prec).unwrap();
//! assert!(row.abs_error.unwrap() < row.bound_exact.unwrap());
//! ```

pub mod coefficients;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod linalg;
pub mod numeric;
pub mod rules;
pub mod bounds;
pub mod cli;
pub mod harness;
