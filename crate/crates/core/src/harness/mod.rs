//! Worked examples, reference values and convergence studies.

mod integrands;

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};

use rug::{Float, Integer, Rational};

pub use integrands::{
    bessel_i0_at_one, ExpCos, FourierSeries, Gaussian, GeometricFourier, Sharpness, ORACLE_MAX_ORDER,
};

use crate::bounds::{optimize_bound, Resolution, Theorem};
use crate::coefficients::{coeff_a, coeff_b, f_poly};
use crate::error::{Error, Result};
use crate::numeric::{Complex, Precision};
use crate::rules::{
    plain_trapezoid_periodic, trapezoid_periodic, trapezoid_realline, Integrand, IntegrandKind,
    RuleCoefficients, TruncationPolicy,
};

/// Where a reference value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    /// Plain trapezoid at large `N` and doubled precision.
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reference {
    pub value: Complex,
    pub provenance: Provenance,
}

pub type MOfA = Arc<dyn Fn(&Float) -> Float + Send + Sync>;
pub type PredictedA = Arc<dyn Fn(u32, &Resolution, Precision) -> Float + Send + Sync>;

/// Analyticity data feeding [`optimize_bound`].
#[derive(Clone)]
pub struct BoundParams {
    pub theorem: Theorem,
    pub m_of_a: MOfA,
    pub a_max: Float,
    /// Large-`N` (small-`h`) estimate of the optimal `a`, for comparison.
    pub predicted_a: Option<PredictedA>,
}

impl fmt::Debug for BoundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundParams")
            .field("theorem", &self.theorem)
            .field("a_max", &self.a_max)
            .finish_non_exhaustive()
    }
}

/// Which weights a case is integrated with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseRule {
    /// `A_{k,D}`; `D = 0` is the plain rule.
    HalfPlane,
    /// `B_{k,D}`; `D = 0` is the plain rule.
    Strip,
    /// `B_0 = 1`, `B_{2m} = (-1)^{m+1}`.
    Bailey { m: u32 },
}

#[derive(Clone)]
pub struct ExampleCase {
    pub name: String,
    pub integrand: Arc<dyn Integrand>,
    pub reference: Option<Reference>,
    pub bounds: Option<BoundParams>,
    pub rule: CaseRule,
    pub truncation: TruncationPolicy,
}

impl fmt::Debug for ExampleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleCase")
            .field("name", &self.name)
            .field("kind", &self.integrand.kind())
            .field("reference", &self.reference)
            .field("bounds", &self.bounds)
            .field("rule", &self.rule)
            .finish_non_exhaustive()
    }
}

impl ExampleCase {
    pub fn theorem(&self) -> Option<Theorem> {
        self.bounds.as_ref().map(|b| b.theorem)
    }

    /// Weights of order `d` for this case.
    pub fn coefficients(&self, d: u32) -> Result<RuleCoefficients> {
        match self.rule {
            CaseRule::HalfPlane if d == 0 => Ok(RuleCoefficients::unit()),
            CaseRule::HalfPlane => Ok(RuleCoefficients::from(&coeff_a(d)?)),
            CaseRule::Strip if d == 0 => Ok(RuleCoefficients::unit()),
            CaseRule::Strip => Ok(RuleCoefficients::from(&coeff_b(d)?)),
            CaseRule::Bailey { m } => RuleCoefficients::bailey(m),
        }
    }

    /// Switch to the single-correction rule of order `2m`.
    pub fn with_bailey(mut self, m: u32) -> Result<Self> {
        if self.integrand.kind() != IntegrandKind::RealLine {
            return Err(Error::domain("the Bailey correction applies to real-line cases only"));
        }
        if m < 1 {
            return Err(Error::domain("Bailey correction needs m >= 1"));
        }
        self.rule = CaseRule::Bailey { m };
        if let Some(b) = self.bounds.as_mut() {
            b.theorem = Theorem::Bailey { m };
            b.predicted_a = None;
        }
        Ok(self)
    }

    /// Apply the case's rule of order `d` at the given resolution.
    pub fn evaluate(&self, d: u32, resolution: &Resolution, prec: Precision) -> Result<Complex> {
        let coeffs = self.coefficients(d)?;
        match (self.integrand.kind(), resolution) {
            (IntegrandKind::Periodic, Resolution::Points(n)) => {
                trapezoid_periodic(self.integrand.as_ref(), *n, &coeffs, prec)
            }
            (IntegrandKind::RealLine, Resolution::Spacing(h)) => Ok(trapezoid_realline(
                self.integrand.as_ref(),
                h,
                &coeffs,
                &self.truncation,
                prec,
            )?
            .value),
            (kind, _) => Err(Error::domain(format!(
                "{} is a {kind} case and needs {}",
                self.name,
                if kind == IntegrandKind::Periodic { "N" } else { "h" }
            ))),
        }
    }
}

/// Work precision for setting up constants that feed a rule at `prec`.
fn setup(prec: Precision) -> Precision {
    prec.with_guard(64)
}

/// `v(theta) = 1/(e^b + e^{i theta})`, analytic for `Im theta > -b`.
pub fn example_periodic_complex(b: &Float, prec: Precision) -> Result<ExampleCase> {
    if !(b.is_finite() && *b > 0) {
        return Err(Error::domain("b must be positive and finite"));
    }
    let wp = setup(prec);
    let b = Float::with_val(wp.bits(), b);
    let value = Float::with_val(wp.bits(), -&b).exp() * wp.two_pi();
    let eb = Float::with_val(wp.bits(), b.exp_ref());
    let eb_m = eb.clone();
    let m_of_a: MOfA = Arc::new(move |a: &Float| {
        let bits = eb_m.prec();
        let ea = Float::with_val(bits, a.exp_ref());
        Float::with_val(bits, &eb_m - ea).recip()
    });
    let b_pred = b.clone();
    let predicted: PredictedA = Arc::new(move |d, res, prec| {
        let n = match res {
            Resolution::Points(n) => *n,
            Resolution::Spacing(_) => 1,
        };
        Float::with_val(prec.bits(), &b_pred) - Float::with_val(prec.bits(), 1u32) / ((d + 1) * n)
    });
    Ok(ExampleCase {
        name: "periodic-complex".into(),
        integrand: Arc::new(GeometricFourier::new(b.clone())),
        reference: Some(Reference {
            value: Complex::from_real(value).rounded(prec),
            provenance: Provenance::ClosedForm,
        }),
        bounds: Some(BoundParams {
            theorem: Theorem::PeriodicHalfPlane,
            m_of_a,
            a_max: b,
            predicted_a: Some(predicted),
        }),
        rule: CaseRule::HalfPlane,
        truncation: TruncationPolicy::default(),
    })
}

/// [`example_periodic_complex`] with `b = ln(e^b)` given exactly.
pub fn example_periodic_complex_exp(exp_b: &Rational, prec: Precision) -> Result<ExampleCase> {
    if *exp_b <= 1 {
        return Err(Error::domain("e^b must exceed 1"));
    }
    let b = Float::with_val(setup(prec).bits(), exp_b).ln();
    example_periodic_complex(&b, prec)
}

/// Upper end of the search interval for entire integrands.
pub const ENTIRE_A_MAX: f64 = 20.0;

/// `v(theta) = e^{cos theta}`, bounded by `e^{cosh a}` in `|Im theta| < a`.
pub fn example_periodic_real(prec: Precision) -> Result<ExampleCase> {
    let wp = setup(prec);
    let value = bessel_i0_at_one(wp) * wp.two_pi();
    let m_of_a: MOfA = Arc::new(|a: &Float| Float::with_val(a.prec(), a.cosh_ref()).exp());
    let predicted: PredictedA = Arc::new(|d, res, prec| {
        let n = match res {
            Resolution::Points(n) => *n,
            Resolution::Spacing(_) => 1,
        };
        Float::with_val(prec.bits(), (d + 2) * n).ln()
    });
    Ok(ExampleCase {
        name: "periodic-real".into(),
        integrand: Arc::new(ExpCos::new()),
        reference: Some(Reference {
            value: Complex::from_real(value).rounded(prec),
            provenance: Provenance::ClosedForm,
        }),
        bounds: Some(BoundParams {
            theorem: Theorem::PeriodicStrip,
            m_of_a,
            a_max: Float::with_val(wp.bits(), ENTIRE_A_MAX),
            predicted_a: Some(predicted),
        }),
        rule: CaseRule::Strip,
        truncation: TruncationPolicy::default(),
    })
}

/// `J(a) = int dx / |(x + ia)^2 + L^2| = pi / AGM(L + a, L - a)`.
pub fn sharpness_j(a: &Float, l: &Float) -> Float {
    let bits = a.prec().max(l.prec());
    let hi = Float::with_val(bits, l + a);
    let lo = Float::with_val(bits, l - a);
    let agm = Float::with_val(bits, hi.agm_ref(&lo));
    Float::with_val(bits, rug::float::Constant::Pi) / agm
}

fn check_sharpness(d: u32, h: &Rational, l: &Rational) -> Result<()> {
    if !d.is_multiple_of(2) {
        return Err(Error::domain(format!("sharpness case needs an even D, got {d}")));
    }
    if *h <= 0 || *l <= 0 {
        return Err(Error::domain("sharpness case needs h > 0 and L > 0"));
    }
    Ok(())
}

/// `w(x) = cos(2 pi (D/2+1) x / h) / (x^2 + L^2)`.
///
/// The integral is `(pi/L) e^{-cL}`; on the lines `Im x = +-a`, `a < L`, the
/// `L^1` norm is at most `cosh(c a) J(a)`.
pub fn example_realline_sharpness(
    d: u32,
    h: &Rational,
    l: &Rational,
    prec: Precision,
) -> Result<ExampleCase> {
    check_sharpness(d, h, l)?;
    let wp = setup(prec);
    let w = Sharpness::new(d, h.clone(), l.clone());
    let c = w.frequency(wp);
    let lf = Float::with_val(wp.bits(), l);
    let value = Float::with_val(wp.bits(), wp.pi() / &lf)
        * (-Float::with_val(wp.bits(), &c * &lf)).exp();
    let l_m = lf.clone();
    let m_of_a: MOfA = Arc::new(move |a: &Float| {
        let bits = c.prec();
        let ca = Float::with_val(bits, &c * a);
        ca.cosh() * sharpness_j(&Float::with_val(bits, a), &l_m)
    });
    Ok(ExampleCase {
        name: "realline-sharpness".into(),
        integrand: Arc::new(w),
        reference: Some(Reference {
            value: Complex::from_real(value).rounded(prec),
            provenance: Provenance::ClosedForm,
        }),
        bounds: Some(BoundParams {
            theorem: Theorem::RealLineStrip,
            m_of_a,
            a_max: lf,
            predicted_a: None,
        }),
        rule: CaseRule::Strip,
        truncation: TruncationPolicy::extrapolated(),
    })
}

/// `I_{h,D} - I = (2pi/L) cosh(cL) sum_{l > D/2} F_{l,D} e^{-2 pi l L/h}` for the
/// sharpness integrand.
pub fn sharpness_error_series(d: u32, h: &Rational, l: &Rational, prec: Precision) -> Result<Float> {
    check_sharpness(d, h, l)?;
    let wp = setup(prec);
    let bits = wp.bits();
    let lf = Float::with_val(bits, l);
    let hf = Float::with_val(bits, h);
    let step = Float::with_val(bits, wp.two_pi() * &lf) / &hf;
    let eps = Float::with_val(bits, 1u32) >> (prec.bits() + 16);
    let mut acc = Float::with_val(bits, 0u32);
    let mut ell = d / 2 + 1;
    let mut small = 0;
    while small < 4 {
        let e = (-Float::with_val(bits, &step * ell)).exp();
        let term = Float::with_val(bits, f_poly(ell, d)?) * e;
        if Float::with_val(bits, term.abs_ref()) <= Float::with_val(bits, acc.abs_ref()) * &eps {
            small += 1;
        } else {
            small = 0;
        }
        acc += term;
        ell += 1;
        if ell > 10_000_000 {
            return Err(Error::Truncation("sharpness error series did not converge".into()));
        }
    }
    let c = Sharpness::new(d, h.clone(), l.clone()).frequency(wp);
    let cosh = Float::with_val(bits, Float::with_val(bits, &c * &lf).cosh());
    let pre = Float::with_val(bits, wp.two_pi() / &lf) * cosh;
    Ok(Float::with_val(prec.bits(), pre * acc))
}

/// `(pi/L) (-1)^{D/2} C(D+1, D/2)`, the `h -> 0` limit of the sharpness error.
pub fn sharpness_error_limit(d: u32, l: &Rational, prec: Precision) -> Float {
    let binom = Integer::from(d + 1).binomial(d / 2);
    let v = Float::with_val(prec.bits(), prec.pi() / Float::with_val(prec.bits(), l)) * binom;
    if (d / 2) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `w(x) = e^{-x^2}` with `int |w(x + ib)| dx = sqrt(pi) e^{b^2}`.
pub fn example_gaussian(prec: Precision) -> Result<ExampleCase> {
    let wp = setup(prec);
    let m_of_a: MOfA = Arc::new(|a: &Float| {
        let bits = a.prec();
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        pi.sqrt() * Float::with_val(bits, a.square_ref()).exp()
    });
    Ok(ExampleCase {
        name: "gaussian".into(),
        integrand: Arc::new(Gaussian),
        reference: Some(Reference {
            value: Complex::from_real(wp.pi().sqrt()).rounded(prec),
            provenance: Provenance::ClosedForm,
        }),
        bounds: Some(BoundParams {
            theorem: Theorem::RealLineStrip,
            m_of_a,
            a_max: Float::with_val(wp.bits(), 50u32),
            predicted_a: None,
        }),
        rule: CaseRule::Strip,
        truncation: TruncationPolicy::adaptive_for(prec),
    })
}

/// A user-supplied finite Fourier series; the reference is `2 pi c_0`.
pub fn example_user_series(series: FourierSeries, prec: Precision) -> ExampleCase {
    let value = series.integral(prec);
    ExampleCase {
        name: "user-series".into(),
        integrand: Arc::new(series),
        reference: Some(Reference {
            value,
            provenance: Provenance::ClosedForm,
        }),
        bounds: None,
        rule: CaseRule::Strip,
        truncation: TruncationPolicy::default(),
    }
}

/// Plain trapezoid at `n` points and doubled precision.
pub fn oracle_reference(case: &ExampleCase, n: u32, prec: Precision) -> Result<Reference> {
    let doubled = Precision::new(prec.bits() * 2)?;
    let v = plain_trapezoid_periodic(case.integrand.as_ref(), n, doubled)?;
    Ok(Reference {
        value: v.rounded(prec),
        provenance: Provenance::Oracle,
    })
}

/// One `(D, N)` or `(D, h)` point of a study.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub example: String,
    pub theorem: Option<Theorem>,
    pub d: u32,
    pub resolution: Resolution,
    pub approx: Complex,
    pub reference: Option<Complex>,
    pub abs_error: Option<Float>,
    pub bound_exact: Option<Float>,
    pub bound_asymptotic: Option<Float>,
    pub a_opt: Option<Float>,
    pub predicted_a: Option<Float>,
    pub precision_bits: u32,
}

impl ConvergenceRow {
    /// `2^{-bits + 16}`.
    pub fn floor(&self) -> Float {
        Float::with_val(self.precision_bits, 1u32) >> (self.precision_bits as i32 - 16)
    }

    pub fn above_floor(&self) -> bool {
        self.abs_error.as_ref().is_some_and(|e| *e > self.floor())
    }

    /// `Some(false)` only for a row whose error is above the floor yet exceeds
    /// the exact-form bound by more than the floor, the resolution to which
    /// the error itself is known.
    pub fn within_bound(&self) -> Option<bool> {
        let (e, b) = (self.abs_error.as_ref()?, self.bound_exact.as_ref()?);
        let slack = Float::with_val(b.prec(), b + self.floor());
        Some(!self.above_floor() || *e <= slack)
    }
}

fn compare_resolution(a: &Resolution, b: &Resolution) -> Ordering {
    match (a, b) {
        (Resolution::Points(x), Resolution::Points(y)) => x.cmp(y),
        (Resolution::Spacing(x), Resolution::Spacing(y)) => {
            x.partial_cmp(y).unwrap_or(Ordering::Equal)
        }
        (Resolution::Points(_), _) => Ordering::Less,
        _ => Ordering::Greater,
    }
}

/// Evaluate one study point, with the optimized bound if the case has one.
pub fn study_row(
    case: &ExampleCase,
    d: u32,
    resolution: &Resolution,
    prec: Precision,
) -> Result<ConvergenceRow> {
    let context = |e: Error| match e {
        Error::Oracle { point, order, reason } => Error::Oracle {
            point,
            order,
            reason: format!("{reason} ({} D={d} at {})", case.name, describe(resolution)),
        },
        other => other,
    };
    let approx = case.evaluate(d, resolution, prec).map_err(context)?;
    let reference = case.reference.as_ref().map(|r| r.value.clone());
    let abs_error = reference.as_ref().map(|r| (&approx - r).abs());
    let (mut bound_exact, mut bound_asymptotic, mut a_opt, mut predicted_a) = (None, None, None, None);
    if let Some(params) = &case.bounds {
        let opt = optimize_bound(
            params.theorem,
            d,
            resolution,
            params.m_of_a.as_ref(),
            &params.a_max,
            prec,
        )?;
        bound_exact = Some(opt.bound);
        bound_asymptotic = Some(opt.asymptotic);
        a_opt = Some(opt.a_opt);
        predicted_a = params.predicted_a.as_ref().map(|f| f(d, resolution, prec));
    }
    Ok(ConvergenceRow {
        example: case.name.clone(),
        theorem: case.theorem(),
        d,
        resolution: resolution.clone(),
        approx,
        reference,
        abs_error,
        bound_exact,
        bound_asymptotic,
        a_opt,
        predicted_a,
        precision_bits: prec.bits(),
    })
}

fn describe(r: &Resolution) -> String {
    match r {
        Resolution::Points(n) => format!("N={n}"),
        Resolution::Spacing(h) => format!("h={}", h.to_f64()),
    }
}

/// Run `jobs` on a small thread pool and return results in job order.
fn run_parallel<T, F>(count: usize, job: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, AtomicOrdering::Relaxed);
                if i >= count {
                    break;
                }
                let r = job(i);
                slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

fn sorted(mut rows: Vec<ConvergenceRow>) -> Vec<ConvergenceRow> {
    rows.sort_by(|a, b| a.d.cmp(&b.d).then_with(|| compare_resolution(&a.resolution, &b.resolution)));
    rows
}

/// Every `(D, N or h)` combination, sorted by `D` then resolution.
pub fn run_convergence_study(
    case: &ExampleCase,
    d_list: &[u32],
    resolutions: &[Resolution],
    prec: Precision,
) -> Result<Vec<ConvergenceRow>> {
    if let Some(&max_d) = d_list.iter().max() {
        let needed = match case.rule {
            CaseRule::Bailey { m } => 2 * m,
            _ => max_d,
        };
        if case.integrand.max_order() < needed {
            return Err(Error::domain(format!(
                "{} supports derivatives up to order {}, D={needed} requested",
                case.name,
                case.integrand.max_order()
            )));
        }
    }
    let points: Vec<(u32, &Resolution)> = d_list
        .iter()
        .flat_map(|&d| resolutions.iter().map(move |r| (d, r)))
        .collect();
    let rows = run_parallel(points.len(), |i| study_row(case, points[i].0, points[i].1, prec));
    Ok(sorted(rows.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Sharpness study: one integrand per `(D, h)`, since `w` depends on both.
pub fn run_sharpness_study(
    d_list: &[u32],
    h_list: &[Rational],
    l: &Rational,
    bailey_m: Option<u32>,
    prec: Precision,
) -> Result<Vec<ConvergenceRow>> {
    let points: Vec<(u32, &Rational)> = d_list
        .iter()
        .flat_map(|&d| h_list.iter().map(move |h| (d, h)))
        .collect();
    let rows = run_parallel(points.len(), |i| {
        let (d, h) = points[i];
        let mut case = example_realline_sharpness(d, h, l, prec)?;
        if let Some(m) = bailey_m {
            case = case.with_bailey(m)?;
        }
        let hf = Float::with_val(prec.bits() + 64, h);
        study_row(&case, d, &Resolution::Spacing(hf), prec)
    });
    Ok(sorted(rows.into_iter().collect::<Result<Vec<_>>>()?))
}
