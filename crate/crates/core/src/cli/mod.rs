//! The `derivquad` command line.
//!
//! ```text
//! derivquad coeffs    --family A|B|G-taylor|G-hermite|B-limit --D 4 [--N 1:4] [--table]
//! derivquad study     --example periodic-real --D 0,2,4 --N 2:20
//! derivquad integrate --example periodic-real --N 4 --D 4
//! derivquad bound     --theorem periodic-strip --M 3 --a 1 --D 2 --N 8
//! ```
//!
//! Exit status is 0 on success, 2 for usage or parameter errors and 3 when
//! the numerics fail (truncation that never settles, a singular solve, a
//! failing derivative oracle).

pub mod ranges;
pub mod records;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Rational};
use serde::Deserialize;

use crate::bounds::{bound, BoundForm, BoundSpec, Resolution, Theorem};
use crate::coefficients::{coeff_a, coeff_b, coeff_b_limit};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, render_float, ComplexRational, DEFAULT_DIGITS};
use crate::harness::FourierSeries;
use crate::harness::{
    example_gaussian, example_periodic_complex, example_periodic_complex_exp, example_periodic_real,
    example_realline_sharpness, example_user_series, run_convergence_study, run_sharpness_study,
    study_row, CaseRule, ExampleCase,
};
use crate::hermite::{hermite_interp_coeffs, taylor_truncation_coeffs, HermiteSolveSpec, HermiteTable, TABLE_N_VALUES};
use crate::numeric::Precision;
use crate::rules::IntegrandKind;

use ranges::{parse_rational_list, parse_u32_list};
use records::{write_csv, write_json, write_study_csv, CoeffJson, CoeffRecord, StudyRecord};

#[derive(Debug, Parser)]
#[command(name = "derivquad", version, about = "Derivative-corrected trapezoidal rules in extended precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficient tables.
    Coeffs(CoeffsArgs),
    /// Convergence study of a built-in example, one row per (D, N or h).
    Study(StudyArgs),
    /// A single rule evaluation.
    Integrate(IntegrateArgs),
    /// Evaluate one error bound for given M, a, D and N or h.
    Bound(BoundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Working precision in bits (at least 53).
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    /// Significant digits in decimal columns (round half to even).
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub digits: usize,
}

impl Common {
    fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision)
    }

    fn digits(&self) -> Result<usize> {
        if self.digits == 0 {
            return Err(Error::Config("--digits must be at least 1".into()));
        }
        Ok(self.digits)
    }

    fn emit(&self, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(create(path)?);
                f(&mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                f(&mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "G-taylor")]
    GTaylor,
    #[value(name = "G-hermite")]
    GHermite,
    #[value(name = "B-limit")]
    BLimit,
}

impl Family {
    fn label(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::GTaylor => "G-taylor",
            Family::GHermite => "G-hermite",
            Family::BLimit => "B-limit",
        }
    }
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Order, or a list such as `2,4`.
    #[arg(long = "D")]
    pub d: String,
    /// Stencil half-widths for G-hermite, e.g. `1:4` or `1,2,3,4,6`.
    #[arg(long = "N")]
    pub n: Option<String>,
    /// G-hermite only: one row per N plus the large-N limit.
    #[arg(long)]
    pub table: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    #[value(name = "periodic-complex")]
    PeriodicComplex,
    #[value(name = "periodic-real")]
    PeriodicReal,
    #[value(name = "realline-sharpness")]
    RealLineSharpness,
    Gaussian,
}

/// Parameters shared by every built-in example.
#[derive(Debug, Args)]
pub struct ExampleParams {
    /// `e^b` for periodic-complex, exact (default 2).
    #[arg(long = "b-exp", conflicts_with = "b")]
    pub b_exp: Option<String>,
    /// `b` itself for periodic-complex.
    #[arg(long)]
    pub b: Option<String>,
    /// Pole distance for realline-sharpness.
    #[arg(long = "L", default_value = "1")]
    pub l: String,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long, value_enum)]
    pub example: Example,
    #[command(flatten)]
    pub params: ExampleParams,
    /// Orders, e.g. `0,2,4`.
    #[arg(long = "D")]
    pub d: String,
    /// Point counts for periodic examples, e.g. `2:20`.
    #[arg(long = "N", conflicts_with = "h")]
    pub n: Option<String>,
    /// Spacings for real-line examples, e.g. `2,1,1/2`.
    #[arg(long)]
    pub h: Option<String>,
    /// Replace the rule by the single correction of order 2m.
    #[arg(long)]
    pub bailey: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Periodic,
    Realline,
    Bailey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightFamily {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long, value_enum, required_unless_present = "user_series", conflicts_with = "user_series")]
    pub example: Option<Example>,
    /// JSON array of `{"ell": int, "c_re": "p/q", "c_im": "p/q"}`.
    #[arg(long = "user-series")]
    pub user_series: Option<PathBuf>,
    #[command(flatten)]
    pub params: ExampleParams,
    /// Defaults to the integrand's natural rule.
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    #[arg(long = "N", conflicts_with = "h")]
    pub n: Option<u32>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long = "D", default_value_t = 0)]
    pub d: u32,
    /// Correction order 2m for `--rule bailey`.
    #[arg(long)]
    pub m: Option<u32>,
    /// Override the weight family for periodic rules.
    #[arg(long, value_enum)]
    pub family: Option<WeightFamily>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    #[value(name = "periodic-halfplane")]
    PeriodicHalfPlane,
    #[value(name = "periodic-strip")]
    PeriodicStrip,
    #[value(name = "realline-strip")]
    RealLineStrip,
    #[value(name = "realline-halfplane")]
    RealLineHalfPlane,
    Bailey,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub theorem: TheoremArg,
    #[arg(long = "M")]
    pub m_norm: String,
    #[arg(long)]
    pub a: String,
    #[arg(long = "D", default_value_t = 0)]
    pub d: u32,
    #[arg(long = "N", conflicts_with = "h")]
    pub n: Option<u32>,
    #[arg(long)]
    pub h: Option<String>,
    /// Bailey correction index.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, default_value = "exact")]
    pub form: String,
    #[command(flatten)]
    pub common: Common,
}

/// Parse the process arguments, run, and map the outcome to an exit status.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("derivquad: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    if e.is_numeric_failure() {
        3
    } else {
        2
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Coeffs(a) => cmd_coeffs(&a),
        Command::Study(a) => cmd_study(&a),
        Command::Integrate(a) => cmd_integrate(&a),
        Command::Bound(a) => cmd_bound(&a),
    }
}

/// Coefficient rows for `family` at each order in `ds`.
pub fn coeff_records(
    family: Family,
    ds: &[u32],
    ns: Option<&[u32]>,
    digits: usize,
    prec: Precision,
) -> Result<Vec<CoeffRecord>> {
    let label = family.label();
    let mut out = Vec::new();
    for &d in ds {
        match family {
            Family::A => {
                let a = coeff_a(d)?;
                out.extend((1..=d).map(|k| CoeffRecord::exact(label, d, None, k, a.get(k), digits)));
            }
            Family::B => {
                let b = coeff_b(d)?;
                out.extend(
                    (2..=d)
                        .step_by(2)
                        .map(|k| CoeffRecord::exact(label, d, None, k, &ComplexRational::real(b.get(k).clone()), digits)),
                );
            }
            Family::GTaylor => {
                let g = taylor_truncation_coeffs(d);
                out.extend(
                    (2..=d)
                        .step_by(2)
                        .map(|k| CoeffRecord::exact(label, d, None, k, &ComplexRational::real(g.get(k).clone()), digits)),
                );
            }
            Family::GHermite => {
                let ns = ns.ok_or_else(|| Error::Config("G-hermite needs --N".into()))?;
                for &n in ns {
                    let g = hermite_interp_coeffs(HermiteSolveSpec::new(n, d)?)?;
                    out.extend((2..=d).step_by(2).map(|k| {
                        CoeffRecord::exact(label, d, Some(n), k, &ComplexRational::real(g.get(k).clone()), digits)
                    }));
                }
            }
            Family::BLimit => {
                if d % 2 != 0 {
                    return Err(Error::Domain(format!("B-limit needs an even D, got {d}")));
                }
                out.extend((1..=d / 2).map(|m| CoeffRecord::numeric(label, d, 2 * m, &coeff_b_limit(m, prec), digits)));
            }
        }
    }
    Ok(out)
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<()> {
    let prec = a.common.precision()?;
    let digits = a.common.digits()?;
    let ds = parse_u32_list(&a.d)?;
    let ns = a.n.as_deref().map(parse_u32_list).transpose()?;
    if a.table {
        if a.family != Family::GHermite {
            return Err(Error::Config("--table applies to G-hermite only".into()));
        }
        let ns = ns.unwrap_or_else(|| TABLE_N_VALUES.to_vec());
        let table = HermiteTable::build(&ns, &ds, digits, prec)?;
        return a.common.emit(|w| match a.common.format {
            Format::Csv => table.write_csv(w),
            Format::Json => write_json(&table, w),
        });
    }
    let rows = coeff_records(a.family, &ds, ns.as_deref(), digits, prec)?;
    a.common.emit(|w| match a.common.format {
        Format::Csv => {
            if rows.is_empty() {
                writeln!(w, "{}", records::COEFF_HEADER)?;
                Ok(())
            } else {
                write_csv(&rows, w)
            }
        }
        Format::Json => {
            let json = rows.iter().map(CoeffJson::try_from).collect::<Result<Vec<_>>>()?;
            write_json(&json, w)
        }
    })
}

fn parse_float(s: &str, what: &str, prec: Precision) -> Result<Float> {
    parse_rational(s)
        .map(|q| Float::with_val(prec.bits() + 64, q))
        .map_err(|e| Error::Parse(format!("--{what}: {e}")))
}

fn positive_rational(s: &str, what: &str) -> Result<Rational> {
    let q = parse_rational(s).map_err(|e| Error::Parse(format!("--{what}: {e}")))?;
    if q <= 0 {
        return Err(Error::Domain(format!("--{what} must be positive")));
    }
    Ok(q)
}

fn periodic_complex(params: &ExampleParams, prec: Precision) -> Result<ExampleCase> {
    match (&params.b, &params.b_exp) {
        (Some(b), _) => example_periodic_complex(&parse_float(b, "b", prec)?, prec),
        (None, e) => example_periodic_complex_exp(&parse_rational(e.as_deref().unwrap_or("2"))?, prec),
    }
}

/// Every built-in example except the sharpness one, whose integrand depends on `(D, h)`.
fn fixed_example(example: Example, params: &ExampleParams, prec: Precision) -> Result<ExampleCase> {
    match example {
        Example::PeriodicComplex => periodic_complex(params, prec),
        Example::PeriodicReal => example_periodic_real(prec),
        Example::Gaussian => example_gaussian(prec),
        Example::RealLineSharpness => unreachable!("built per (D, h)"),
    }
}

fn spacings(h: Option<&str>, prec: Precision) -> Result<Vec<Resolution>> {
    let h = h.ok_or_else(|| Error::Config("real-line examples need --h".into()))?;
    parse_rational_list(h)?
        .into_iter()
        .map(|q| {
            if q <= 0 {
                return Err(Error::Domain("h must be positive".into()));
            }
            Ok(Resolution::Spacing(Float::with_val(prec.bits() + 64, q)))
        })
        .collect()
}

fn cmd_study(a: &StudyArgs) -> Result<()> {
    let prec = a.common.precision()?;
    let digits = a.common.digits()?;
    let ds = parse_u32_list(&a.d)?;
    let rows = match a.example {
        Example::RealLineSharpness => {
            if a.n.is_some() {
                return Err(Error::Config("realline-sharpness takes --h, not --N".into()));
            }
            let hs = parse_rational_list(a.h.as_deref().ok_or_else(|| Error::Config("realline-sharpness needs --h".into()))?)?;
            let l = positive_rational(&a.params.l, "L")?;
            run_sharpness_study(&ds, &hs, &l, a.bailey, prec)?
        }
        ex => {
            let mut case = fixed_example(ex, &a.params, prec)?;
            if let Some(m) = a.bailey {
                case = case.with_bailey(m)?;
            }
            let res = match case.integrand.kind() {
                IntegrandKind::Periodic => {
                    if a.h.is_some() {
                        return Err(Error::Config(format!("{} takes --N, not --h", case.name)));
                    }
                    let n = a.n.as_deref().ok_or_else(|| Error::Config(format!("{} needs --N", case.name)))?;
                    parse_u32_list(n)?
                        .into_iter()
                        .map(|n| if n == 0 { Err(Error::Domain("N must be >= 1".into())) } else { Ok(Resolution::Points(n)) })
                        .collect::<Result<Vec<_>>>()?
                }
                IntegrandKind::RealLine => {
                    if a.n.is_some() {
                        return Err(Error::Config(format!("{} takes --h, not --N", case.name)));
                    }
                    spacings(a.h.as_deref(), prec)?
                }
            };
            run_convergence_study(&case, &ds, &res, prec)?
        }
    };
    let recs: Vec<StudyRecord> = rows.iter().map(|r| StudyRecord::from_row(r, digits)).collect();
    a.common.emit(|w| match a.common.format {
        Format::Csv => write_study_csv(&recs, w),
        Format::Json => write_json(&recs, w),
    })
}

#[derive(Deserialize)]
struct SeriesTerm {
    ell: i64,
    c_re: String,
    c_im: String,
}

/// Read a user Fourier series from JSON.
pub fn read_user_series(path: &Path) -> Result<FourierSeries> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_user_series(&text)
}

pub fn parse_user_series(text: &str) -> Result<FourierSeries> {
    let terms: Vec<SeriesTerm> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("user series: {e}")))?;
    if terms.is_empty() {
        return Err(Error::Parse("user series has no terms".into()));
    }
    let terms = terms
        .into_iter()
        .map(|t| Ok((t.ell, ComplexRational::new(parse_rational(&t.c_re)?, parse_rational(&t.c_im)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierSeries::new(terms))
}

fn cmd_integrate(a: &IntegrateArgs) -> Result<()> {
    let prec = a.common.precision()?;
    let digits = a.common.digits()?;
    let h = a.h.as_deref().map(|s| positive_rational(s, "h")).transpose()?;
    let mut case = match (a.example, &a.user_series) {
        (_, Some(path)) => example_user_series(read_user_series(path)?, prec),
        (Some(Example::RealLineSharpness), None) => {
            let h = h.as_ref().ok_or_else(|| Error::Config("realline-sharpness needs --h".into()))?;
            example_realline_sharpness(a.d, h, &positive_rational(&a.params.l, "L")?, prec)?
        }
        (Some(ex), None) => fixed_example(ex, &a.params, prec)?,
        (None, None) => return Err(Error::Config("give --example or --user-series".into())),
    };
    let kind = case.integrand.kind();
    let rule = a.rule.unwrap_or(match kind {
        IntegrandKind::Periodic => RuleArg::Periodic,
        IntegrandKind::RealLine => RuleArg::Realline,
    });
    match (rule, kind) {
        (RuleArg::Periodic, IntegrandKind::Periodic) | (RuleArg::Realline, IntegrandKind::RealLine) => {}
        (RuleArg::Bailey, IntegrandKind::RealLine) => {
            let m = a.m.ok_or_else(|| Error::Config("--rule bailey needs --m".into()))?;
            case = case.with_bailey(m)?;
        }
        (r, k) => {
            return Err(Error::Domain(format!("rule {r:?} does not apply to the {k} integrand {}", case.name)));
        }
    }
    if a.m.is_some() && rule != RuleArg::Bailey {
        return Err(Error::Config("--m applies to --rule bailey only".into()));
    }
    if let Some(f) = a.family {
        if kind != IntegrandKind::Periodic {
            return Err(Error::Config("--family applies to periodic rules only".into()));
        }
        let wanted = match f {
            WeightFamily::A => CaseRule::HalfPlane,
            WeightFamily::B => CaseRule::Strip,
        };
        if wanted != case.rule {
            // the case's bound belongs to its native weights
            case.rule = wanted;
            case.bounds = None;
        }
    }
    let resolution = match kind {
        IntegrandKind::Periodic => {
            if h.is_some() {
                return Err(Error::Config("periodic rules take --N, not --h".into()));
            }
            match a.n {
                Some(0) | None => return Err(Error::Config("periodic rules need --N >= 1".into())),
                Some(n) => Resolution::Points(n),
            }
        }
        IntegrandKind::RealLine => {
            if a.n.is_some() {
                return Err(Error::Config("real-line rules take --h, not --N".into()));
            }
            let h = h.ok_or_else(|| Error::Config("real-line rules need --h".into()))?;
            Resolution::Spacing(Float::with_val(prec.bits() + 64, h))
        }
    };
    let row = study_row(&case, a.d, &resolution, prec)?;
    let rec = StudyRecord::from_row(&row, digits);
    a.common.emit(|w| match a.common.format {
        Format::Csv => write_study_csv(std::slice::from_ref(&rec), w),
        Format::Json => write_json(&rec, w),
    })
}

#[derive(serde::Serialize)]
struct BoundRecord {
    theorem: String,
    form: String,
    #[serde(rename = "M")]
    m: String,
    a: String,
    #[serde(rename = "D")]
    d: u32,
    #[serde(rename = "N_or_h")]
    n_or_h: String,
    bound: String,
}

fn cmd_bound(a: &BoundArgs) -> Result<()> {
    let prec = a.common.precision()?;
    let digits = a.common.digits()?;
    let form: BoundForm = a.form.parse()?;
    let theorem = match a.theorem {
        TheoremArg::PeriodicHalfPlane => Theorem::PeriodicHalfPlane,
        TheoremArg::PeriodicStrip => Theorem::PeriodicStrip,
        TheoremArg::RealLineStrip => Theorem::RealLineStrip,
        TheoremArg::RealLineHalfPlane => Theorem::RealLineHalfPlane,
        TheoremArg::Bailey => Theorem::Bailey {
            m: a.m.ok_or_else(|| Error::Config("--theorem bailey needs --m".into()))?,
        },
    };
    let (resolution, n_or_h) = match (a.n, &a.h) {
        (Some(n), None) => (Resolution::Points(n), n.to_string()),
        (None, Some(h)) => (Resolution::Spacing(parse_float(h, "h", prec)?), h.clone()),
        _ => return Err(Error::Config("give exactly one of --N and --h".into())),
    };
    let spec = BoundSpec {
        m: parse_float(&a.m_norm, "M", prec)?,
        a: parse_float(&a.a, "a", prec)?,
        order: a.d,
        resolution,
        theorem,
    };
    let value = bound(&spec, form, prec)?;
    let rec = BoundRecord {
        theorem: theorem.label(),
        form: a.form.clone(),
        m: a.m_norm.clone(),
        a: a.a.clone(),
        d: a.d,
        n_or_h,
        bound: render_float(&value, digits),
    };
    a.common.emit(|w| match a.common.format {
        Format::Csv => write_csv(std::slice::from_ref(&rec), w),
        Format::Json => write_json(&rec, w),
    })
}
