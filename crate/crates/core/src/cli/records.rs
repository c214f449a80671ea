//! Flat output records and their CSV/JSON encodings.

use std::io::Write;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::bounds::Resolution;
use crate::error::{Error, Result};
use crate::exact::{render_float, render_rational, ComplexRational, ComplexRationalJson, RationalJson};
use crate::harness::ConvergenceRow;
use crate::numeric::Complex;

/// One coefficient; exact parts are empty for values known only numerically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub family: String,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub k: u32,
    pub re_num: String,
    pub re_den: String,
    pub im_num: String,
    pub im_den: String,
    pub re_decimal: String,
    pub im_decimal: String,
}

impl CoeffRecord {
    pub fn exact(family: &str, d: u32, n: Option<u32>, k: u32, v: &ComplexRational, digits: usize) -> Self {
        CoeffRecord {
            family: family.into(),
            d,
            n,
            k,
            re_num: v.re.numer().to_string(),
            re_den: v.re.denom().to_string(),
            im_num: v.im.numer().to_string(),
            im_den: v.im.denom().to_string(),
            re_decimal: render_rational(&v.re, digits),
            im_decimal: render_rational(&v.im, digits),
        }
    }

    pub fn numeric(family: &str, d: u32, k: u32, v: &Float, digits: usize) -> Self {
        CoeffRecord {
            family: family.into(),
            d,
            n: None,
            k,
            re_num: String::new(),
            re_den: String::new(),
            im_num: String::new(),
            im_den: String::new(),
            re_decimal: render_float(v, digits),
            im_decimal: "0".into(),
        }
    }

    /// The exact value, if there is one.
    pub fn value(&self) -> Result<Option<ComplexRational>> {
        if self.re_num.is_empty() {
            return Ok(None);
        }
        let part = |num: &str, den: &str| {
            Rational::try_from(&RationalJson {
                num: num.into(),
                den: den.into(),
            })
        };
        Ok(Some(ComplexRational::new(
            part(&self.re_num, &self.re_den)?,
            part(&self.im_num, &self.im_den)?,
        )))
    }
}

/// JSON shape of [`CoeffRecord`] with a nested exact value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub family: String,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub k: u32,
    pub value: Option<ComplexRationalJson>,
    pub re_decimal: String,
    pub im_decimal: String,
}

impl TryFrom<&CoeffRecord> for CoeffJson {
    type Error = Error;
    fn try_from(r: &CoeffRecord) -> Result<Self> {
        Ok(CoeffJson {
            family: r.family.clone(),
            d: r.d,
            n: r.n,
            k: r.k,
            value: r.value()?.as_ref().map(ComplexRationalJson::from),
            re_decimal: r.re_decimal.clone(),
            im_decimal: r.im_decimal.clone(),
        })
    }
}

impl TryFrom<&CoeffJson> for CoeffRecord {
    type Error = Error;
    fn try_from(j: &CoeffJson) -> Result<Self> {
        let (re_num, re_den, im_num, im_den) = match &j.value {
            Some(v) => {
                let z = ComplexRational::try_from(v)?;
                (
                    z.re.numer().to_string(),
                    z.re.denom().to_string(),
                    z.im.numer().to_string(),
                    z.im.denom().to_string(),
                )
            }
            None => Default::default(),
        };
        Ok(CoeffRecord {
            family: j.family.clone(),
            d: j.d,
            n: j.n,
            k: j.k,
            re_num,
            re_den,
            im_num,
            im_den,
            re_decimal: j.re_decimal.clone(),
            im_decimal: j.im_decimal.clone(),
        })
    }
}

/// One study or integration result; JSON uses the same keys as the CSV header.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub example: String,
    pub theorem: String,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(rename = "N_or_h")]
    pub n_or_h: String,
    pub approx_re: String,
    pub approx_im: String,
    pub reference: String,
    pub abs_error: String,
    pub bound_exact: String,
    pub bound_asymptotic: String,
    pub a_opt: String,
    pub precision_bits: u32,
}

pub const COEFF_HEADER: &str = "family,D,N,k,re_num,re_den,im_num,im_den,re_decimal,im_decimal";

pub const STUDY_HEADER: &str = "example,theorem,D,N_or_h,approx_re,approx_im,reference,abs_error,bound_exact,bound_asymptotic,a_opt,precision_bits";

fn render_complex(z: &Complex, digits: usize) -> String {
    if z.im.is_zero() {
        return render_float(&z.re, digits);
    }
    let im = render_float(&z.im, digits);
    let sep = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sep}{im}i", render_float(&z.re, digits))
}

impl StudyRecord {
    pub fn from_row(row: &ConvergenceRow, digits: usize) -> Self {
        let opt = |v: &Option<Float>| v.as_ref().map(|x| render_float(x, digits)).unwrap_or_default();
        StudyRecord {
            example: row.example.clone(),
            theorem: row.theorem.map(|t| t.label()).unwrap_or_default(),
            d: row.d,
            n_or_h: match &row.resolution {
                Resolution::Points(n) => n.to_string(),
                Resolution::Spacing(h) => render_float(h, digits),
            },
            approx_re: render_float(&row.approx.re, digits),
            approx_im: render_float(&row.approx.im, digits),
            reference: row
                .reference
                .as_ref()
                .map(|r| render_complex(r, digits))
                .unwrap_or_default(),
            abs_error: opt(&row.abs_error),
            bound_exact: opt(&row.bound_exact),
            bound_asymptotic: opt(&row.bound_asymptotic),
            a_opt: opt(&row.a_opt),
            precision_bits: row.precision_bits,
        }
    }
}

pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Header-only CSV for an empty [`StudyRecord`] list.
pub fn write_study_csv<W: Write>(records: &[StudyRecord], mut out: W) -> Result<()> {
    if records.is_empty() {
        writeln!(out, "{STUDY_HEADER}")?;
        return Ok(());
    }
    write_csv(records, out)
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writeln!(out)?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(input: &[u8]) -> Result<Vec<T>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
