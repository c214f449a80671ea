//! `lo:hi[:step]` ranges and comma lists.

use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::parse_rational;

/// Parse `"2:20"`, `"2:20:2"`, `"0,2,4"` or mixtures like `"1:3,8"`.
pub fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("'{t}' is not a non-negative integer")))
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [lo, hi] | [lo, hi, _] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
                if step == 0 {
                    return Err(Error::Parse(format!("zero step in '{item}'")));
                }
                out.extend((lo..=hi).step_by(step as usize));
            }
            _ => return Err(Error::Parse(format!("bad range '{item}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("'{s}' selects no values")));
    }
    Ok(out)
}

/// Comma list of exact rationals, e.g. `"2,1,1/2"` or `"0.25"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    let out: Vec<Rational> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Parse(format!("'{s}' selects no values")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_u32_list("2:5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_u32_list("2:20:6").unwrap(), vec![2, 8, 14, 20]);
        assert_eq!(parse_u32_list("0,2,4").unwrap(), vec![0, 2, 4]);
        assert_eq!(parse_u32_list("1:2,7").unwrap(), vec![1, 2, 7]);
        assert_eq!(parse_u32_list("2:20").unwrap().len(), 19);
        assert!(parse_u32_list("5:1").is_err());
        assert!(parse_u32_list("").is_err());
        assert!(parse_u32_list("1:4:0").is_err());
        assert!(parse_u32_list("a").is_err());
    }

    #[test]
    fn rationals() {
        let v = parse_rational_list("2, 1, 1/2, 0.25").unwrap();
        assert_eq!(v[2], Rational::from((1, 2)));
        assert_eq!(v[3], Rational::from((1, 4)));
        assert!(parse_rational_list(",").is_err());
    }
}
