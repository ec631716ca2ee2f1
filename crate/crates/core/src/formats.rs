//! Text and JSON interchange formats.
//!
//! Polynomial system files are plain text: one term per line as
//! `coef exp1 exp2 ... expk` with the coefficient an integer or `p/q`
//! fraction, `#` starting a comment, and blank lines separating the
//! polynomials of a system. A line with coefficient 0 contributes nothing
//! but still fixes the variable count, which is how the zero polynomial is
//! written.
//!
//! Profiles travel as JSON (`{"k":3,"degs":[1,1,6],"dims":[3,2,2,0]}`);
//! big integers inside reports serialize as decimal strings and rationals
//! as `p/q` strings so no precision is ever lost.

use crate::bounds::Profile;
use crate::polyring::{Interval, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: term has {got} exponents, expected {expected}")]
    ArityMismatch { line: usize, expected: usize, got: usize },
    #[error("line {line}: exponent {value} exceeds the limit {limit}")]
    ExponentTooLarge { line: usize, value: u64, limit: u32 },
    #[error("line {line}: at most {limit} variables are supported")]
    TooManyVariables { line: usize, limit: usize },
    #[error("empty input")]
    Empty,
    #[error("profile json: {0}")]
    ProfileJson(String),
    #[error("bad box spec: {0}")]
    BoxSpec(String),
    #[error("bad tuple list: {0}")]
    TupleList(String),
}

/// Caps on untrusted text input; generous for every real workload while
/// keeping total degrees far from integer overflow.
pub const MAX_VARIABLES: usize = 64;
pub const MAX_EXPONENT: u32 = 1 << 20;

/// Parses an integer or `p/q` rational with a non-zero denominator.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().ok()?;
        let denom: BigInt = d.trim().parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // decimal notation, handy for box specs
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac_val: BigInt = frac_part.parse().ok()?;
        let mag = int_val.abs() * &scale + frac_val;
        let signed = if negative { -mag } else { mag };
        return Some(BigRational::new(signed, scale));
    }
    let v: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(v))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses one polynomial; blank lines are ignored. `expected_nvars` pins
/// the variable count when the caller already knows it.
pub fn parse_polynomial(
    text: &str,
    expected_nvars: Option<usize>,
) -> Result<Polynomial, FormatError> {
    let mut nvars = expected_nvars;
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (exps, coef) = parse_term_line(line, lineno + 1, nvars)?;
        nvars = Some(exps.len());
        terms.push((exps, coef));
    }
    let nvars = nvars.ok_or(FormatError::Empty)?;
    Ok(Polynomial::from_terms(nvars, terms))
}

fn parse_term_line(
    line: &str,
    lineno: usize,
    nvars: Option<usize>,
) -> Result<(Vec<u32>, BigRational), FormatError> {
    let mut fields = line.split_whitespace();
    let coef_txt = fields.next().ok_or(FormatError::Syntax {
        line: lineno,
        msg: "missing coefficient".into(),
    })?;
    let coef = parse_rational(coef_txt).ok_or_else(|| FormatError::Syntax {
        line: lineno,
        msg: format!("bad coefficient `{coef_txt}`"),
    })?;
    let mut exps = Vec::new();
    for f in fields {
        let e: u64 = f.parse().map_err(|_| FormatError::Syntax {
            line: lineno,
            msg: format!("bad exponent `{f}`"),
        })?;
        if e > MAX_EXPONENT as u64 {
            return Err(FormatError::ExponentTooLarge {
                line: lineno,
                value: e,
                limit: MAX_EXPONENT,
            });
        }
        exps.push(e as u32);
        if exps.len() > MAX_VARIABLES {
            return Err(FormatError::TooManyVariables { line: lineno, limit: MAX_VARIABLES });
        }
    }
    if let Some(n) = nvars {
        if exps.len() != n {
            return Err(FormatError::ArityMismatch { line: lineno, expected: n, got: exps.len() });
        }
    }
    Ok((exps, coef))
}

/// Parses a system file: polynomials separated by blank lines, all with the
/// same variable count.
pub fn parse_system(text: &str) -> Result<Vec<Polynomial>, FormatError> {
    let mut polys = Vec::new();
    let mut nvars: Option<usize> = None;
    let mut chunk: Vec<(Vec<u32>, BigRational)> = Vec::new();
    let flush = |chunk: &mut Vec<(Vec<u32>, BigRational)>,
                     nvars: &Option<usize>,
                     polys: &mut Vec<Polynomial>| {
        if chunk.is_empty() {
            return;
        }
        let n = nvars.expect("chunk implies known arity");
        polys.push(Polynomial::from_terms(n, chunk.drain(..)));
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            flush(&mut chunk, &nvars, &mut polys);
            continue;
        }
        let (exps, coef) = parse_term_line(line, lineno + 1, nvars)?;
        nvars = Some(exps.len());
        chunk.push((exps, coef));
    }
    flush(&mut chunk, &nvars, &mut polys);
    if polys.is_empty() {
        return Err(FormatError::Empty);
    }
    Ok(polys)
}

pub fn write_polynomial(p: &Polynomial) -> String {
    let mut out = String::new();
    if p.is_zero() {
        let _ = write!(out, "0");
        for _ in 0..p.nvars() {
            let _ = write!(out, " 0");
        }
        let _ = writeln!(out);
        return out;
    }
    for (exps, coef) in p.terms() {
        if coef.is_integer() {
            let _ = write!(out, "{}", coef.numer());
        } else {
            let _ = write!(out, "{}/{}", coef.numer(), coef.denom());
        }
        for e in exps {
            let _ = write!(out, " {e}");
        }
        let _ = writeln!(out);
    }
    out
}

pub fn write_system(polys: &[Polynomial]) -> String {
    polys.iter().map(write_polynomial).collect::<Vec<_>>().join("\n")
}

/// Parses a profile from JSON and validates it.
pub fn parse_profile_json(text: &str) -> Result<Profile, FormatError> {
    let p: Profile = serde_json::from_str(text).map_err(|e| {
        FormatError::ProfileJson(format!("{}:{}: {e}", e.line(), e.column()))
    })?;
    p.validate().map_err(|e| FormatError::ProfileJson(e.to_string()))?;
    Ok(p)
}

/// Parses a box spec like `-4:4,-4:4` (one `lo:hi` range per axis;
/// endpoints are integers, fractions, or decimals).
pub fn parse_box_spec(text: &str) -> Result<Vec<Interval>, FormatError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let piece = piece.trim();
        let (lo_txt, hi_txt) = piece
            .split_once(':')
            .ok_or_else(|| FormatError::BoxSpec(format!("`{piece}` is not lo:hi")))?;
        let lo = parse_rational(lo_txt)
            .ok_or_else(|| FormatError::BoxSpec(format!("bad endpoint `{lo_txt}`")))?;
        let hi = parse_rational(hi_txt)
            .ok_or_else(|| FormatError::BoxSpec(format!("bad endpoint `{hi_txt}`")))?;
        let iv = Interval::new(lo, hi)
            .map_err(|_| FormatError::BoxSpec(format!("`{piece}` is out of order")))?;
        out.push(iv);
    }
    if out.is_empty() {
        return Err(FormatError::BoxSpec("empty spec".into()));
    }
    Ok(out)
}

/// Parses a comma-separated tuple like `3,2,2`.
pub fn parse_tuple_list(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    for piece in text.split(',') {
        let v: usize = piece
            .trim()
            .parse()
            .map_err(|_| FormatError::TupleList(format!("bad entry `{piece}`")))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(FormatError::TupleList("empty list".into()));
    }
    Ok(out)
}

/// Serde adapter: big integers as decimal strings.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: rationals as `p/q` strings (or bare integers).
pub mod bigrational_string {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if v.denom().is_one() {
            s.serialize_str(&v.numer().to_string())
        } else {
            s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        match super::parse_rational(&s) {
            Some(r) => Ok(r),
            None => Err(serde::de::Error::custom(format!("bad rational `{s}`"))),
        }
    }

    pub fn to_string(v: &BigRational) -> String {
        if v.denom().is_one() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    }

    #[allow(dead_code)]
    fn _assert_types(v: &BigRational) -> (&BigInt, &BigInt) {
        (v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip_a_system() {
        let text = "# circle and line\n1 2 0\n1 0 2\n-1 0 0\n\n1 1 0\n-1 0 1\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].num_terms(), 3);
        let rt = parse_system(&write_system(&sys)).unwrap();
        assert_eq!(rt, sys);
    }

    #[test]
    fn zero_polynomial_round_trips() {
        let z = Polynomial::zero(3);
        let rt = parse_polynomial(&write_polynomial(&z), None).unwrap();
        assert_eq!(rt, z);
        assert_eq!(rt.nvars(), 3);
    }

    #[test]
    fn rational_and_decimal_coefficients() {
        let p = parse_polynomial("3/2 1\n-0.25 0\n", None).unwrap();
        assert_eq!(p.nvars(), 1);
        assert_eq!(
            p.coefficient(&[0]),
            BigRational::new(BigInt::from(-1), BigInt::from(4))
        );
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("a.b").is_none());
        assert!(parse_rational(".5").is_some());
    }

    #[test]
    fn arity_mismatch_is_reported_with_line() {
        let err = parse_system("1 1 0\n2 1\n").unwrap_err();
        assert!(matches!(err, FormatError::ArityMismatch { line: 2, expected: 2, got: 1 }));
    }

    #[test]
    fn hostile_inputs_hit_the_caps() {
        let err = parse_system("1 4000000000 4000000000\n").unwrap_err();
        assert!(matches!(err, FormatError::ExponentTooLarge { line: 1, .. }));
        let wide = format!("1{}\n", " 1".repeat(MAX_VARIABLES + 1));
        let err = parse_system(&wide).unwrap_err();
        assert!(matches!(err, FormatError::TooManyVariables { line: 1, .. }));
        // at the limits everything still works
        let ok = parse_polynomial(&format!("1 {}\n", MAX_EXPONENT), None).unwrap();
        assert_eq!(ok.degree(), crate::polyring::Degree::Finite(MAX_EXPONENT));
    }

    #[test]
    fn profile_json_parses_and_validates() {
        let p = parse_profile_json(r#"{"k":3,"degs":[1,1,6],"dims":[3,2,2,0]}"#).unwrap();
        assert_eq!(p.ell(), 3);
        assert!(parse_profile_json(r#"{"k":3,"degs":[1],"dims":[3,2,0]}"#).is_err());
        let err = parse_profile_json("{").unwrap_err();
        assert!(matches!(err, FormatError::ProfileJson(_)));
    }

    #[test]
    fn box_specs() {
        let b = parse_box_spec("-4:4, 0:3/2").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(*b[1].hi(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert!(parse_box_spec("4:-4").is_err());
        assert!(parse_box_spec("1,2").is_err());
    }

    #[test]
    fn tuple_lists() {
        assert_eq!(parse_tuple_list("3,2,2").unwrap(), vec![3, 2, 2]);
        assert!(parse_tuple_list("3,,2").is_err());
        assert!(parse_tuple_list("").is_err());
    }
}
