//! Line-oriented curve files.
//!
//! ```text
//! # Fermat sextic over GF(121)
//! field p=11 m=2 modulus=1,0,1
//! term coeff=1 exps=6,0,0
//! term coeff=3+2t exps=0,6,0
//! ```
//!
//! Coefficients are polynomials in the field generator `t` with integer
//! coefficients, reduced modulo `p` and the modulus. `modulus` lists the
//! modulus coefficients from the constant term up to the leading 1; when it
//! is omitted the default modulus is used. `#` starts a comment.

use std::collections::BTreeMap;

use crate::curve::{CurveError, Exps, HomogPoly};
use crate::field::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
    #[error("line {line}: bad coefficient {text:?}")]
    BadCoefficient { line: usize, text: String },
    #[error("line {line}: term of degree {found}, expected {expected}")]
    NotHomogeneous { line: usize, found: u32, expected: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

fn key_values<'a>(
    line_no: usize,
    toks: &[(usize, &'a str)],
    allowed: &[&str],
) -> Result<BTreeMap<&'a str, (usize, &'a str)>, SpecError> {
    let mut map = BTreeMap::new();
    for &(col, t) in toks {
        let err = |msg: String| SpecError::ParseError { line: line_no, col: col + 1, msg };
        let (k, v) = t.split_once('=').ok_or_else(|| err(format!("expected key=value, found {t:?}")))?;
        if !allowed.contains(&k) {
            return Err(err(format!("unknown key {k:?}")));
        }
        if map.insert(k, (col + k.len() + 1, v)).is_some() {
            return Err(err(format!("duplicate key {k:?}")));
        }
    }
    Ok(map)
}

fn int_list(line_no: usize, col: usize, s: &str) -> Result<Vec<u64>, SpecError> {
    s.split(',')
        .map(|x| {
            x.parse::<u64>()
                .map_err(|_| SpecError::ParseError { line: line_no, col: col + 1, msg: format!("bad integer list {s:?}") })
        })
        .collect()
}

/// Parses `3+2t-t^2` into integer coefficients of powers of `t`.
fn parse_coeff(s: &str) -> Option<Vec<i64>> {
    let b = s.as_bytes();
    let mut out: Vec<i64> = Vec::new();
    let mut i = 0;
    if b.is_empty() {
        return None;
    }
    while i < b.len() {
        let mut sign = 1i64;
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -1;
            }
            i += 1;
        } else if i > 0 {
            return None;
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let num: Option<i64> = if i > start { Some(s[start..i].parse().ok()?) } else { None };
        let mut power = 0usize;
        if i < b.len() && b[i] == b't' {
            i += 1;
            power = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                let ps = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if i == ps {
                    return None;
                }
                power = s[ps..i].parse().ok()?;
            }
        } else if num.is_none() {
            return None;
        }
        let c = sign.checked_mul(num.unwrap_or(1))?;
        if out.len() <= power {
            out.resize(power + 1, 0);
        }
        out[power] = out[power].checked_add(c)?;
    }
    Some(out)
}

pub fn parse_curve_spec(text: &str) -> Result<HomogPoly, SpecError> {
    let mut field: Option<FieldSpec> = None;
    let mut degree: Option<u32> = None;
    let mut terms: Vec<(Exps, crate::field::FieldElement)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col0, head)) = toks.first() else { continue };
        let perr = |col: usize, msg: String| SpecError::ParseError { line: line_no, col: col + 1, msg };
        match head {
            "field" => {
                if field.is_some() {
                    return Err(perr(col0, "duplicate field header".into()));
                }
                let kv = key_values(line_no, &toks[1..], &["p", "m", "modulus"])?;
                let get = |k: &str| kv.get(k).copied().ok_or_else(|| perr(col0, format!("missing {k}=")));
                let (pc, ps) = get("p")?;
                let (mc, ms) = get("m")?;
                let p = ps.parse::<u64>().map_err(|_| perr(pc, format!("bad p {ps:?}")))?;
                let m = ms.parse::<usize>().map_err(|_| perr(mc, format!("bad m {ms:?}")))?;
                let modulus = match kv.get("modulus") {
                    Some(&(c, s)) => Some(int_list(line_no, c, s)?),
                    None => None,
                };
                field = Some(FieldSpec::new(p, m, modulus.as_deref())?);
            }
            "term" => {
                let f = field.as_ref().ok_or_else(|| perr(col0, "term before field header".into()))?;
                let kv = key_values(line_no, &toks[1..], &["coeff", "exps"])?;
                let (_, cs) = kv.get("coeff").copied().ok_or_else(|| perr(col0, "missing coeff=".into()))?;
                let (ec, es) = kv.get("exps").copied().ok_or_else(|| perr(col0, "missing exps=".into()))?;
                let c = parse_coeff(cs).ok_or_else(|| SpecError::BadCoefficient { line: line_no, text: cs.into() })?;
                let e = int_list(line_no, ec, es)?;
                if e.len() != 3 || e.iter().any(|&x| x > u32::MAX as u64) {
                    return Err(perr(ec, "exps needs three exponents".into()));
                }
                let exps = [e[0] as u32, e[1] as u32, e[2] as u32];
                let total = exps.iter().sum::<u32>();
                match degree {
                    None => degree = Some(total),
                    Some(d) if d != total => {
                        return Err(SpecError::NotHomogeneous { line: line_no, found: total, expected: d })
                    }
                    _ => {}
                }
                terms.push((exps, f.from_coeffs(&c)));
            }
            other => return Err(perr(col0, format!("unknown directive {other:?}"))),
        }
    }
    let f = field.ok_or(SpecError::ParseError { line: 1, col: 1, msg: "missing field header".into() })?;
    let d = degree.ok_or(SpecError::ParseError { line: 1, col: 1, msg: "no terms".into() })?;
    let mut acc: BTreeMap<Exps, crate::field::FieldElement> = BTreeMap::new();
    for (e, c) in terms {
        let slot = acc.entry(e).or_insert(f.zero());
        *slot = f.add(*slot, c);
    }
    Ok(HomogPoly::new(&f, d, acc)?)
}

/// Canonical text: explicit modulus, terms in ascending exponent order.
pub fn serialize_curve_spec(curve: &HomogPoly) -> String {
    let f = curve.field();
    let modulus: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    let mut out = format!("field p={} m={} modulus={}\n", f.p(), f.m(), modulus.join(","));
    for (e, &c) in curve.terms() {
        out.push_str(&format!("term coeff={} exps={},{},{}\n", f.format(c), e[0], e[1], e[2]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FERMAT: &str = "# Fermat sextic\nfield p=11 m=2 modulus=1,0,1\nterm coeff=1 exps=6,0,0\nterm coeff=1 exps=0,6,0  # y\nterm coeff=1 exps=0,0,6\n";

    #[test]
    fn parses_fermat() {
        let c = parse_curve_spec(FERMAT).unwrap();
        assert_eq!((c.degree(), c.num_terms()), (6, 3));
        let s = serialize_curve_spec(&c);
        assert_eq!(parse_curve_spec(&s).unwrap(), c);
        assert_eq!(serialize_curve_spec(&parse_curve_spec(&s).unwrap()), s);
    }

    #[test]
    fn reduces_high_powers() {
        let c = parse_curve_spec("field p=11 m=2 modulus=1,0,1\nterm coeff=t^2 exps=1,0,0\n").unwrap();
        // t^2 = -1
        assert_eq!(c.coeff([1, 0, 0]), c.field().from_int(-1));
    }

    #[test]
    fn errors() {
        let e = parse_curve_spec("field p=11 m=2\nterm coeff=1 exps=6,0,0\nterm coeff=1 exps=5,0,0\n");
        assert_eq!(e, Err(SpecError::NotHomogeneous { line: 3, found: 5, expected: 6 }));
        let e = parse_curve_spec("field p=11 m=2\nterm coeff=1x exps=1,0,0\n");
        assert!(matches!(e, Err(SpecError::BadCoefficient { line: 2, .. })));
        let e = parse_curve_spec("field p=11 m=2\nterm coef=1 exps=1,0,0\n");
        assert!(matches!(e, Err(SpecError::ParseError { line: 2, col: 6, .. })));
        let e = parse_curve_spec("term coeff=1 exps=1,0,0\n");
        assert!(matches!(e, Err(SpecError::ParseError { line: 1, col: 1, .. })));
        assert!(matches!(parse_curve_spec("field p=12 m=1\nterm coeff=1 exps=1,0,0\n"), Err(SpecError::Field(_))));
    }

    #[test]
    fn coefficient_grammar() {
        assert_eq!(parse_coeff("3+2t"), Some(vec![3, 2]));
        assert_eq!(parse_coeff("-t^2+5"), Some(vec![5, 0, -1]));
        assert_eq!(parse_coeff("t"), Some(vec![0, 1]));
        assert_eq!(parse_coeff(""), None);
        assert_eq!(parse_coeff("3t^"), None);
        assert_eq!(parse_coeff("3 4"), None);
    }

    proptest! {
        #[test]
        fn round_trip(coeffs in proptest::collection::vec(0u64..121, 10)) {
            let f = FieldSpec::new(11, 2, None).unwrap();
            let exps = crate::local::monomials(3);
            let c = HomogPoly::new(&f, 3, exps.into_iter().zip(coeffs.iter().map(|&v| f.element(v).unwrap()))).unwrap();
            prop_assume!(!c.is_zero());
            let s = serialize_curve_spec(&c);
            let back = parse_curve_spec(&s).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(serialize_curve_spec(&back), s);
        }
    }
}
