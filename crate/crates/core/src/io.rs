//! Key-value spec files.
//!
//! Substitution:
//! ```text
//! name = fibonacci
//! letters = a b
//! rule a = a b
//! rule b = a
//! polynomial = x^2 - x - 1    # optional
//! ```
//! Cut-and-project scheme; field elements use the generator `l`:
//! ```text
//! name = fibonacci-cps
//! polynomial = x^2 - x - 1
//! basis = 1 ; 1
//! basis = l ; 1 - l
//! window = -1 ; l             # interval, or repeated `vertex = u ; v`
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraicNumber, MinimalPolynomial, NumberField};
use crate::modelset::{CutProjectScheme, ModelSetError, Window};
use crate::substitution::{SubstitutionError, SubstitutionSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
    #[error(transparent)]
    ModelSet(#[from] ModelSetError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn entries(text: &str) -> Result<Vec<Entry>, SpecError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| SpecError::Parse {
            line: i + 1,
            msg: format!("expected `key = value`, found `{}`", line),
        })?;
        out.push(Entry {
            line: i + 1,
            key: k.split_whitespace().collect::<Vec<_>>().join(" "),
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

/// Integer polynomial in x, lowest degree first.
pub fn parse_polynomial(s: &str) -> Result<Vec<BigInt>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut coeffs: BTreeMap<usize, BigInt> = BTreeMap::new();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, c) in t.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, power) = match body.find(['x', 'l']) {
            None => (body.to_string(), 0),
            Some(p) => {
                let c = body[..p].trim_end_matches('*');
                let rest = &body[p + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| format!("bad exponent in `{}`", term))?
                };
                (if c.is_empty() { "1".to_string() } else { c.to_string() }, e)
            }
        };
        let c: BigInt = coef.parse().map_err(|_| format!("bad coefficient in `{}`", term))?;
        *coeffs.entry(power).or_default() += c * sign;
    }
    let deg = *coeffs.keys().max().expect("a term");
    Ok((0..=deg).map(|k| coeffs.get(&k).cloned().unwrap_or_default()).collect())
}

fn polynomial(e: &Entry) -> Result<MinimalPolynomial, SpecError> {
    let c = parse_polynomial(&e.value).map_err(|msg| SpecError::Parse { line: e.line, msg })?;
    Ok(MinimalPolynomial::new(c)?)
}

pub fn parse_substitution(text: &str) -> Result<SubstitutionSystem, SpecError> {
    let mut name = None;
    let mut letters: Option<Vec<String>> = None;
    let mut rules: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    let mut declared = None;
    for e in entries(text)? {
        match e.key.as_str() {
            "name" => name = Some(e.value.clone()),
            "letters" => letters = Some(e.value.split_whitespace().map(str::to_string).collect()),
            "polynomial" => declared = Some(polynomial(&e)?),
            k if k.starts_with("rule ") => {
                let letter = k[5..].trim().to_string();
                let word = e.value.split_whitespace().map(str::to_string).collect();
                if rules.insert(letter.clone(), (e.line, word)).is_some() {
                    return Err(SpecError::Parse {
                        line: e.line,
                        msg: format!("second rule for `{}`", letter),
                    });
                }
            }
            k => {
                return Err(SpecError::Parse {
                    line: e.line,
                    msg: format!("unknown key `{}`", k),
                })
            }
        }
    }
    let letters = letters.ok_or(SpecError::Missing("letters"))?;
    let name = name.unwrap_or_else(|| "substitution".into());
    if let Some((l, (line, _))) = rules.iter().find(|(l, _)| !letters.contains(l)) {
        return Err(SpecError::Parse {
            line: *line,
            msg: format!("rule for `{}`, which is not a letter", l),
        });
    }
    let mut words = Vec::with_capacity(letters.len());
    for l in &letters {
        match rules.get(l) {
            Some((_, w)) => words.push(w.clone()),
            None => return Err(SubstitutionError::MissingRule(l.clone()).into()),
        }
    }
    Ok(SubstitutionSystem::build_with_polynomial(
        &name,
        &letters,
        &words,
        declared.as_ref(),
    )?)
}

pub fn parse_scheme(text: &str) -> Result<CutProjectScheme, SpecError> {
    let es = entries(text)?;
    let poly = es.iter().find(|e| e.key == "polynomial").ok_or(SpecError::Missing("polynomial"))?;
    let field = NumberField::new(polynomial(poly)?)?;
    let mut name = "scheme".to_string();
    let mut basis = Vec::new();
    let mut window = None;
    let mut vertices = Vec::new();
    let vector = |e: &Entry| -> Result<Vec<AlgebraicNumber>, SpecError> {
        e.value
            .split(';')
            .map(|p| {
                AlgebraicNumber::parse(&field, p.trim()).map_err(|err| SpecError::Parse {
                    line: e.line,
                    msg: err.to_string(),
                })
            })
            .collect()
    };
    for e in &es {
        match e.key.as_str() {
            "name" => name = e.value.clone(),
            "polynomial" => {}
            "basis" => basis.push(vector(e)?),
            "window" => {
                let v = vector(e)?;
                if v.len() != 2 {
                    return Err(SpecError::Parse {
                        line: e.line,
                        msg: "window needs `lo ; hi`".into(),
                    });
                }
                window = Some(Window::Interval {
                    lo: v[0].clone(),
                    hi: v[1].clone(),
                });
            }
            "vertex" => {
                let v = vector(e)?;
                if v.len() != 2 {
                    return Err(SpecError::Parse {
                        line: e.line,
                        msg: "vertex needs `u ; v`".into(),
                    });
                }
                vertices.push([v[0].clone(), v[1].clone()]);
            }
            k => {
                return Err(SpecError::Parse {
                    line: e.line,
                    msg: format!("unknown key `{}`", k),
                })
            }
        }
    }
    let window = match (window, vertices.is_empty()) {
        (Some(w), true) => w,
        (None, false) => Window::Polygon { vertices },
        (Some(_), false) => {
            return Err(SpecError::Parse {
                line: 0,
                msg: "give either `window` or `vertex` lines, not both".into(),
            })
        }
        (None, true) => return Err(SpecError::Missing("window")),
    };
    Ok(CutProjectScheme::new(&name, &field, basis, window)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        let p = |s: &str| {
            parse_polynomial(s)
                .unwrap()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(p("x^2 - x - 1"), "-1,-1,1");
        assert_eq!(p("x^3-2"), "-2,0,0,1");
        assert_eq!(p("2*x + 3x^2 - 4"), "-4,2,3");
        assert!(parse_polynomial("x^").is_err());
    }

    #[test]
    fn substitution_spec() {
        let s = parse_substitution("name = fib\nletters = a b\nrule a = a b\nrule b = a\npolynomial = x^2 - x - 1\n").unwrap();
        assert_eq!(s.name, "fib");
        let bad = parse_substitution("letters = a b\nrule a = a b\n");
        assert!(matches!(bad, Err(SpecError::Substitution(SubstitutionError::MissingRule(_)))));
        let garbled = parse_substitution("letters a b\n");
        assert!(matches!(garbled, Err(SpecError::Parse { line: 1, .. })));
        let wrong = parse_substitution("letters = a b\nrule a = a b\nrule b = a\npolynomial = x^2 - 2\n");
        assert!(matches!(
            wrong,
            Err(SpecError::Substitution(SubstitutionError::PolynomialMismatch { .. }))
        ));
    }

    #[test]
    fn scheme_spec() {
        let s = parse_scheme("polynomial = x^2 - x - 1\nbasis = 1 ; 1\nbasis = l ; 1 - l\nwindow = -1 ; l\n").unwrap();
        assert_eq!(s.k, 1);
    }
}
