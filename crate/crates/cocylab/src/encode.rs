//! Canonical text and JSON encodings for every element kind, plus the
//! matching parsers. Parsing always re-canonicalizes (reduction, letter
//! merging, determinant checks), so encode(parse(x)) is canonical, and all
//! rationals travel as exact "p/q" strings.

use num::{BigInt, BigRational, One};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cocycle::CoeffValue;
use crate::extension::ExtElement;
use crate::group::{Element, Group};
use crate::sl2::{Mat2, StGen, StWord};
use crate::words::{FpLetter, FpWord, FreeWord};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {at}: {msg}")]
pub struct ParseError {
    pub at: String,
    pub msg: String,
}

fn err<T>(at: impl Into<String>, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { at: at.into(), msg: msg.into() })
}

pub fn rational_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = match num.parse() {
        Ok(v) => v,
        Err(_) => return err(format!("'{t}'"), "expected integer numerator"),
    };
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(ds) => match ds.parse() {
            Ok(v) => v,
            Err(_) => return err(format!("'{t}'"), "expected integer denominator"),
        },
    };
    if d == BigInt::from(0) {
        return err(format!("'{t}'"), "zero denominator");
    }
    Ok(BigRational::new(n, d))
}

pub fn encode_free_word(w: &FreeWord) -> String {
    if w.is_identity() {
        return "e".to_string();
    }
    w.syllables()
        .iter()
        .map(|s| {
            if s.exp == 1 {
                format!("a{}", s.gen)
            } else {
                format!("a{}^{}", s.gen, s.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_free_word(rank: u32, s: &str) -> Result<FreeWord, ParseError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens == ["e"] {
        return Ok(FreeWord::identity(rank));
    }
    let mut raw: Vec<(u32, i64)> = Vec::new();
    for (pos, tok) in tokens.iter().enumerate() {
        let at = format!("token {} ('{}')", pos + 1, tok);
        let Some(body) = tok.strip_prefix('a') else {
            return err(at, "expected a<index> or a<index>^<exp>");
        };
        let (idx_str, exp_str) = match body.split_once('^') {
            Some((i, e)) => (i, Some(e)),
            None => (body, None),
        };
        let Ok(gen) = idx_str.parse::<u32>() else {
            return err(at, "bad generator index");
        };
        let exp: i64 = match exp_str {
            None => 1,
            Some(e) => match e.parse() {
                Ok(v) => v,
                Err(_) => return err(at, "bad exponent"),
            },
        };
        raw.push((gen, exp));
    }
    if raw.is_empty() {
        return err("end of input", "empty word (use 'e' for the identity)");
    }
    FreeWord::reduce(rank, &raw).map_err(|e| ParseError {
        at: "word".to_string(),
        msg: e.to_string(),
    })
}

pub fn encode_fp_word(w: &FpWord) -> String {
    if w.is_identity() {
        return "e".to_string();
    }
    w.letters()
        .iter()
        .map(|l| match l {
            FpLetter::A(i) => format!("A{i}"),
            FpLetter::B(j) => format!("B{j}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_fp_word(m: u32, n: u32, s: &str) -> Result<FpWord, ParseError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens == ["e"] {
        return FpWord::normalize(m, n, &[]).map_err(|e| ParseError {
            at: "word".to_string(),
            msg: e.to_string(),
        });
    }
    let mut letters = Vec::new();
    for (pos, tok) in tokens.iter().enumerate() {
        let at = format!("token {} ('{}')", pos + 1, tok);
        let mut chars = tok.chars();
        let head = chars.next();
        let idx: u32 = match chars.as_str().parse() {
            Ok(v) => v,
            Err(_) => return err(at, "expected A<index> or B<index>"),
        };
        match head {
            Some('A') | Some('a') => letters.push(FpLetter::A(idx)),
            Some('B') | Some('b') => letters.push(FpLetter::B(idx)),
            _ => return err(at, "expected A<index> or B<index>"),
        }
    }
    if letters.is_empty() {
        return err("end of input", "empty word (use 'e' for the identity)");
    }
    FpWord::normalize(m, n, &letters).map_err(|e| ParseError {
        at: "word".to_string(),
        msg: e.to_string(),
    })
}

pub fn mat2_to_value(m: &Mat2) -> Value {
    json!([
        [rational_str(&m.a), rational_str(&m.b)],
        [rational_str(&m.c), rational_str(&m.d)],
    ])
}

/// Named shortcut when the matrix is one of the standing generators.
fn mat2_name(m: &Mat2) -> Option<&'static str> {
    if *m == Mat2::identity() {
        Some("I")
    } else if *m == Mat2::s() {
        Some("S")
    } else if *m == Mat2::t() {
        Some("T")
    } else if *m == Mat2::u() {
        Some("U")
    } else if *m == Mat2::s().pow(2) {
        Some("-I")
    } else {
        None
    }
}

pub fn encode_mat2(m: &Mat2) -> String {
    match mat2_name(m) {
        Some(name) => name.to_string(),
        None => mat2_to_value(m).to_string(),
    }
}

pub fn mat2_from_value(v: &Value) -> Result<Mat2, ParseError> {
    let rows = match v.as_array() {
        Some(rows) if rows.len() == 2 => rows,
        _ => return err("matrix", "expected a 2x2 JSON array"),
    };
    let mut entries = Vec::with_capacity(4);
    for (i, row) in rows.iter().enumerate() {
        let cols = match row.as_array() {
            Some(cols) if cols.len() == 2 => cols,
            _ => return err(format!("matrix row {}", i + 1), "expected 2 entries"),
        };
        for (j, cell) in cols.iter().enumerate() {
            let at = format!("matrix entry ({},{})", i + 1, j + 1);
            let r = match cell {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => match n.as_i64() {
                    Some(k) => BigRational::from_integer(BigInt::from(k)),
                    None => return err(at, "expected an exact integer or \"p/q\" string"),
                },
                _ => return err(at, "expected an exact integer or \"p/q\" string"),
            };
            entries.push(r);
        }
    }
    Mat2::new(entries[0].clone(), entries[1].clone(), entries[2].clone(), entries[3].clone())
        .map_err(|e| ParseError { at: "matrix".to_string(), msg: e.to_string() })
}

pub fn parse_mat2(s: &str) -> Result<Mat2, ParseError> {
    match s.trim() {
        "I" => return Ok(Mat2::identity()),
        "S" => return Ok(Mat2::s()),
        "T" => return Ok(Mat2::t()),
        "U" => return Ok(Mat2::u()),
        "-I" => return Ok(Mat2::s().pow(2)),
        _ => {}
    }
    let v: Value = match serde_json::from_str(s) {
        Ok(v) => v,
        Err(e) => return err(format!("char {}", e.column()), "matrix is not valid JSON"),
    };
    mat2_from_value(&v)
}

pub fn encode_st_word(w: &StWord) -> String {
    if w.0.is_empty() {
        return "e".to_string();
    }
    w.0.iter()
        .map(|l| {
            let name = match l.gen {
                StGen::S => "S",
                StGen::T => "T",
            };
            if l.exp == 1 {
                name.to_string()
            } else {
                format!("{name}^{}", l.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_st_word(s: &str) -> Result<StWord, ParseError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let mut word = StWord(Vec::new());
    if tokens == ["e"] {
        return Ok(word);
    }
    for (pos, tok) in tokens.iter().enumerate() {
        let at = format!("token {} ('{}')", pos + 1, tok);
        let (head, exp_str) = match tok.split_once('^') {
            Some((h, e)) => (h, Some(e)),
            None => (*tok, None),
        };
        let gen = match head {
            "S" => StGen::S,
            "T" => StGen::T,
            _ => return err(at, "expected S or T (optionally with ^<exp>)"),
        };
        let exp: i64 = match exp_str {
            None => 1,
            Some(e) => match e.parse() {
                Ok(v) => v,
                Err(_) => return err(at, "bad exponent"),
            },
        };
        word.push(gen, exp);
    }
    Ok(word)
}

fn bigint_value(b: &BigInt) -> Value {
    match i64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

pub fn coeff_to_value(a: &CoeffValue) -> Value {
    Value::Array(a.0.iter().map(bigint_value).collect())
}

pub fn coeff_from_value(v: &Value) -> Result<CoeffValue, ParseError> {
    let arr = match v.as_array() {
        Some(a) => a,
        None => return err("coefficient", "expected a JSON array of integers"),
    };
    let mut coords = Vec::with_capacity(arr.len());
    for (i, cell) in arr.iter().enumerate() {
        let at = format!("coefficient {}", i + 1);
        let b: BigInt = match cell {
            Value::Number(n) => match n.as_i64() {
                Some(k) => BigInt::from(k),
                None => return err(at, "expected an exact integer"),
            },
            Value::String(s) => match s.trim().parse() {
                Ok(v) => v,
                Err(_) => return err(at, "expected an exact integer"),
            },
            _ => return err(at, "expected an exact integer"),
        };
        coords.push(b);
    }
    Ok(CoeffValue(coords))
}

pub fn ext_to_value(x: &ExtElement) -> Value {
    let g = match &x.g {
        Element::Mat(m) => match mat2_name(m) {
            Some(name) => json!(name),
            None => mat2_to_value(m),
        },
        other => json!(encode_element(other)),
    };
    json!({"a": coeff_to_value(&x.a), "g": g})
}

pub fn parse_ext_element(base: &Group, s: &str) -> Result<ExtElement, ParseError> {
    let v: Value = match serde_json::from_str(s) {
        Ok(v) => v,
        Err(e) => return err(format!("char {}", e.column()), "element is not valid JSON"),
    };
    let obj = match v.as_object() {
        Some(o) => o,
        None => return err("element", "expected {\"a\": [...], \"g\": ...}"),
    };
    let a = match obj.get("a") {
        Some(av) => coeff_from_value(av)?,
        None => return err("element", "missing \"a\" field"),
    };
    let g = match obj.get("g") {
        Some(Value::String(gs)) => parse_element(base, gs)?,
        Some(arr @ Value::Array(_)) => match base {
            Group::Sl2 => Element::Mat(mat2_from_value(arr)?),
            _ => return err("field g", "array encoding only applies to matrices"),
        },
        _ => return err("element", "missing or malformed \"g\" field"),
    };
    Ok(ExtElement { a, g })
}

pub fn encode_element(e: &Element) -> String {
    match e {
        Element::Free(w) => encode_free_word(w),
        Element::Fp(w) => encode_fp_word(w),
        Element::Mat(m) => encode_mat2(m),
        Element::Ext(x) => ext_to_value(x).to_string(),
        Element::Pair(x, y) => format!("({} | {})", encode_element(x), encode_element(y)),
    }
}

/// Parses an element of the given group from its text encoding.
pub fn parse_element(group: &Group, s: &str) -> Result<Element, ParseError> {
    match group {
        Group::Free { rank } => Ok(Element::Free(parse_free_word(*rank, s)?)),
        Group::FreeProduct { m, n } => Ok(Element::Fp(parse_fp_word(*m, *n, s)?)),
        Group::Sl2 => Ok(Element::Mat(parse_mat2(s)?)),
        Group::Ext(ext) => {
            Ok(Element::Ext(Box::new(parse_ext_element(ext.base(), s)?)))
        }
        Group::Product(..) => err("element", "product elements have no text encoding"),
    }
}
