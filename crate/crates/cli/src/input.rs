//! Readers for the JSON documents the binary writes: patches, ghost pairs and direction lists.

use dtomo::modelset::LatticePoint;
use dtomo::rational::totient;
use dtomo::tomography::Direction;
use dtomo::{Error, Result};
use num_bigint::BigInt;
use serde_json::Value;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn order(doc: &Value) -> Result<u64> {
    doc.get("n").and_then(Value::as_u64).ok_or_else(|| err("missing integer field \"n\""))
}

pub fn coeffs(v: &Value, n: u64) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| err("a point is an array of coefficients"))?;
    if arr.len() != totient(n) as usize {
        return Err(err(format!("expected {} coefficients, got {}", totient(n), arr.len())));
    }
    arr.iter()
        .map(|c| match c {
            Value::Number(x) => x.as_i64().map(BigInt::from).ok_or_else(|| err(format!("bad coefficient {x}"))),
            Value::String(s) => s.parse::<BigInt>().map_err(|_| err(format!("bad coefficient {s:?}"))),
            _ => Err(err("coefficients are integers")),
        })
        .collect()
}

pub fn points(doc: &Value, field: &str, n: u64) -> Result<Vec<LatticePoint>> {
    let arr = doc
        .get(field)
        .and_then(Value::as_array)
        .ok_or_else(|| err(format!("missing array field {field:?}")))?;
    arr.iter().map(|v| Ok(LatticePoint::new(n, coeffs(v, n)?))).collect()
}

pub fn directions(doc: &Value, n: u64) -> Result<Vec<Direction>> {
    points(doc, "directions", n)?.iter().map(|p| Direction::new(&p.embed(), n)).collect()
}

/// `"1,0,0,0;0,1,0,0"`: semicolon-separated coefficient vectors.
pub fn parse_dirs(s: &str, n: u64) -> Result<Vec<Direction>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let c: Vec<i64> = t
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| err(format!("bad coefficient {x:?}"))))
                .collect::<Result<_>>()?;
            if c.len() != totient(n) as usize {
                return Err(err(format!("direction {t:?} needs {} coefficients", totient(n))));
            }
            Direction::from_i64(n, &c)
        })
        .collect()
}

/// `"0,2,4,8"`.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| err(format!("bad integer {x:?}"))))
        .collect()
}
