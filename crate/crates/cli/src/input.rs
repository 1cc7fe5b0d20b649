//! Parsers for command-line values and the JSON file formats consumed by
//! the `orbital` and `transfer` subcommands.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use qvol::invariants::{CharacterSign, MatQ, TransferSigns};
use qvol::orbital::{Clamped, ClampedVec, OrbitalProfile};

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer '{t}': {e}"))
        })
        .collect()
}

pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad integer '{t}': {e}"))
        })
        .collect()
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| format!("bad rational '{s}': {e}"))
}

pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect()
}

/// Torus factors `degree:sign` separated by commas, e.g. `2:1,1:-1`.
pub fn parse_torus(s: &str) -> Result<Vec<(u32, i8)>, String> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (d, e) = t
                .split_once(':')
                .ok_or_else(|| format!("bad torus factor '{t}' (want degree:sign)"))?;
            let degree = d
                .trim()
                .parse::<u32>()
                .map_err(|e| format!("bad degree '{d}': {e}"))?;
            let sign = match e.trim() {
                "1" | "+1" | "+" => 1i8,
                "-1" | "-" => -1,
                other => return Err(format!("bad sign '{other}' (want 1 or -1)")),
            };
            Ok((degree, sign))
        })
        .collect()
}

/// Characters `eta0,eta1,eta2`, each `q` (quadratic) or `1` (trivial).
pub fn parse_signs(s: &str) -> Result<TransferSigns, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("--signs wants three entries, got {}", parts.len()));
    }
    let parse_one = |t: &str| match t {
        "q" | "quadratic" => Ok(CharacterSign::Quadratic),
        "1" | "trivial" => Ok(CharacterSign::Trivial),
        other => Err(format!("bad character '{other}' (want q or 1)")),
    };
    Ok(TransferSigns {
        eta0: parse_one(parts[0])?,
        eta1: parse_one(parts[1])?,
        eta2: parse_one(parts[2])?,
    })
}

fn rational_from_json(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| format!("non-integer number {n}; use a \"p/q\" string"))?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        Value::String(s) => parse_rational(s),
        other => Err(format!("expected a number or rational string, got {other}")),
    }
}

/// A matrix as a JSON array of equal-length rows of rationals.
pub fn parse_matrix(text: &str) -> Result<MatQ, String> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| format!("bad matrix JSON: {e}"))?;
    let rows = value
        .as_array()
        .ok_or("matrix JSON must be an array of rows")?;
    let height = rows.len();
    let mut data = Vec::new();
    let mut width = None;
    for row in rows {
        let cells = row.as_array().ok_or("matrix rows must be arrays")?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => return Err("ragged matrix rows".into()),
            _ => {}
        }
        for cell in cells {
            data.push(rational_from_json(cell)?);
        }
    }
    let width = width.unwrap_or(0);
    MatQ::new(height, width, data).map_err(|e| e.to_string())
}

/// Profile JSON: `{n, N, entries: [{first: [..|"inf"], second: [..|"inf"],
/// value: "p/q"}]}` where `"inf"` encodes the integral class.
pub fn parse_profile(text: &str) -> Result<OrbitalProfile, String> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| format!("bad profile JSON: {e}"))?;
    let n = value["n"]
        .as_u64()
        .ok_or("profile needs an integer field 'n'")? as usize;
    let radius = value["N"]
        .as_u64()
        .ok_or("profile needs an integer field 'N'")?;
    let mut entries = Vec::new();
    let list = value["entries"]
        .as_array()
        .ok_or("profile needs an array field 'entries'")?;
    for item in list {
        let first = parse_clamped(&item["first"])?;
        let second = parse_clamped(&item["second"])?;
        let val = rational_from_json(&item["value"])?;
        entries.push((first, second, val));
    }
    OrbitalProfile::new(n, radius, entries).map_err(|e| e.to_string())
}

fn parse_clamped(v: &Value) -> Result<ClampedVec, String> {
    let list = v
        .as_array()
        .ok_or("clamped vectors must be arrays of integers or \"inf\"")?;
    let mut out = Vec::new();
    for item in list {
        match item {
            Value::String(s) if s == "inf" => out.push(Clamped::Integral),
            Value::Number(n) => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| format!("bad clamped entry {n}"))?;
                out.push(Clamped::Finite(i));
            }
            other => return Err(format!("bad clamped entry {other}")),
        }
    }
    Ok(ClampedVec::new(out))
}
