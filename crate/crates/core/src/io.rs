//! Text formats: polynomial and mapping literals, size lists, and the CSV and
//! JSON tables emitted by the command line front end.
//!
//! Exact probabilities are always written as decimal numerator/denominator
//! strings; the float column is a convenience and is ignored when parsing.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combin::{to_f64, Rational};
use crate::dist::ExactDistribution;
use crate::error::{Error, Result};
use crate::sim::EmpiricalDistribution;

pub const SCHEMA_VERSION: u32 = 1;

pub const DIST_CSV_HEADER: &str = "k,numerator,denominator,float_prob";
pub const EMPIRICAL_CSV_HEADER: &str = "support,count,exact_freq_num,exact_freq_den";

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: {s:?} is not a nonnegative integer")))
}

fn parse_bigint(s: &str, what: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("{what}: {s:?} is not an integer")))
}

/// Comma separated integers, e.g. the coefficient list `0,0,0,1,0,1`.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_u64(x, "list entry")).collect()
}

pub fn format_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Subset sizes as `2,3,3` or the shorthand `m×ell` (`mxell` also accepted).
pub fn parse_sizes(s: &str) -> Result<Vec<u64>> {
    if let Some((m, ell)) = s.split_once(['×', 'x', 'X']) {
        let m = parse_u64(m, "subset size")?;
        let ell = parse_u64(ell, "subset count")?;
        return Ok(vec![m; ell as usize]);
    }
    parse_list(s)
}

/// `q=7;l=3;r=1;a=1,0,5`: a cyclotomic mapping given by element codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingText {
    pub q: u64,
    pub ell: u64,
    pub r: u64,
    pub branches: Vec<u64>,
}

impl FromStr for MappingText {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut q, mut ell, mut r, mut branches) = (None, None, None, None);
        for part in s.split(';').filter(|p| !p.trim().is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("mapping field {part:?} lacks '='")))?;
            match key.trim() {
                "q" => q = Some(parse_u64(val, "q")?),
                "l" | "ell" => ell = Some(parse_u64(val, "l")?),
                "r" => r = Some(parse_u64(val, "r")?),
                "a" => branches = Some(parse_list(val)?),
                other => return Err(Error::Parse(format!("unknown mapping field {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("mapping is missing {k}="));
        let branches = branches.ok_or_else(|| missing("a"))?;
        Ok(Self {
            q: q.ok_or_else(|| missing("q"))?,
            ell: ell.unwrap_or(branches.len() as u64),
            r: r.ok_or_else(|| missing("r"))?,
            branches,
        })
    }
}

impl std::fmt::Display for MappingText {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q={};l={};r={};a={}", self.q, self.ell, self.r, format_list(&self.branches))
    }
}

/// One row per positive-probability point, over the least common denominator.
pub fn dist_to_csv(d: &ExactDistribution) -> String {
    let den = d.common_denominator();
    let mut out = String::from(DIST_CSV_HEADER);
    out.push('\n');
    for (k, p) in d.iter() {
        let num = p.numer() * (&den / p.denom());
        out.push_str(&format!("{k},{num},{den},{}\n", to_f64(p)));
    }
    out
}

pub fn dist_from_csv(text: &str) -> Result<ExactDistribution> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(DIST_CSV_HEADER) {
        return Err(Error::Parse(format!("expected header {DIST_CSV_HEADER:?}")));
    }
    let rows = lines
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::Parse(format!("row {line:?} needs 4 columns")));
            }
            let den = parse_bigint(cols[2], "denominator")?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok((parse_u64(cols[0], "k")?, Rational::new(parse_bigint(cols[1], "numerator")?, den)))
        })
        .collect::<Result<Vec<_>>>()?;
    ExactDistribution::new(rows)
}

pub fn dist_to_json(d: &ExactDistribution) -> Value {
    let den = d.common_denominator();
    let points: Vec<Value> = d
        .iter()
        .map(|(k, p)| {
            json!({
                "k": k,
                "numerator": (p.numer() * (&den / p.denom())).to_string(),
                "denominator": den.to_string(),
                "float_prob": to_f64(p),
            })
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "points": points })
}

pub fn dist_from_json(v: &Value) -> Result<ExactDistribution> {
    let points = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected a \"points\" array".into()))?;
    let rows = points
        .iter()
        .map(|pt| {
            let field = |k: &str| {
                pt.get(k)
                    .ok_or_else(|| Error::Parse(format!("point is missing {k:?}")))
            };
            let k = field("k")?
                .as_u64()
                .ok_or_else(|| Error::Parse("k must be a nonnegative integer".into()))?;
            let text = |k: &str| -> Result<BigInt> {
                let s = field(k)?
                    .as_str()
                    .ok_or_else(|| Error::Parse(format!("{k} must be a decimal string")))?;
                parse_bigint(s, k)
            };
            Ok((k, Rational::new(text("numerator")?, text("denominator")?)))
        })
        .collect::<Result<Vec<_>>>()?;
    ExactDistribution::new(rows)
}

pub fn empirical_to_csv(d: &EmpiricalDistribution) -> String {
    let mut out = String::from(EMPIRICAL_CSV_HEADER);
    out.push('\n');
    for (v, c) in d.counts() {
        out.push_str(&format!("{v},{c},{c},{}\n", d.trials()));
    }
    out
}

pub fn empirical_from_csv(text: &str) -> Result<EmpiricalDistribution> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(EMPIRICAL_CSV_HEADER) {
        return Err(Error::Parse(format!("expected header {EMPIRICAL_CSV_HEADER:?}")));
    }
    let mut out = EmpiricalDistribution::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Parse(format!("row {line:?} needs 4 columns")));
        }
        out.add(parse_u64(cols[0], "support")?, parse_u64(cols[1], "count")?);
    }
    Ok(out)
}

pub fn empirical_to_json(d: &EmpiricalDistribution) -> Value {
    let rows: Vec<Value> = d
        .counts()
        .iter()
        .map(|(v, c)| {
            json!({
                "support": v,
                "count": c,
                "exact_freq_num": c.to_string(),
                "exact_freq_den": d.trials().to_string(),
            })
        })
        .collect();
    json!({ "schema_version": SCHEMA_VERSION, "trials": d.trials(), "counts": rows })
}

/// Side file describing a run. Kept apart from the main output, which must
/// stay byte-identical across repeated runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: Vec<String>,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub budgets: Option<Value>,
    pub wall_time_secs: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::rat;

    fn q3() -> ExactDistribution {
        ExactDistribution::new([(1, rat(1, 9)), (2, rat(2, 3)), (3, rat(2, 9))]).unwrap()
    }

    #[test]
    fn lists_and_sizes() {
        assert_eq!(parse_list("0,0,0,1,0,1").unwrap(), vec![0, 0, 0, 1, 0, 1]);
        assert_eq!(parse_list(" ").unwrap(), Vec::<u64>::new());
        assert!(parse_list("1,-2").is_err());
        assert_eq!(parse_sizes("2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_sizes("5×3").unwrap(), vec![5, 5, 5]);
        assert_eq!(parse_sizes("5x2").unwrap(), vec![5, 5]);
        assert_eq!(format_list(&[4u64, 5]), "4,5");
    }

    #[test]
    fn mapping_text() {
        let m: MappingText = "q=7;l=3;r=2;a=1,0,5".parse().unwrap();
        assert_eq!((m.q, m.ell, m.r, m.branches.clone()), (7, 3, 2, vec![1, 0, 5]));
        assert_eq!(m.to_string().parse::<MappingText>().unwrap(), m);
        assert_eq!("q=5;r=1;a=2,3".parse::<MappingText>().unwrap().ell, 2);
        assert!("q=5;r=1".parse::<MappingText>().is_err());
        assert!("q=5;r=1;z=3;a=1".parse::<MappingText>().is_err());
    }

    #[test]
    fn dist_csv_uses_common_denominator() {
        let csv = dist_to_csv(&q3());
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert!(rows[0].starts_with("1,1,9,"));
        assert!(rows[1].starts_with("2,6,9,"));
        assert!(rows[2].starts_with("3,2,9,"));
        assert_eq!(dist_from_csv(&csv).unwrap(), q3());
        assert!(dist_from_csv("k,p\n1,1").is_err());
    }

    #[test]
    fn dist_json_round_trip() {
        let v = dist_to_json(&q3());
        assert_eq!(v["points"][1]["numerator"], "6");
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(dist_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), q3());
    }

    #[test]
    fn empirical_round_trip() {
        let d = EmpiricalDistribution::from_counts([(2, 5), (7, 1)]);
        let csv = empirical_to_csv(&d);
        assert_eq!(csv, "support,count,exact_freq_num,exact_freq_den\n2,5,5,6\n7,1,1,6\n");
        assert_eq!(empirical_from_csv(&csv).unwrap(), d);
        assert_eq!(empirical_to_json(&d)["trials"], 6);
    }
}
