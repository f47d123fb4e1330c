//! One-line canonical text form of instances:
//!
//! ```text
//! perm n=4 map=2,1,3,4
//! search n=4 marked=2
//! search n=4 marked=-
//! func n=4 map=1,1,3,4
//! ```

use std::fmt;
use std::str::FromStr;

use super::{GeneralFunction, OracleError, Permutation, SearchInstance};

fn join(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm n={} map={}", self.n(), join(self.images()))
    }
}

impl fmt::Display for SearchInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.marked() {
            Some(j) => write!(f, "search n={} marked={j}", self.n()),
            None => write!(f, "search n={} marked=-", self.n()),
        }
    }
}

impl fmt::Display for GeneralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "func n={} map={}", self.n(), join(self.images()))
    }
}

struct Fields<'a> {
    n: usize,
    key: &'a str,
    value: &'a str,
}

fn split_line<'a>(line: &'a str, tag: &str, key: &'a str) -> Result<Fields<'a>, OracleError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let [head, n_field, rest] = parts.as_slice() else {
        return Err(OracleError::Parse(format!("expected three fields in {line:?}")));
    };
    if *head != tag {
        return Err(OracleError::Parse(format!("expected tag {tag:?}, found {head:?}")));
    }
    let n = n_field
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| OracleError::Parse(format!("bad size field {n_field:?}")))?;
    let value = rest
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| OracleError::Parse(format!("expected {key}=..., found {rest:?}")))?;
    Ok(Fields { n, key, value })
}

fn parse_list(fields: &Fields<'_>) -> Result<Vec<usize>, OracleError> {
    let values = fields
        .value
        .split(',')
        .map(|s| s.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| OracleError::Parse(format!("{}: {e}", fields.key)))?;
    if values.len() != fields.n {
        return Err(OracleError::SizeMismatch { expected: fields.n, found: values.len() });
    }
    Ok(values)
}

impl FromStr for Permutation {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields = split_line(s, "perm", "map")?;
        Permutation::new(parse_list(&fields)?)
    }
}

impl FromStr for GeneralFunction {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields = split_line(s, "func", "map")?;
        GeneralFunction::new(parse_list(&fields)?)
    }
}

impl FromStr for SearchInstance {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields = split_line(s, "search", "marked")?;
        let marked = match fields.value {
            "-" => None,
            v => Some(v.parse().map_err(|e| OracleError::Parse(format!("marked: {e}")))?),
        };
        SearchInstance::new(fields.n, marked)
    }
}
