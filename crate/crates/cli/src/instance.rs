//! Instance files: `{"kind", "payload", "options", "sweep"}`.

use canonpos_core::forms::{ComplexQuadraticSymbolExponent, QuadraticWeight};
use canonpos_core::linalg::{CMat, C64};
use canonpos_core::symplectic::ComplexCanonicalMap;
use serde_json::{Map, Value};

use crate::CliError;

pub const KINDS: [&str; 6] = ["weight", "lagrangian", "map", "fio", "toeplitz", "validate"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub kind: Option<String>,
    pub payload: Map<String, Value>,
    pub options: Options,
    pub sweep: Option<Vec<Map<String, Value>>>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| invalid(format!("instance is not valid JSON: {e}")))?;
        let root = root
            .as_object()
            .ok_or_else(|| invalid("instance must be a JSON object"))?;
        for key in root.keys() {
            if !matches!(key.as_str(), "kind" | "payload" | "options" | "sweep") {
                return Err(invalid(format!("unknown top-level field `{key}`")));
            }
        }
        let kind = match root.get("kind") {
            None => None,
            Some(Value::String(k)) if KINDS.contains(&k.as_str()) => Some(k.clone()),
            Some(other) => return Err(invalid(format!("unknown kind {other}"))),
        };
        let payload = match root.get("payload") {
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(invalid("`payload` must be an object")),
            None => return Err(invalid("missing `payload`")),
        };
        let options = match root.get("options") {
            None => Options::default(),
            Some(Value::Object(m)) => parse_options(m)?,
            Some(_) => return Err(invalid("`options` must be an object")),
        };
        let sweep = match root.get("sweep") {
            None => None,
            Some(Value::Array(items)) => Some(
                items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_object()
                            .cloned()
                            .ok_or_else(|| invalid(format!("sweep[{i}] must be an object")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Some(_) => return Err(invalid("`sweep` must be an array of objects")),
        };
        Ok(Self {
            kind,
            payload,
            options,
            sweep,
        })
    }

    /// One payload per sweep element, each overriding the base payload's fields.
    pub fn payloads(&self) -> Vec<Map<String, Value>> {
        match &self.sweep {
            None => vec![self.payload.clone()],
            Some(items) => items
                .iter()
                .map(|item| {
                    let mut p = self.payload.clone();
                    for (k, v) in item {
                        p.insert(k.clone(), v.clone());
                    }
                    p
                })
                .collect(),
        }
    }
}

fn parse_options(m: &Map<String, Value>) -> Result<Options, CliError> {
    let mut o = Options::default();
    for (k, v) in m {
        match k.as_str() {
            "tol" => {
                o.tol = Some(
                    v.as_f64()
                        .filter(|t| *t > 0.0)
                        .ok_or_else(|| invalid("options.tol must be a positive number"))?,
                )
            }
            "seed" => {
                o.seed = Some(
                    v.as_u64()
                        .ok_or_else(|| invalid("options.seed must be a non-negative integer"))?,
                )
            }
            "truncation" => {
                o.truncation = Some(
                    v.as_u64()
                        .filter(|n| *n > 0)
                        .ok_or_else(|| invalid("options.truncation must be a positive integer"))?
                        as usize,
                )
            }
            _ => return Err(invalid(format!("unknown option `{k}`"))),
        }
    }
    Ok(o)
}

pub fn complex(v: &Value, what: &str) -> Result<C64, CliError> {
    let z = match v {
        Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
            (Some(re), Some(im)) => C64::new(re, im),
            _ => {
                return Err(invalid(format!(
                    "{what}: complex entries are [re, im] number pairs"
                )))
            }
        },
        Value::Number(n) => C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
        _ => {
            return Err(invalid(format!(
                "{what}: complex entries are [re, im] number pairs"
            )))
        }
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(invalid(format!("{what}: entries must be finite")));
    }
    Ok(z)
}

pub fn matrix(v: &Value, what: &str) -> Result<CMat, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what} must be an array of rows")))?;
    let ncols = rows
        .first()
        .and_then(|r| r.as_array())
        .map_or(0, |r| r.len());
    let mut m = CMat::zeros(rows.len(), ncols);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| invalid(format!("{what} row {r} must be an array")))?;
        if row.len() != ncols {
            return Err(invalid(format!(
                "{what} is ragged: row {r} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        for (c, entry) in row.iter().enumerate() {
            m[(r, c)] = complex(entry, &format!("{what}[{r}][{c}]"))?;
        }
    }
    Ok(m)
}

pub fn field<'a>(p: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    p.get(key)
        .ok_or_else(|| invalid(format!("payload is missing `{key}`")))
}

pub fn square(p: &Map<String, Value>, key: &str, n: Option<usize>) -> Result<CMat, CliError> {
    let m = matrix(field(p, key)?, key)?;
    if m.nrows() != m.ncols() {
        return Err(invalid(format!(
            "{key} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if let Some(n) = n {
        if m.nrows() != n {
            return Err(invalid(format!(
                "{key} has size {}, expected {n}",
                m.nrows()
            )));
        }
    }
    Ok(m)
}

/// A weight given as `{"A": .., "L": ..}`.
pub fn weight(
    p: &Map<String, Value>,
    key: &str,
    n: Option<usize>,
) -> Result<QuadraticWeight, CliError> {
    let obj = field(p, key)?
        .as_object()
        .ok_or_else(|| invalid(format!("`{key}` must be an object with A and L")))?;
    weight_obj(obj, key, n)
}

pub fn weight_obj(
    obj: &Map<String, Value>,
    key: &str,
    n: Option<usize>,
) -> Result<QuadraticWeight, CliError> {
    let a = square(obj, "A", n).map_err(|e| e.context(key))?;
    let l = square(obj, "L", Some(a.nrows())).map_err(|e| e.context(key))?;
    QuadraticWeight::new(a, l).map_err(|e| CliError::from(e).context(key))
}

pub fn canonical_map(p: &Map<String, Value>, key: &str) -> Result<ComplexCanonicalMap, CliError> {
    let m = square(p, key, None)?;
    if m.nrows() % 2 != 0 {
        return Err(invalid(format!(
            "{key} must be 2n x 2n, got {0}x{0}",
            m.nrows()
        )));
    }
    ComplexCanonicalMap::new(m).map_err(|e| CliError::from(e).context(key))
}

/// Either `Q1`, `Q2`, `Q3`, or `lambda` for `q = (λ/2)|y|²` on the dimension of `n`.
pub fn symbol(
    p: &Map<String, Value>,
    n: usize,
) -> Result<ComplexQuadraticSymbolExponent, CliError> {
    if let Some(l) = p.get("lambda") {
        if ["Q1", "Q2", "Q3"].iter().any(|k| p.contains_key(*k)) {
            return Err(invalid("give either `lambda` or `Q1`/`Q2`/`Q3`, not both"));
        }
        let lambda = complex(l, "lambda")?;
        return Ok(ComplexQuadraticSymbolExponent::radial(n, lambda * 0.5));
    }
    let q1 = square(p, "Q1", Some(n))?;
    let q2 = square(p, "Q2", Some(n))?;
    let q3 = square(p, "Q3", Some(n))?;
    ComplexQuadraticSymbolExponent::new(q1, q2, q3).map_err(CliError::from)
}
