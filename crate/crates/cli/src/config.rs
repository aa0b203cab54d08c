//! Job configuration: an optional JSON file, overridden by command-line flags.
//! Everything is parsed and validated before any computation starts.

use std::fs;
use std::path::{Path, PathBuf};

use frey_core::cubic::BinaryCubic;
use frey_core::curve::KFraction;
use frey_core::json::{parse_cubic, parse_element, parse_field, parse_field_str, parse_int};
use frey_core::nf::{AlgInt, QuadField};
use frey_core::{Error, Result};
use num_traits::One;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub field: Option<Value>,
    pub form: Option<Value>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub resume: Option<PathBuf>,
    pub point: Option<Value>,
    pub height: Option<u64>,
    pub class_bound: Option<u64>,
    pub all_classes: Option<bool>,
    pub norm_bound: Option<u64>,
    pub l: Option<u64>,
    pub q: Option<Value>,
    pub x0: Option<Value>,
    pub y0: Option<Value>,
    pub z0: Option<Value>,
    pub curve1: Option<Value>,
    pub curve2: Option<Value>,
    pub p: Option<u64>,
    pub avoid: Option<Value>,
    pub cap: Option<u64>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
    }

    /// The field from `--field`, else from the config, else from the form
    /// file, else ℚ.
    pub fn field(&self) -> Result<QuadField> {
        if let Some(v) = &self.field {
            return parse_field(v);
        }
        if let Some(v) = self.form.as_ref().and_then(|f| f.get("field")) {
            return parse_field(v);
        }
        Ok(QuadField::rationals())
    }

    pub fn cubic(&self) -> Result<BinaryCubic> {
        let form = self
            .form
            .as_ref()
            .ok_or_else(|| malformed("no form given (--form)"))?;
        parse_cubic(self.field()?, form)
    }

    pub fn require<'a, T>(&self, v: &'a Option<T>, name: &str) -> Result<&'a T> {
        v.as_ref()
            .ok_or_else(|| malformed(format!("missing parameter --{name}")))
    }

    pub fn element(&self, v: &Option<Value>, name: &str) -> Result<AlgInt> {
        parse_element(self.field()?, self.require(v, name)?)
    }

    /// The two entries of `point` as integral elements.
    pub fn point(&self) -> Result<(AlgInt, AlgInt)> {
        let (x, y) = self.fraction_point()?;
        if !x.den.is_one() || !y.den.is_one() {
            return Err(malformed("the point must be integral"));
        }
        Ok((x.num, y.num))
    }

    /// The two entries of `point`, possibly with denominators.
    pub fn fraction_point(&self) -> Result<(KFraction, KFraction)> {
        let k = self.field()?;
        let v = self.require(&self.point, "point")?;
        let xs = v
            .as_array()
            .filter(|xs| xs.len() == 2)
            .ok_or_else(|| malformed(format!("point must have two entries, got {v}")))?;
        Ok((fraction(k, &xs[0])?, fraction(k, &xs[1])?))
    }
}

/// `{"num": e, "den": d}` or a bare element.
fn fraction(k: QuadField, v: &Value) -> Result<KFraction> {
    let (num, den) = match v.get("num") {
        Some(num) => (
            parse_element(k, num)?,
            parse_int(
                v.get("den")
                    .ok_or_else(|| malformed("fraction needs \"den\""))?,
            )?,
        ),
        None => (parse_element(k, v)?, 1.into()),
    };
    KFraction::new(num, &k.int(den)).ok_or_else(|| malformed("zero denominator"))
}

/// Reads `--form`: a path to a JSON file, or inline JSON.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| malformed(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| malformed(format!("{arg}: {e}")))
}

pub fn field_arg(arg: &str) -> Result<Value> {
    parse_field_str(arg)?;
    Ok(Value::String(arg.to_string()))
}

/// Parses `1,0`, `[1,2],[0,-1]` or `1/2,[3,1]/2` into a JSON pair of
/// elements or `{"num", "den"}` fractions.
pub fn point_arg(arg: &str) -> Result<Value> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in arg.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&arg[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&arg[start..]);
    let entries = parts
        .iter()
        .map(|p| {
            let p = p.trim();
            let (num, den) = match p.rfind('/') {
                Some(i) if !p[i..].contains(']') => (&p[..i], Some(&p[i + 1..])),
                _ => (p, None),
            };
            let num: Value = serde_json::from_str(num.trim())
                .map_err(|_| malformed(format!("bad point entry {p:?}")))?;
            Ok(match den {
                Some(d) => serde_json::json!({ "num": num, "den": d.trim() }),
                None => num,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Value::Array(entries))
}
