//! JSON encoding of fields, elements, forms, ideals and pipeline results.
//!
//! Integers are written as decimal strings so nothing is lost to doubles;
//! on input both strings and JSON numbers are accepted. Elements of K are
//! pairs `[a, b]` meaning a + bω (a bare integer is accepted too). Ideals
//! are HNF triples.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::cubic::{BinaryCubic, BinaryForm, CovariantTriple};
use crate::curve::{CurveInvariants, KFraction, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::nf::{factor_rational_prime, AlgInt, Ideal, PrimeIdeal, QuadField};
use crate::pipeline::{
    AuditReport, Distinguisher, ExceptionalSet, SearchProgress, TMSolution, Verdict,
};

pub const SCHEMA_VERSION: u64 = 1;

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

/// Wrap a report body with the schema version and command name.
pub fn report(command: &str, body: Map<String, Value>) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out.extend(body);
    Value::Object(out)
}

/// Accepts `{"d": -5}`, `{"d": "Q"}`, `"Q"`, `"-5"` or `-5`.
pub fn parse_field(v: &Value) -> Result<QuadField> {
    match v {
        Value::Object(m) => parse_field(m.get("d").ok_or_else(|| malformed("field needs \"d\""))?),
        Value::String(s) => parse_field_str(s),
        Value::Number(n) => {
            let d = n
                .as_i64()
                .ok_or_else(|| malformed(format!("bad field {n}")))?;
            field_from_d(d)
        }
        other => Err(malformed(format!("bad field {other}"))),
    }
}

pub fn parse_field_str(s: &str) -> Result<QuadField> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(QuadField::rationals());
    }
    let d = s
        .parse::<i64>()
        .map_err(|_| malformed(format!("bad field descriptor {s:?}")))?;
    field_from_d(d)
}

fn field_from_d(d: i64) -> Result<QuadField> {
    if d == 1 {
        Ok(QuadField::rationals())
    } else {
        QuadField::new(d)
    }
}

pub fn field_to_json(k: QuadField) -> Value {
    if k.is_rationals() {
        json!({ "d": "Q" })
    } else {
        json!({ "d": k.d().unwrap() })
    }
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => {
            BigInt::from_str(s.trim()).map_err(|_| malformed(format!("bad integer {s:?}")))
        }
        // exact for any size when serde_json keeps the digits
        // (arbitrary_precision); a float such as 1e30 is refused
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| malformed(format!("bad integer {n}")))
        }
        other => Err(malformed(format!("expected an integer, got {other}"))),
    }
}

pub fn int_to_json(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn parse_element(k: QuadField, v: &Value) -> Result<AlgInt> {
    match v {
        Value::Array(xs) => match xs.as_slice() {
            [a] => Ok(k.int(parse_int(a)?)),
            [a, b] => k.elem(parse_int(a)?, parse_int(b)?),
            _ => Err(malformed(format!("element must be [a, b], got {v}"))),
        },
        _ => Ok(k.int(parse_int(v)?)),
    }
}

pub fn element_to_json(x: &AlgInt) -> Value {
    json!([int_to_json(x.a()), int_to_json(x.b())])
}

/// Accepts `{"coeffs": [...]}` or a bare array of four elements.
pub fn parse_cubic(k: QuadField, v: &Value) -> Result<BinaryCubic> {
    let coeffs = match v {
        Value::Object(m) => m
            .get("coeffs")
            .ok_or_else(|| malformed("form needs \"coeffs\""))?,
        _ => v,
    };
    let xs = coeffs
        .as_array()
        .ok_or_else(|| malformed("coefficients must be an array"))?;
    if xs.len() != 4 {
        return Err(malformed(format!(
            "a binary cubic needs 4 coefficients, got {}",
            xs.len()
        )));
    }
    let cs: Vec<AlgInt> = xs
        .iter()
        .map(|c| parse_element(k, c))
        .collect::<Result<_>>()?;
    BinaryCubic::new(cs.try_into().unwrap())
}

pub fn form_to_json(f: &BinaryForm) -> Value {
    json!({
        "coeffs": f.coeffs().iter().map(element_to_json).collect::<Vec<_>>(),
        "text": f.to_string(),
    })
}

pub fn covariants_to_json(c: &CovariantTriple) -> Value {
    json!({
        "F": form_to_json(c.f.as_form()),
        "H": form_to_json(c.h.as_form()),
        "G": form_to_json(c.g.as_form()),
        "disc": element_to_json(&c.disc),
    })
}

pub fn ideal_to_json(i: &Ideal) -> Value {
    let [a, b, c] = i.hnf();
    json!([int_to_json(a), int_to_json(b), int_to_json(c)])
}

pub fn parse_ideal(k: QuadField, v: &Value) -> Result<Ideal> {
    let xs = v
        .as_array()
        .filter(|xs| xs.len() == 3)
        .ok_or_else(|| malformed(format!("ideal must be an HNF triple, got {v}")))?;
    Ideal::from_hnf(
        k,
        parse_int(&xs[0])?,
        parse_int(&xs[1])?,
        parse_int(&xs[2])?,
    )
}

pub fn prime_to_json(p: &PrimeIdeal) -> Value {
    json!({
        "p": p.p(),
        "f": p.residue_degree(),
        "e": p.ramification_index(),
        "norm": p.norm().to_string(),
        "hnf": ideal_to_json(p.ideal()),
    })
}

/// A prime ideal given as an HNF triple, a `{"hnf": ...}` object, or (over
/// ℚ only) a rational prime.
pub fn parse_prime(k: QuadField, v: &Value) -> Result<PrimeIdeal> {
    let v = v.get("hnf").unwrap_or(v);
    let ideal = match v {
        Value::Array(_) => parse_ideal(k, v)?,
        _ if k.is_rationals() => Ideal::from_hnf(k, parse_int(v)?, 0.into(), 1.into())?,
        _ => return Err(malformed(format!("prime must be an HNF triple, got {v}"))),
    };
    let p = u64::try_from(&ideal.hnf()[0].clone())
        .map_err(|_| malformed(format!("prime {ideal} too large")))?;
    if !crate::arith::is_prime_u64(p) {
        return Err(malformed(format!("{ideal} is not a prime ideal")));
    }
    factor_rational_prime(k, p)
        .into_iter()
        .map(|(q, _)| q)
        .find(|q| *q.ideal() == ideal)
        .ok_or_else(|| malformed(format!("{ideal} is not a prime ideal")))
}

pub fn parse_curve(k: QuadField, v: &Value) -> Result<WeierstrassCurve> {
    let get = |name: &str| -> Result<AlgInt> {
        parse_element(
            k,
            v.get(name)
                .ok_or_else(|| malformed(format!("curve needs {name:?}")))?,
        )
    };
    WeierstrassCurve::new(get("a2")?, get("a4")?, get("a6")?)
}

pub fn curve_to_json(e: &WeierstrassCurve) -> Value {
    json!({
        "a2": element_to_json(&e.a2),
        "a4": element_to_json(&e.a4),
        "a6": element_to_json(&e.a6),
        "text": e.to_string(),
    })
}

pub fn fraction_to_json(x: &KFraction) -> Value {
    json!({ "num": element_to_json(&x.num), "den": int_to_json(&x.den) })
}

pub fn invariants_to_json(inv: &CurveInvariants) -> Value {
    json!({
        "c4": element_to_json(&inv.c4),
        "c6": element_to_json(&inv.c6),
        "delta": element_to_json(&inv.delta),
        "j": inv.j.as_ref().map(fraction_to_json),
        "singular": inv.is_singular(),
    })
}

pub fn sf_to_json(s: &ExceptionalSet) -> Value {
    json!({
        "field": field_to_json(s.field()),
        "finite_primes": s.finite_primes().iter().map(prime_to_json).collect::<Vec<_>>(),
        "hk_members": s.hk_members().iter().map(|m| json!({
            "class": m.class,
            "prime": prime_to_json(&m.prime),
        })).collect::<Vec<_>>(),
        "real_places": s.real_places(),
    })
}

pub fn solution_to_json(t: &TMSolution) -> Value {
    json!({
        "x": element_to_json(&t.x),
        "y": element_to_json(&t.y),
        "value": element_to_json(&t.value),
        "support": t.support.iter().map(|p| ideal_to_json(p.ideal())).collect::<Vec<_>>(),
    })
}

/// Rebuilds a solution from its coordinates; value and support are
/// recomputed rather than trusted.
pub fn parse_solution(f: &BinaryCubic, v: &Value) -> Result<TMSolution> {
    let k = f.field();
    let get = |name: &str| -> Result<AlgInt> {
        parse_element(
            k,
            v.get(name)
                .ok_or_else(|| malformed(format!("solution needs {name:?}")))?,
        )
    };
    let (x, y) = (get("x")?, get("y")?);
    let value = f.evaluate(&x, &y);
    if value.is_zero() {
        return Err(malformed("checkpoint solution has F(x, y) = 0"));
    }
    let support = crate::nf::factor_element(&value)?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    Ok(TMSolution {
        x,
        y,
        value,
        support,
    })
}

/// Checkpoint for restartable searches.
pub fn progress_to_json(f: &BinaryCubic, p: &SearchProgress) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "field": field_to_json(f.field()),
        "form": f.coeffs().iter().map(element_to_json).collect::<Vec<_>>(),
        "completed_height": p.completed_height,
        "solutions": p.solutions.iter().map(solution_to_json).collect::<Vec<_>>(),
    })
}

/// Reads a checkpoint, refusing one written for a different form.
pub fn parse_progress(f: &BinaryCubic, v: &Value) -> Result<SearchProgress> {
    let k = parse_field(
        v.get("field")
            .ok_or_else(|| malformed("checkpoint needs \"field\""))?,
    )?;
    let form = parse_cubic(
        k,
        v.get("form")
            .ok_or_else(|| malformed("checkpoint needs \"form\""))?,
    )?;
    if k != f.field() || form != *f {
        return Err(malformed("checkpoint belongs to a different form"));
    }
    let completed_height = v
        .get("completed_height")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("checkpoint needs \"completed_height\""))?;
    let solutions = v
        .get("solutions")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("checkpoint needs \"solutions\""))?
        .iter()
        .map(|s| parse_solution(f, s))
        .collect::<Result<_>>()?;
    Ok(SearchProgress {
        completed_height,
        solutions,
    })
}

pub fn check_json(
    name: &str,
    expected: impl Into<Value>,
    actual: impl Into<Value>,
    pass: bool,
) -> Value {
    json!({ "name": name, "expected": expected.into(), "actual": actual.into(), "pass": pass })
}

pub fn audit_to_json(r: &AuditReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("equation_holds".into(), json!(r.equation_holds));
    m.insert("gcd_support_ok".into(), json!(r.gcd_support_ok));
    m.insert("q_not_dividing_z".into(), json!(r.q_not_dividing_z));
    m.insert("q_not_dividing_h".into(), json!(r.q_not_dividing_h));
    m.insert("j_valuation".into(), json!(r.j_valuation));
    m.insert("semistable_outside".into(), json!(r.semistable_outside));
    m.insert(
        "finite_flat_congruences".into(),
        r.finite_flat_congruences
            .iter()
            .map(|e| json!({ "prime": ideal_to_json(e.prime.ideal()), "valuation": e.valuation, "pass": e.pass }))
            .collect(),
    );
    m.insert("fake_curve_excluded".into(), json!(r.fake_curve_excluded));
    m.insert(
        "checks".into(),
        r.checks
            .iter()
            .map(|c| {
                let mut v = check_json(c.name, c.expected.clone(), c.actual.clone(), c.pass);
                if c.informational {
                    v["informational"] = json!(true);
                }
                v
            })
            .collect(),
    );
    m.insert("verdict".into(), json!(r.verdict.to_string()));
    let failures = match &r.verdict {
        Verdict::Consistent => vec![],
        Verdict::Violation(names) => names.clone(),
    };
    m.insert("failures".into(), json!(failures));
    m
}

pub fn distinguisher_to_json(d: &Distinguisher) -> Value {
    json!({
        "prime": prime_to_json(&d.prime),
        "a1": d.a1.to_string(),
        "a2": d.a2.to_string(),
    })
}

/// Stable pretty printing with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{build_sf, tm_search};

    #[test]
    fn fields() {
        for v in [json!({"d": "Q"}), json!("q"), json!(1)] {
            assert!(parse_field(&v).unwrap().is_rationals());
        }
        let k = parse_field(&json!({"d": -5})).unwrap();
        assert_eq!(k.d(), Some(-5));
        assert_eq!(parse_field(&field_to_json(k)).unwrap(), k);
        assert!(parse_field(&json!({"d": -4})).is_err());
        assert!(parse_field(&json!("x")).is_err());
    }

    #[test]
    fn elements_and_forms_round_trip() {
        let k = QuadField::new(-5).unwrap();
        let x = k.elem(BigInt::from(10).pow(30), -3).unwrap();
        assert_eq!(parse_element(k, &element_to_json(&x)).unwrap(), x);
        assert_eq!(parse_element(k, &json!(7)).unwrap(), k.int(7));
        assert!(parse_int(&json!(1.5)).is_err());
        assert!(parse_int(&json!("12x")).is_err());
        let f = parse_cubic(k, &json!({"coeffs": [1, [0, 1], "2", [-3, "4"]]})).unwrap();
        let back = parse_cubic(k, &form_to_json(f.as_form())).unwrap();
        assert_eq!(back, f);
        assert!(parse_cubic(k, &json!([1, 2, 3])).is_err());
        assert!(parse_cubic(QuadField::rationals(), &json!([1, [0, 1], 0, 1])).is_err());
    }

    #[test]
    fn primes_round_trip() {
        let k = QuadField::new(-5).unwrap();
        for (p, _) in factor_rational_prime(k, 3)
            .into_iter()
            .chain(factor_rational_prime(k, 11))
        {
            assert_eq!(parse_prime(k, &prime_to_json(&p)).unwrap(), p);
        }
        assert!(parse_prime(k, &json!([6, 1, 1])).is_err());
        let q = QuadField::rationals();
        assert_eq!(parse_prime(q, &json!(31)).unwrap().p(), 31);
        assert!(parse_prime(q, &json!(33)).is_err());
    }

    #[test]
    fn checkpoint_round_trip() {
        let q = QuadField::rationals();
        let f = BinaryCubic::from_ints(q, [1, 0, 0, -2]);
        let s = build_sf(&f, 100).unwrap();
        let p = SearchProgress {
            completed_height: 5,
            solutions: tm_search(&f, &s, 5).unwrap(),
        };
        let v: Value = serde_json::from_str(&to_pretty(&progress_to_json(&f, &p))).unwrap();
        assert_eq!(parse_progress(&f, &v).unwrap(), p);
        let g = BinaryCubic::from_ints(q, [1, 0, 0, -3]);
        assert!(parse_progress(&g, &v).is_err());
    }
}
