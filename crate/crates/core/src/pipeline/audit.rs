//! Audit of a putative solution F(x₀, y₀) = z₀^l against the local facts a
//! genuine solution must satisfy.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::sf::{theorem_hypothesis, ExceptionalSet};
use crate::arith::{factor_integer, is_prime_u64};
use crate::cubic::BinaryCubic;
use crate::curve::{frey_curve, frey_invariants};
use crate::error::{Error, Result};
use crate::nf::{factor_rational_prime, is_supported_on, AlgInt, Ideal, PrimeIdeal};

/// Image of inertia in the mod-l representation of a fake elliptic curve has
/// order at most 24, which rules those out once l exceeds it.
pub const FAKE_INERTIA_BOUND: u64 = 24;

pub const EQUATION_HOLDS: &str = "equation_holds";
pub const GCD_SUPPORT_OK: &str = "gcd_support_ok";
pub const Q_NOT_DIVIDING_Z: &str = "q_not_dividing_z";
pub const Q_NOT_DIVIDING_H: &str = "q_not_dividing_h";
pub const J_VALUATION: &str = "j_valuation";
pub const SEMISTABLE_OUTSIDE: &str = "semistable_outside";
pub const FINITE_FLAT: &str = "finite_flat_congruences";
pub const FAKE_CURVE_EXCLUDED: &str = "fake_curve_excluded";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// Informational checks are reported but do not affect the verdict.
    pub informational: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFlatEntry {
    pub prime: PrimeIdeal,
    /// v_𝔩(Δ(x₀, y₀)); `None` when Δ(x₀, y₀) = 0.
    pub valuation: Option<u32>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violation(Vec<&'static str>),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Consistent => write!(f, "CONSISTENT"),
            Verdict::Violation(names) => write!(f, "VIOLATION({})", names.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub equation_holds: bool,
    pub gcd_support_ok: bool,
    pub q_not_dividing_z: bool,
    pub q_not_dividing_h: bool,
    /// v_𝔮(j(x₀, y₀)); `None` when j = 0 or the curve is singular.
    pub j_valuation: Option<i64>,
    pub semistable_outside: bool,
    pub finite_flat_congruences: Vec<FiniteFlatEntry>,
    pub fake_curve_excluded: bool,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl AuditReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing verdict-relevant checks.
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.pass && !c.informational)
            .map(|c| c.name)
            .collect()
    }
}

pub struct AuditInput<'a> {
    pub f: &'a BinaryCubic,
    pub x0: &'a AlgInt,
    pub y0: &'a AlgInt,
    pub z0: &'a AlgInt,
    pub l: u64,
    pub q: &'a PrimeIdeal,
    pub s: &'a ExceptionalSet,
}

pub fn audit_solution(input: &AuditInput<'_>) -> Result<AuditReport> {
    let AuditInput {
        f,
        x0,
        y0,
        z0,
        l,
        q,
        s,
    } = *input;
    let field = f.field();
    if [x0, y0, z0].iter().any(|e| e.field() != field) || s.field() != field || q.field() != field {
        return Err(Error::FieldMismatch);
    }
    if l < 5 || !is_prime_u64(l) {
        return Err(Error::Malformed(format!("l = {l} must be a prime >= 5")));
    }
    if !theorem_hypothesis(f)?.contains(q) {
        return Err(Error::Malformed(format!(
            "{q} does not exactly divide the discriminant away from 2*alpha0"
        )));
    }
    if x0.is_zero() && y0.is_zero() {
        return Err(Error::Malformed("(x0, y0) = (0, 0)".into()));
    }

    let mut checks = Vec::new();
    let value = f.evaluate(x0, y0);
    let l32 = u32::try_from(l).map_err(|_| Error::Malformed("l too large".into()))?;

    let equation_holds = value == z0.pow(l32);
    checks.push(Check {
        name: EQUATION_HOLDS,
        expected: format!("F(x0, y0) = z0^{l}"),
        actual: if equation_holds {
            "equal".into()
        } else {
            format!("F(x0, y0) = {value}")
        },
        pass: equation_holds,
        informational: false,
    });

    let gcd = Ideal::from_generators(field, &[x0.clone(), y0.clone(), z0.clone()]).unwrap();
    let gcd_support_ok = is_supported_on(&gcd, s.finite_primes());
    checks.push(Check {
        name: GCD_SUPPORT_OK,
        expected: "gcd(x0, y0, z0) supported on S_F".into(),
        actual: format!("gcd = {gcd}"),
        pass: gcd_support_ok,
        informational: false,
    });

    let q_not_dividing_z = !q.divides(z0);
    checks.push(Check {
        name: Q_NOT_DIVIDING_Z,
        expected: format!("{q} does not divide z0"),
        actual: if z0.is_zero() {
            "z0 = 0".into()
        } else {
            format!("v_q(z0) = {}", q.valuation(z0)?)
        },
        pass: q_not_dividing_z,
        informational: false,
    });

    let h_value = f.hessian().evaluate(x0, y0);
    let q_not_dividing_h = !q.divides(&h_value);
    checks.push(Check {
        name: Q_NOT_DIVIDING_H,
        expected: format!("{q} does not divide H(x0, y0)"),
        actual: if h_value.is_zero() {
            "H(x0, y0) = 0".into()
        } else {
            format!("v_q(H) = {}", q.valuation(&h_value)?)
        },
        pass: q_not_dividing_h,
        informational: true,
    });

    let j_valuation = if value.is_zero() {
        None
    } else {
        frey_invariants(f, x0, y0)?.j.and_then(|j| j.valuation(q))
    };
    checks.push(Check {
        name: J_VALUATION,
        expected: "-1".into(),
        actual: j_valuation.map_or("undefined".into(), |v| v.to_string()),
        pass: j_valuation == Some(-1),
        informational: false,
    });

    let (semistable_outside, semistable_note) = semistability(f, x0, y0, z0, &value, s);
    checks.push(Check {
        name: SEMISTABLE_OUTSIDE,
        expected: "GOOD or MULTIPLICATIVE at primes of F(x0, y0) outside S_F and gcd(x0, y0)"
            .into(),
        actual: semistable_note,
        pass: semistable_outside,
        informational: false,
    });

    let delta = if value.is_zero() {
        field.zero()
    } else {
        frey_invariants(f, x0, y0)?.delta
    };
    let finite_flat_congruences: Vec<FiniteFlatEntry> = factor_rational_prime(field, l)
        .into_iter()
        .map(|(prime, _)| {
            let valuation = (!delta.is_zero()).then(|| prime.valuation(&delta).unwrap());
            let pass = valuation.is_some_and(|v| (v as u64).is_multiple_of(l));
            FiniteFlatEntry {
                prime,
                valuation,
                pass,
            }
        })
        .collect();
    let ff_pass = finite_flat_congruences.iter().all(|e| e.pass);
    checks.push(Check {
        name: FINITE_FLAT,
        expected: format!("v(Delta) = 0 mod {l} at every prime over {l}"),
        actual: finite_flat_congruences
            .iter()
            .map(|e| {
                format!(
                    "{}: {}",
                    e.prime,
                    e.valuation.map_or("undefined".into(), |v| v.to_string())
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
        pass: ff_pass,
        informational: false,
    });

    let fake_curve_excluded = l > FAKE_INERTIA_BOUND;
    checks.push(Check {
        name: FAKE_CURVE_EXCLUDED,
        expected: format!("l > {FAKE_INERTIA_BOUND}"),
        actual: format!("l = {l}"),
        pass: fake_curve_excluded,
        informational: false,
    });

    let failures: Vec<&'static str> = checks
        .iter()
        .filter(|c| !c.pass && !c.informational)
        .map(|c| c.name)
        .collect();
    let verdict = if failures.is_empty() {
        Verdict::Consistent
    } else {
        Verdict::Violation(failures)
    };
    Ok(AuditReport {
        equation_holds,
        gcd_support_ok,
        q_not_dividing_z,
        q_not_dividing_h,
        j_valuation,
        semistable_outside,
        finite_flat_congruences,
        fake_curve_excluded,
        checks,
        verdict,
    })
}

/// Reduction types of the Frey curve at primes of F(x₀, y₀) outside S_F
/// that do not divide gcd(x₀, y₀).
fn semistability(
    f: &BinaryCubic,
    x0: &AlgInt,
    y0: &AlgInt,
    z0: &AlgInt,
    value: &AlgInt,
    s: &ExceptionalSet,
) -> (bool, String) {
    if value.is_zero() {
        return (false, "F(x0, y0) = 0".into());
    }
    let curve = match frey_curve(f, x0, y0) {
        Ok(c) => c,
        Err(e) => return (false, e.to_string()),
    };
    let primes = match prime_divisors(value, z0) {
        Ok(p) => p,
        Err(e) => return (false, e.to_string()),
    };
    let gcd = Ideal::from_generators(f.field(), &[x0.clone(), y0.clone()]).unwrap();
    let mut checked = 0;
    for p in primes {
        if s.contains(&p) || p.ideal_valuation(&gcd) > 0 {
            continue;
        }
        checked += 1;
        match curve.reduction_type(&p) {
            Ok(t) if t.is_semistable() => {}
            Ok(t) => return (false, format!("{t} at {p}")),
            Err(e) => return (false, format!("{e} at {p}")),
        }
    }
    (true, format!("{checked} primes checked"))
}

/// Prime ideals dividing `value`. The rational primes under `hint` are tried
/// first, so that a value equal to a large power of the hint is cheap.
fn prime_divisors(value: &AlgInt, hint: &AlgInt) -> Result<Vec<PrimeIdeal>> {
    let field = value.field();
    let mut n = value.norm().abs();
    let mut rational: Vec<u64> = Vec::new();
    if !hint.is_zero() {
        for (p, _) in factor_integer(&hint.norm())? {
            let bp = BigInt::from(p);
            if (&n % &bp).is_zero() {
                rational.push(p);
                while (&n % &bp).is_zero() {
                    n /= &bp;
                }
            }
        }
    }
    if !n.is_zero() && n > BigInt::from(1) {
        rational.extend(factor_integer(&n)?.into_iter().map(|(p, _)| p));
    }
    rational.sort_unstable();
    rational.dedup();
    let mut out = Vec::new();
    for p in rational {
        for (pr, _) in factor_rational_prime(field, p) {
            if pr.valuation(value)? > 0 {
                out.push(pr);
            }
        }
    }
    out.sort();
    Ok(out)
}
