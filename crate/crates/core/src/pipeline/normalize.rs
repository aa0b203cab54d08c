//! Rescale a pair (x₁, y₁) ∈ K² to an integral pair whose gcd ideal is (1)
//! or the 𝓗_K prime of its class, keeping the Frey j-invariant fixed.

use num_integer::Integer;

use super::sf::{ExceptionalSet, HkPolicy};
use crate::cubic::BinaryCubic;
use crate::curve::{frey_invariants, KFraction};
use crate::error::{Error, Result};
use crate::nf::{AlgInt, Ideal, IdealClassGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPair {
    pub x: AlgInt,
    pub y: AlgInt,
    pub gcd: Ideal,
    pub gcd_class: usize,
    /// Whether the Frey j-invariant was compared; `None` when F(x, y) = 0.
    pub j_preserved: Option<bool>,
}

pub fn normalize_pair(
    f: &BinaryCubic,
    x1: &KFraction,
    y1: &KFraction,
    group: &IdealClassGroup,
    s: &ExceptionalSet,
) -> Result<NormalizedPair> {
    let field = f.field();
    if x1.num.field() != field || y1.num.field() != field || group.field() != field {
        return Err(Error::FieldMismatch);
    }
    if x1.is_zero() && y1.is_zero() {
        return Err(Error::Malformed("(x1, y1) = (0, 0)".into()));
    }
    // clear denominators
    let l = x1.den.lcm(&y1.den);
    let x = x1.num.mul_int(&(&l / &x1.den));
    let y = y1.num.mul_int(&(&l / &y1.den));

    let g = Ideal::from_generators(field, &[x.clone(), y.clone()]).unwrap();
    let class = group.class_of(&g);
    let target = match (class, s.policy()) {
        (0, HkPolicy::NonPrincipal) => Ideal::unit(field),
        _ => s
            .hk_for_class(class)
            .ok_or_else(|| Error::NotFound(format!("no H_K prime recorded for class {class}")))?
            .ideal()
            .clone(),
    };

    let (x2, y2) = if g == target {
        (x, y)
    } else if field.is_rationals() {
        // ideals of ℤ: divide by the positive generator
        let n = g.norm();
        (x.div_int_exact(&n).unwrap(), y.div_int_exact(&n).unwrap())
    } else {
        // ξ = β/N(g) with (β) = target·ḡ satisfies ξ·g = target
        let beta = principal_generator(&target.mul(&g.conj()))?;
        let n = g.norm();
        let scale = |e: &AlgInt| (e * &beta).div_int_exact(&n).expect("ξ·g is integral");
        (scale(&x), scale(&y))
    };
    let gcd = Ideal::from_generators(field, &[x2.clone(), y2.clone()]).unwrap();
    debug_assert_eq!(gcd, target);

    let before = frey_j(
        f,
        &x1.num.mul_int(&(&l / &x1.den)),
        &y1.num.mul_int(&(&l / &y1.den)),
    );
    let after = frey_j(f, &x2, &y2);
    let j_preserved = match (before, after) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    if j_preserved == Some(false) {
        return Err(Error::IntegralityViolation(
            "rescaling changed the Frey j-invariant".into(),
        ));
    }
    Ok(NormalizedPair {
        x: x2,
        y: y2,
        gcd,
        gcd_class: class,
        j_preserved,
    })
}

fn frey_j(f: &BinaryCubic, x: &AlgInt, y: &AlgInt) -> Option<KFraction> {
    frey_invariants(f, x, y).ok()?.j
}

/// A generator of a principal ideal, found among elements of its norm.
pub fn principal_generator(ideal: &Ideal) -> Result<AlgInt> {
    let field = ideal.field();
    let n = ideal.norm();
    if field.is_rationals() {
        return Ok(field.int(n));
    }
    field
        .elements_of_norm(&n)?
        .into_iter()
        .find(|b| ideal.contains(b))
        .ok_or_else(|| Error::NotFound(format!("{ideal} is not principal")))
}
