//! Weierstrass curves Y² = X³ + a2·X² + a4·X + a6 over 𝒪_K, the Frey curve
//! attached to a binary cubic, invariants, local reduction and point counts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cubic::{BinaryCubic, RESIDUE_SCAN_CAP};
use crate::error::{Error, Result};
use crate::nf::residue::SquareTable;
use crate::nf::{AlgInt, PrimeIdeal, QuadField};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a2: AlgInt,
    pub a4: AlgInt,
    pub a6: AlgInt,
}

/// An element of K written as num/den with den a positive rational integer
/// coprime to the content of num. The representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KFraction {
    pub num: AlgInt,
    pub den: BigInt,
}

impl KFraction {
    /// num/den for nonzero den.
    pub fn new(num: AlgInt, den: &AlgInt) -> Option<KFraction> {
        if den.is_zero() {
            return None;
        }
        // num/den = num·den̄ / N(den) in a quadratic field
        let (mut n, mut d) = if den.field().is_rationals() {
            (num, den.a().clone())
        } else {
            (&num * &den.conj(), den.norm())
        };
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        let g = n.content().gcd(&d);
        let g = if g.is_zero() { d.clone() } else { g };
        Some(KFraction {
            num: n.div_int_exact(&g).unwrap(),
            den: d / g,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// v_𝔓(num) − v_𝔓(den); `None` for zero.
    pub fn valuation(&self, p: &PrimeIdeal) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        let vn = p.valuation(&self.num).ok()? as i64;
        let vd = p.valuation(&self.num.field().int(self.den.clone())).ok()? as i64;
        Some(vn - vd)
    }
}

impl fmt::Display for KFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.is_rational() {
            write!(f, "{}/{}", self.num, self.den)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub c4: AlgInt,
    pub c6: AlgInt,
    pub delta: AlgInt,
    /// c4³/Δ; `None` when Δ = 0.
    pub j: Option<KFraction>,
}

impl CurveInvariants {
    fn from_c4_c6_delta(c4: AlgInt, c6: AlgInt, delta: AlgInt) -> Self {
        let j = KFraction::new(c4.pow(3), &delta);
        CurveInvariants { c4, c6, delta, j }
    }

    pub fn is_singular(&self) -> bool {
        self.delta.is_zero()
    }

    /// c4³ − c6² = 1728·Δ.
    pub fn satisfies_identity(&self) -> bool {
        &self.c4.pow(3) - &(&self.c6 * &self.c6) == self.delta.mul_int(&BigInt::from(1728))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReductionType {
    Good,
    Multiplicative,
    Additive,
    UndeterminedSmallPrime,
}

impl ReductionType {
    pub fn is_semistable(self) -> bool {
        matches!(self, ReductionType::Good | ReductionType::Multiplicative)
    }

    pub fn tag(self) -> &'static str {
        match self {
            ReductionType::Good => "GOOD",
            ReductionType::Multiplicative => "MULTIPLICATIVE",
            ReductionType::Additive => "ADDITIVE",
            ReductionType::UndeterminedSmallPrime => "UNDETERMINED_SMALL_PRIME",
        }
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl WeierstrassCurve {
    pub fn new(a2: AlgInt, a4: AlgInt, a6: AlgInt) -> Result<Self> {
        if a2.field() != a4.field() || a2.field() != a6.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(WeierstrassCurve { a2, a4, a6 })
    }

    pub fn from_ints(field: QuadField, a2: i64, a4: i64, a6: i64) -> Self {
        WeierstrassCurve {
            a2: field.int(a2),
            a4: field.int(a4),
            a6: field.int(a6),
        }
    }

    pub fn field(&self) -> QuadField {
        self.a2.field()
    }

    /// Invariants by the standard b₂, b₄, b₆, b₈ formulas with a1 = a3 = 0.
    pub fn invariants(&self) -> CurveInvariants {
        let k = |n: i64| self.field().int(n);
        let b2 = &k(4) * &self.a2;
        let b4 = &k(2) * &self.a4;
        let b6 = &k(4) * &self.a6;
        let b8 = &(&k(4) * &(&self.a2 * &self.a6)) - &(&self.a4 * &self.a4);
        let c4 = &(&b2 * &b2) - &(&k(24) * &b4);
        let c6 = &(&(-&b2.pow(3)) + &(&k(36) * &(&b2 * &b4))) - &(&k(216) * &b6);
        let delta = &(&(&(-&(&(&b2 * &b2) * &b8)) - &(&k(8) * &b4.pow(3)))
            - &(&k(27) * &(&b6 * &b6)))
            + &(&k(9) * &(&(&b2 * &b4) * &b6));
        CurveInvariants::from_c4_c6_delta(c4, c6, delta)
    }

    /// Local reduction type at 𝔓.
    ///
    /// Away from 2 and 3 the model is made minimal by removing the largest
    /// k with u⁴ | c4, u⁶ | c6, u¹² | Δ. Over 2 and 3 only the cases that
    /// need no minimal model are decided: v(Δ) = 0 (good) and
    /// v(Δ) > 0 with v(c4) = 0 (multiplicative).
    pub fn reduction_type(&self, p: &PrimeIdeal) -> Result<ReductionType> {
        let inv = self.invariants();
        let local = LocalData::new(&inv, p)?;
        Ok(local.reduction_type(p))
    }

    /// #E(𝒪_K/𝔓), including the point at infinity.
    pub fn point_count(&self, p: &PrimeIdeal) -> Result<u128> {
        let size = p.norm();
        if size > RESIDUE_SCAN_CAP {
            return Err(Error::CapExceeded {
                size,
                cap: RESIDUE_SCAN_CAP,
            });
        }
        let inv = self.invariants();
        let local = LocalData::new(&inv, p)?;
        let rf = p.residue_field();
        match local.reduction_type(p) {
            ReductionType::Good => {}
            ReductionType::UndeterminedSmallPrime => return Err(Error::UndeterminedSmallPrime),
            _ => return Err(Error::BadReduction),
        }
        // Coefficients of y² = x³ + c2·x² + c1·x + c0 over the residue field.
        let (c2, c1, c0) = if p.p() >= 5 {
            // minimal short model y² = x³ − 27c4'x − 54c6'
            let c4 = p.divide_by_uniformizer_power(&inv.c4, 4 * local.k).unwrap();
            let c6 = p.divide_by_uniformizer_power(&inv.c6, 6 * local.k).unwrap();
            (
                rf.zero(),
                rf.neg(rf.mul(rf.from_i64(27), p.reduce(&c4))),
                rf.neg(rf.mul(rf.from_i64(54), p.reduce(&c6))),
            )
        } else if p.p() == 3 {
            (p.reduce(&self.a2), p.reduce(&self.a4), p.reduce(&self.a6))
        } else {
            // with a1 = a3 = 0 the discriminant is divisible by 16
            return Err(Error::UndeterminedSmallPrime);
        };
        let chi = SquareTable::new(rf);
        let mut count: u128 = 1;
        for x in rf.elements() {
            let rhs = rf.eval_poly(&[rf.one(), c2, c1, c0], x);
            count += (1 + chi.chi(rhs)) as u128;
        }
        Ok(count)
    }

    /// a_𝔓 = N𝔓 + 1 − #E(𝒪_K/𝔓).
    pub fn trace_a(&self, p: &PrimeIdeal) -> Result<i128> {
        Ok(p.norm() as i128 + 1 - self.point_count(p)? as i128)
    }

    /// True iff X³ + a2X² + a4X + a6 has no root in K.
    pub fn two_torsion_irreducible(&self) -> Result<bool> {
        let f = BinaryCubic::new([
            self.field().one(),
            self.a2.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ])?;
        f.is_irreducible()
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |c: &AlgInt, mono: &str| -> Option<String> {
            (!c.is_zero()).then(|| {
                let body = if c.is_rational() {
                    c.to_string()
                } else {
                    format!("({c})")
                };
                if mono.is_empty() {
                    body
                } else {
                    format!("{body}*{mono}")
                }
            })
        };
        let mut rhs = vec!["X^3".to_string()];
        rhs.extend(part(&self.a2, "X^2"));
        rhs.extend(part(&self.a4, "X"));
        rhs.extend(part(&self.a6, ""));
        write!(f, "Y^2 = {}", rhs.join(" + "))
    }
}

struct LocalData {
    v_c4: Option<u32>,
    v_delta: u32,
    k: u32,
}

impl LocalData {
    fn new(inv: &CurveInvariants, p: &PrimeIdeal) -> Result<Self> {
        if inv.is_singular() {
            return Err(Error::Singular("discriminant is zero".into()));
        }
        let v = |x: &AlgInt| (!x.is_zero()).then(|| p.valuation(x).unwrap());
        let v_c4 = v(&inv.c4);
        let v_c6 = v(&inv.c6);
        let v_delta = v(&inv.delta).unwrap();
        let k = [v_c4.map(|e| e / 4), v_c6.map(|e| e / 6), Some(v_delta / 12)]
            .into_iter()
            .flatten()
            .min()
            .unwrap();
        Ok(LocalData { v_c4, v_delta, k })
    }

    fn reduction_type(&self, p: &PrimeIdeal) -> ReductionType {
        if p.p() < 5 {
            return if self.v_delta == 0 {
                ReductionType::Good
            } else if self.v_c4 == Some(0) {
                ReductionType::Multiplicative
            } else {
                ReductionType::UndeterminedSmallPrime
            };
        }
        if self.v_delta == 12 * self.k {
            ReductionType::Good
        } else if self.v_c4 == Some(4 * self.k) {
            ReductionType::Multiplicative
        } else {
            ReductionType::Additive
        }
    }
}

/// T(x, y) = α₁x − α₂y.
pub fn frey_t(f: &BinaryCubic, x: &AlgInt, y: &AlgInt) -> AlgInt {
    &(f.coeff(1) * x) - &(f.coeff(2) * y)
}

/// The Frey curve Y² = X³ + T·X² + (T² + H)/3·X + (T³ + 3TH + G)/27.
pub fn frey_curve(f: &BinaryCubic, x: &AlgInt, y: &AlgInt) -> Result<WeierstrassCurve> {
    check_frey_input(f, x, y)?;
    let field = f.field();
    let t = frey_t(f, x, y);
    let h = f.hessian().evaluate(x, y);
    let g = f.covariant_g().evaluate(x, y);
    let a4 = (&(&t * &t) + &h)
        .div_int_exact(&BigInt::from(3))
        .ok_or_else(|| Error::IntegralityViolation("(T^2 + H)/3 is not integral".into()))?;
    let num6 = &(&(&t.pow(3) + &(&field.int(3) * &(&t * &h))) + &g);
    let a6 = num6
        .div_int_exact(&BigInt::from(27))
        .ok_or_else(|| Error::IntegralityViolation("(T^3 + 3TH + G)/27 is not integral".into()))?;
    Ok(WeierstrassCurve { a2: t, a4, a6 })
}

/// Invariants of the Frey curve by the closed forms
/// c4 = −2⁴H, c6 = −2⁵G, Δ = 2⁴Δ_F·F², j = −2⁸H³/(Δ_F·F²).
pub fn frey_invariants(f: &BinaryCubic, x: &AlgInt, y: &AlgInt) -> Result<CurveInvariants> {
    check_frey_input(f, x, y)?;
    let field = f.field();
    let h = f.hessian().evaluate(x, y);
    let g = f.covariant_g().evaluate(x, y);
    let fv = f.evaluate(x, y);
    let df_f2 = &f.discriminant() * &(&fv * &fv);
    let c4 = &field.int(-16) * &h;
    let c6 = &field.int(-32) * &g;
    let delta = &field.int(16) * &df_f2;
    let j = KFraction::new(&field.int(-256) * &h.pow(3), &df_f2);
    Ok(CurveInvariants { c4, c6, delta, j })
}

fn check_frey_input(f: &BinaryCubic, x: &AlgInt, y: &AlgInt) -> Result<()> {
    if x.field() != f.field() || y.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    if f.discriminant().is_zero() {
        return Err(Error::Singular("the form has zero discriminant".into()));
    }
    if f.evaluate(x, y).is_zero() {
        return Err(Error::Singular("F(x, y) = 0".into()));
    }
    Ok(())
}
