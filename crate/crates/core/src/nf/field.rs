use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{exact_sqrt, is_squarefree_i64};
use crate::error::{Error, Result};

/// How the second basis element ω of the ring of integers is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OmegaRule {
    /// The field is ℚ; ω plays no role.
    Trivial,
    /// ω = √d (d ≡ 2, 3 mod 4).
    Sqrt,
    /// ω = (1 + √d)/2 (d ≡ 1 mod 4).
    HalfInteger,
}

/// ℚ or a quadratic field ℚ(√d). The rationals are stored as `d = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub const fn rationals() -> Self {
        QuadField { d: 1 }
    }

    pub fn new(d: i64) -> Result<Self> {
        if d == 1 || !is_squarefree_i64(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(QuadField { d })
    }

    pub fn is_rationals(&self) -> bool {
        self.d == 1
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// ℚ or an imaginary quadratic field: the cases where the unit group and
    /// the class group are finite and enumerable.
    pub fn is_desk_scale(&self) -> bool {
        self.is_rationals() || self.is_imaginary()
    }

    pub(crate) fn require_desk_scale(&self, what: &str) -> Result<()> {
        if self.is_desk_scale() {
            Ok(())
        } else {
            Err(Error::UnsupportedField(format!(
                "{what} is implemented for Q and imaginary quadratic fields only (d = {})",
                self.d
            )))
        }
    }

    /// The squarefree integer d; `None` for ℚ.
    pub fn d(&self) -> Option<i64> {
        (!self.is_rationals()).then_some(self.d)
    }

    pub fn degree(&self) -> u32 {
        if self.is_rationals() {
            1
        } else {
            2
        }
    }

    /// Field discriminant; 1 for ℚ.
    pub fn disc(&self) -> i64 {
        match self.omega_rule() {
            OmegaRule::Trivial => 1,
            OmegaRule::Sqrt => 4 * self.d,
            OmegaRule::HalfInteger => self.d,
        }
    }

    pub fn omega_rule(&self) -> OmegaRule {
        if self.is_rationals() {
            OmegaRule::Trivial
        } else if self.d.rem_euclid(4) == 1 {
            OmegaRule::HalfInteger
        } else {
            OmegaRule::Sqrt
        }
    }

    /// `(c1, c0)` with ω² + c1·ω + c0 = 0.
    pub fn omega_minpoly(&self) -> (i64, i64) {
        match self.omega_rule() {
            OmegaRule::Trivial => (0, 0),
            OmegaRule::Sqrt => (0, -self.d),
            OmegaRule::HalfInteger => (-1, -(self.d - 1) / 4),
        }
    }

    pub fn int<T: Into<BigInt>>(&self, n: T) -> AlgInt {
        AlgInt {
            a: n.into(),
            b: BigInt::zero(),
            field: *self,
        }
    }

    pub fn zero(&self) -> AlgInt {
        self.int(0)
    }

    pub fn one(&self) -> AlgInt {
        self.int(1)
    }

    /// The element a + b·ω. Over ℚ the ω-coordinate must be zero.
    pub fn elem<A: Into<BigInt>, B: Into<BigInt>>(&self, a: A, b: B) -> Result<AlgInt> {
        let b = b.into();
        if self.is_rationals() && !b.is_zero() {
            return Err(Error::InvalidElement(
                "rational elements have no omega coordinate".into(),
            ));
        }
        Ok(AlgInt {
            a: a.into(),
            b,
            field: *self,
        })
    }

    pub fn omega(&self) -> AlgInt {
        assert!(!self.is_rationals(), "Q has no omega");
        AlgInt {
            a: BigInt::zero(),
            b: BigInt::one(),
            field: *self,
        }
    }

    /// Torsion units: the whole unit group for ℚ and imaginary quadratic fields.
    pub fn units(&self) -> Vec<AlgInt> {
        let pm1 = vec![self.one(), -self.one()];
        match (self.omega_rule(), self.d) {
            (OmegaRule::Sqrt, -1) => {
                let i = self.omega();
                vec![self.one(), i.clone(), -self.one(), -i]
            }
            (OmegaRule::HalfInteger, -3) => {
                let w = self.omega();
                let mut out = vec![self.one()];
                for _ in 1..6 {
                    let next = out.last().unwrap() * &w;
                    out.push(next);
                }
                out
            }
            _ => pm1,
        }
    }

    /// All elements of 𝒪_K with the given norm (ℚ and imaginary fields only).
    pub fn elements_of_norm(&self, n: &BigInt) -> Result<Vec<AlgInt>> {
        self.require_desk_scale("norm equation enumeration")?;
        if self.is_rationals() {
            return Ok(vec![self.int(n.clone())]);
        }
        let mut out = Vec::new();
        if n.is_negative() {
            return Ok(out);
        }
        if n.is_zero() {
            out.push(self.zero());
            return Ok(out);
        }
        let abs_d = BigInt::from(-self.d);
        match self.omega_rule() {
            OmegaRule::Sqrt => {
                // a² + |d| b² = n
                let bmax = (n / &abs_d).sqrt();
                let mut b = -bmax.clone();
                while b <= bmax {
                    let rest = n - &abs_d * &b * &b;
                    if let Some(a) = exact_sqrt(&rest) {
                        out.push(self.elem(a.clone(), b.clone())?);
                        if !a.is_zero() {
                            out.push(self.elem(-a, b.clone())?);
                        }
                    }
                    b += 1;
                }
            }
            OmegaRule::HalfInteger => {
                // 4n = (2a + b)² + |d| b²
                let four_n: BigInt = n * 4;
                let bmax = (&four_n / &abs_d).sqrt();
                let mut b = -bmax.clone();
                while b <= bmax {
                    let rest = &four_n - &abs_d * &b * &b;
                    if let Some(s) = exact_sqrt(&rest) {
                        for t in [s.clone(), -s.clone()] {
                            let twice_a = &t - &b;
                            if twice_a.is_even() {
                                out.push(self.elem(twice_a / 2, b.clone())?);
                            }
                            if s.is_zero() {
                                break;
                            }
                        }
                    }
                    b += 1;
                }
            }
            OmegaRule::Trivial => unreachable!(),
        }
        Ok(out)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rationals() {
            write!(f, "Q")
        } else {
            write!(f, "Q(sqrt({}))", self.d)
        }
    }
}

/// An element a + b·ω of the ring of integers of a [`QuadField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgInt {
    a: BigInt,
    b: BigInt,
    field: QuadField,
}

impl AlgInt {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// max(|a|, |b|), the height used by searches.
    pub fn height(&self) -> BigInt {
        self.a.abs().max(self.b.abs())
    }

    /// Absolute norm. Over ℚ this is the element itself.
    pub fn norm(&self) -> BigInt {
        let (a, b) = (&self.a, &self.b);
        match self.field.omega_rule() {
            OmegaRule::Trivial => a.clone(),
            OmegaRule::Sqrt => a * a - BigInt::from(self.field.d) * b * b,
            OmegaRule::HalfInteger => a * a + a * b + BigInt::from((1 - self.field.d) / 4) * b * b,
        }
    }

    pub fn trace(&self) -> BigInt {
        match self.field.omega_rule() {
            OmegaRule::Trivial => self.a.clone(),
            OmegaRule::Sqrt => &self.a * 2,
            OmegaRule::HalfInteger => &self.a * 2 + &self.b,
        }
    }

    /// Galois conjugate (identity over ℚ).
    pub fn conj(&self) -> AlgInt {
        match self.field.omega_rule() {
            OmegaRule::Trivial => self.clone(),
            OmegaRule::Sqrt => AlgInt {
                a: self.a.clone(),
                b: -&self.b,
                field: self.field,
            },
            // ω̄ = 1 − ω
            OmegaRule::HalfInteger => AlgInt {
                a: &self.a + &self.b,
                b: -&self.b,
                field: self.field,
            },
        }
    }

    /// gcd of the two coordinates: the largest rational integer dividing x.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }

    pub fn mul_int(&self, n: &BigInt) -> AlgInt {
        AlgInt {
            a: &self.a * n,
            b: &self.b * n,
            field: self.field,
        }
    }

    pub fn div_int_exact(&self, n: &BigInt) -> Option<AlgInt> {
        if n.is_zero() {
            return None;
        }
        let (qa, ra) = self.a.div_rem(n);
        let (qb, rb) = self.b.div_rem(n);
        (ra.is_zero() && rb.is_zero()).then_some(AlgInt {
            a: qa,
            b: qb,
            field: self.field,
        })
    }

    /// `self / other` when the quotient lies in 𝒪_K.
    pub fn div_exact(&self, other: &AlgInt) -> Option<AlgInt> {
        if other.is_zero() {
            return None;
        }
        if self.field.is_rationals() {
            return self.div_int_exact(&other.a);
        }
        let n = other.norm();
        (self * &other.conj()).div_int_exact(&n)
    }

    pub fn divides(&self, other: &AlgInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    pub fn pow(&self, mut e: u32) -> AlgInt {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex embedding (real part, imaginary part), for bounds only.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::INFINITY);
        let b = self.b.to_f64().unwrap_or(f64::INFINITY);
        let d = self.field.d as f64;
        match self.field.omega_rule() {
            OmegaRule::Trivial => (a, 0.0),
            OmegaRule::Sqrt if d < 0.0 => (a, b * (-d).sqrt()),
            OmegaRule::Sqrt => (a + b * d.sqrt(), 0.0),
            OmegaRule::HalfInteger if d < 0.0 => (a + b / 2.0, b * (-d).sqrt() / 2.0),
            OmegaRule::HalfInteger => (a + b * (1.0 + d.sqrt()) / 2.0, 0.0),
        }
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    fn check_same(&self, other: &AlgInt) {
        assert_eq!(self.field, other.field, "{}", Error::FieldMismatch);
    }
}

impl fmt::Display for AlgInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let w = match self.field.omega_rule() {
            OmegaRule::Sqrt => format!("sqrt({})", self.field.d),
            _ => "w".to_string(),
        };
        let bpart = if self.b.is_one() {
            w
        } else if self.b == -BigInt::one() {
            format!("-{w}")
        } else {
            format!("{}*{w}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if bpart.starts_with('-') {
            write!(f, "{}{bpart}", self.a)
        } else {
            write!(f, "{}+{bpart}", self.a)
        }
    }
}

impl Add<&AlgInt> for &AlgInt {
    type Output = AlgInt;
    fn add(self, rhs: &AlgInt) -> AlgInt {
        self.check_same(rhs);
        AlgInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            field: self.field,
        }
    }
}

impl Sub<&AlgInt> for &AlgInt {
    type Output = AlgInt;
    fn sub(self, rhs: &AlgInt) -> AlgInt {
        self.check_same(rhs);
        AlgInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            field: self.field,
        }
    }
}

impl Mul<&AlgInt> for &AlgInt {
    type Output = AlgInt;
    fn mul(self, rhs: &AlgInt) -> AlgInt {
        self.check_same(rhs);
        let (a1, b1, a2, b2) = (&self.a, &self.b, &rhs.a, &rhs.b);
        let bb = b1 * b2;
        let cross = a1 * b2 + a2 * b1;
        let (a, b) = match self.field.omega_rule() {
            OmegaRule::Trivial => (a1 * a2, BigInt::zero()),
            OmegaRule::Sqrt => (a1 * a2 + BigInt::from(self.field.d) * bb, cross),
            // ω² = ω + (d − 1)/4
            OmegaRule::HalfInteger => (
                a1 * a2 + BigInt::from((self.field.d - 1) / 4) * &bb,
                cross + bb,
            ),
        };
        AlgInt {
            a,
            b,
            field: self.field,
        }
    }
}

impl Neg for &AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        AlgInt {
            a: -&self.a,
            b: -&self.b,
            field: self.field,
        }
    }
}

impl Neg for AlgInt {
    type Output = AlgInt;
    fn neg(self) -> AlgInt {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<AlgInt> for AlgInt {
            type Output = AlgInt;
            fn $m(self, rhs: AlgInt) -> AlgInt { (&self).$m(&rhs) }
        }
        impl $tr<&AlgInt> for AlgInt {
            type Output = AlgInt;
            fn $m(self, rhs: &AlgInt) -> AlgInt { (&self).$m(rhs) }
        }
        impl $tr<AlgInt> for &AlgInt {
            type Output = AlgInt;
            fn $m(self, rhs: AlgInt) -> AlgInt { self.$m(&rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);
