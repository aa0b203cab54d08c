//! Class groups of imaginary quadratic fields through reduced positive
//! definite binary quadratic forms of discriminant disc(K).
//!
//! The ideal `a·ℤ + ((−b + √D)/2)·ℤ` corresponds to the form `(a, b, c)`;
//! this correspondence is a group isomorphism between the class group and the
//! form class group under composition.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{OmegaRule, QuadField};
use super::ideal::{primes_up_to_norm, Ideal, PrimeIdeal};
use crate::error::{Error, Result};

/// The form a·x² + b·xy + c·y².
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new<T: Into<BigInt>>(a: T, b: T, c: T) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        b.abs() <= *a && a <= c && !(b.is_negative() && (b.abs() == *a || a == c))
    }

    /// Properly equivalent reduced form (positive definite input).
    pub fn reduce(&self) -> QuadForm {
        let (mut a, mut b, mut c) = (self.a.clone(), self.b.clone(), self.c.clone());
        loop {
            // normalize b into (−a, a]
            if !(b > -a.clone() && b <= a) {
                let two_a = &a * 2;
                let r = (&a - &b).div_floor(&two_a);
                let b_new = &b + &two_a * &r;
                c = (&b_new * &b_new - (&b * &b - BigInt::from(4) * &a * &c)) / (&a * 4);
                b = b_new;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b.is_negative() {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &QuadForm) -> QuadForm {
        let disc = self.discriminant();
        debug_assert_eq!(disc, other.discriminant());
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let (a1, b1) = (&f1.a, &f1.b);
        let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
        let s: BigInt = (b1 + b2) / 2;
        let n = b2 - &s;
        let (y1, d) = if (a2 % a1).is_zero() {
            (BigInt::zero(), a1.clone())
        } else {
            let e = a2.extended_gcd(a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if (&s % &d).is_zero() {
            (BigInt::zero(), -BigInt::one(), d.clone())
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / &d1;
        let v2 = a2 / &d1;
        let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
        let b3 = b2 + &v2 * &r * 2;
        let a3 = &v1 * &v2;
        let c3 = (&b3 * &b3 - &disc) / (&a3 * 4);
        QuadForm {
            a: a3,
            b: b3,
            c: c3,
        }
        .reduce()
    }

    pub fn inverse(&self) -> QuadForm {
        QuadForm {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
        .reduce()
    }
}

/// All reduced forms of a negative discriminant, principal form first.
pub fn reduced_forms(disc: i64) -> Vec<QuadForm> {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1);
    let n = -disc;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadForm::new(a, b, c);
            if c >= a && f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

fn form_of_ideal(ideal: &Ideal) -> QuadForm {
    let field = ideal.field();
    let [n00, n01, n11] = ideal.hnf();
    let a: BigInt = n00 / n11;
    let b0: BigInt = n01 / n11;
    let b: BigInt = match field.omega_rule() {
        OmegaRule::Sqrt => &b0 * -2,
        OmegaRule::HalfInteger => &b0 * -2 - 1,
        OmegaRule::Trivial => unreachable!(),
    };
    let c = (&b * &b - BigInt::from(field.disc())) / (&a * 4);
    QuadForm { a, b, c }
}

fn ideal_of_form(field: QuadField, f: &QuadForm) -> Ideal {
    // (−b + √D)/2 = −b/2 + √d, or (−b − 1)/2 + ω
    let b0: BigInt = match field.omega_rule() {
        OmegaRule::Sqrt => -&f.b / 2,
        OmegaRule::HalfInteger => (-&f.b - 1) / 2,
        OmegaRule::Trivial => unreachable!(),
    };
    Ideal::from_hnf(field, f.a.clone(), b0.mod_floor(&f.a), BigInt::one())
        .expect("forms of the field discriminant give ideals")
}

#[derive(Clone, Debug)]
pub struct IdealClassGroup {
    field: QuadField,
    forms: Vec<QuadForm>,
    representatives: Vec<Ideal>,
    table: Vec<Vec<usize>>,
    index: HashMap<QuadForm, usize>,
}

impl IdealClassGroup {
    pub fn new(field: QuadField) -> Result<Self> {
        field.require_desk_scale("class group computation")?;
        if field.is_rationals() {
            return Ok(IdealClassGroup {
                field,
                forms: Vec::new(),
                representatives: vec![Ideal::unit(field)],
                table: vec![vec![0]],
                index: HashMap::new(),
            });
        }
        let forms = reduced_forms(field.disc());
        let index: HashMap<QuadForm, usize> = forms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let table = forms
            .iter()
            .map(|f| forms.iter().map(|g| index[&f.compose(g)]).collect())
            .collect();
        let representatives = forms.iter().map(|f| ideal_of_form(field, f)).collect();
        Ok(IdealClassGroup {
            field,
            forms,
            representatives,
            table,
            index,
        })
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn class_number(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Ideal] {
        &self.representatives
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.class_number())
            .find(|&j| self.table[i][j] == 0)
            .expect("group table has inverses")
    }

    /// Class index of a nonzero integral ideal; 0 is the principal class.
    pub fn class_of(&self, ideal: &Ideal) -> usize {
        assert_eq!(ideal.field(), self.field);
        if self.field.is_rationals() {
            return 0;
        }
        self.index[&form_of_ideal(ideal).reduce()]
    }

    /// Smallest prime (in canonical order) of norm ≤ `bound` lying in class
    /// `class`, outside `avoid`, and not above 2 when `odd_only`.
    pub fn smallest_prime_in_class(
        &self,
        class: usize,
        avoid: &[PrimeIdeal],
        bound: u64,
        odd_only: bool,
    ) -> Result<PrimeIdeal> {
        if bound == 0 {
            return Err(Error::Malformed("norm bound must be positive".into()));
        }
        primes_up_to_norm(self.field, bound)
            .into_iter()
            .filter(|p| !(odd_only && p.p() == 2))
            .filter(|p| !avoid.contains(p))
            .find(|p| self.class_of(p.ideal()) == class)
            .ok_or_else(|| {
                Error::NotFound(format!(
                    "no prime of norm <= {bound} in class {class} of {}",
                    self.field
                ))
            })
    }
}
