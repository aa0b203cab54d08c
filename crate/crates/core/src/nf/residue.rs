//! Residue fields 𝒪_K/𝔓: 𝔽_p, or 𝔽_p[t]/(m(t)) with m the minimal polynomial
//! of ω when 𝔓 is inert.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::{mod_u64, mul_mod, pow_mod};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    p: u64,
    degree: u8,
    // t² + c1·t + c0 when degree = 2
    c1: u64,
    c0: u64,
}

/// An element c0 + c1·t of a residue field (c1 = 0 in degree 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    pub c0: u64,
    pub c1: u64,
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}*t", self.c0, self.c1)
        }
    }
}

impl ResidueField {
    pub fn prime_field(p: u64) -> Self {
        ResidueField {
            p,
            degree: 1,
            c1: 0,
            c0: 0,
        }
    }

    /// 𝔽_p[t]/(t² + c1·t + c0); the caller guarantees irreducibility.
    pub fn quadratic(p: u64, c1: u64, c0: u64) -> Self {
        ResidueField {
            p,
            degree: 2,
            c1: c1 % p,
            c0: c0 % p,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    /// `(c1, c0)` of the defining modulus t² + c1·t + c0, degree 2 only.
    pub fn modulus(&self) -> Option<(u64, u64)> {
        (self.degree == 2).then_some((self.c1, self.c0))
    }

    pub fn zero(&self) -> Fq {
        Fq { c0: 0, c1: 0 }
    }

    pub fn one(&self) -> Fq {
        Fq {
            c0: 1 % self.p,
            c1: 0,
        }
    }

    pub fn from_i64(&self, n: i64) -> Fq {
        Fq {
            c0: n.rem_euclid(self.p as i64) as u64,
            c1: 0,
        }
    }

    pub fn from_big(&self, n: &BigInt) -> Fq {
        Fq {
            c0: mod_u64(n, self.p),
            c1: 0,
        }
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Fq {
        debug_assert!(self.degree == 2 || c1 == 0);
        Fq {
            c0: c0 % self.p,
            c1: c1 % self.p,
        }
    }

    /// The class of t (degree 2 only).
    pub fn generator(&self) -> Fq {
        assert_eq!(self.degree, 2);
        Fq { c0: 0, c1: 1 }
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p as u128;
        Fq {
            c0: ((x.c0 as u128 + y.c0 as u128) % p) as u64,
            c1: ((x.c1 as u128 + y.c1 as u128) % p) as u64,
        }
    }

    pub fn neg(&self, x: Fq) -> Fq {
        Fq {
            c0: (self.p - x.c0) % self.p,
            c1: (self.p - x.c1) % self.p,
        }
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        if self.degree == 1 {
            return Fq {
                c0: mul_mod(x.c0, y.c0, p),
                c1: 0,
            };
        }
        let lo = mul_mod(x.c0, y.c0, p);
        let mid = (mul_mod(x.c0, y.c1, p) as u128 + mul_mod(x.c1, y.c0, p) as u128) % p as u128;
        let hi = mul_mod(x.c1, y.c1, p);
        // t² = −c1·t − c0
        let c0 = (lo as u128 + (p - mul_mod(hi, self.c0, p)) as u128) % p as u128;
        let c1 = (mid + (p - mul_mod(hi, self.c1, p)) as u128) % p as u128;
        Fq {
            c0: c0 as u64,
            c1: c1 as u64,
        }
    }

    pub fn square(&self, x: Fq) -> Fq {
        self.mul(x, x)
    }

    pub fn pow(&self, mut x: Fq, mut e: u128) -> Fq {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: Fq) -> Option<Fq> {
        if x == self.zero() {
            return None;
        }
        Some(self.pow(x, self.size() - 2))
    }

    /// Norm down to 𝔽_p.
    pub fn norm(&self, x: Fq) -> u64 {
        if self.degree == 1 {
            return x.c0;
        }
        let p = self.p;
        // (c0 + c1 t)(c0 + c1 t̄) with t + t̄ = −c1', t·t̄ = c0'
        let a = mul_mod(x.c0, x.c0, p) as u128;
        let b = mul_mod(mul_mod(x.c0, x.c1, p), self.c1, p) as u128;
        let c = mul_mod(mul_mod(x.c1, x.c1, p), self.c0, p) as u128;
        ((a + (p as u128 - b) + c) % p as u128) as u64
    }

    /// Quadratic character: 0 on zero, 1 on nonzero squares, −1 otherwise.
    /// Only meaningful in odd characteristic.
    pub fn chi(&self, x: Fq) -> i32 {
        let n = self.norm(x);
        if n == 0 {
            return 0;
        }
        if pow_mod(n, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        let p = self.p;
        let hi = if self.degree == 2 { p } else { 1 };
        (0..hi).flat_map(move |c1| (0..p).map(move |c0| Fq { c0, c1 }))
    }

    /// Evaluate a polynomial given by coefficients from the leading term down.
    pub fn eval_poly(&self, coeffs: &[Fq], x: Fq) -> Fq {
        coeffs
            .iter()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// Quadratic character lookup for 𝔽_p, extended to 𝔽_{p²} through the norm.
pub(crate) struct SquareTable {
    field: ResidueField,
    is_square: Vec<bool>,
}

impl SquareTable {
    pub(crate) fn new(field: ResidueField) -> Self {
        let p = field.characteristic();
        let mut is_square = vec![false; p as usize];
        for x in 0..p {
            is_square[mul_mod(x, x, p) as usize] = true;
        }
        SquareTable { field, is_square }
    }

    pub(crate) fn chi(&self, x: Fq) -> i32 {
        let n = self.field.norm(x);
        if n == 0 {
            0
        } else if self.is_square[n as usize] {
            1
        } else {
            -1
        }
    }
}
