//! Integral ideals in Hermite normal form, prime ideals and valuations.
//!
//! An ideal is stored as the upper-triangular basis matrix
//! `[[n00, n01], [0, n11]]` with respect to `{1, ω}`: its ℤ-basis is
//! `{n00, n01 + n11·ω}`. Over ℚ the ideal `(n)` is `[n, 0, 1]`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{AlgInt, QuadField};
use super::residue::{Fq, ResidueField};
use crate::arith::{factor_integer, int_valuation, mod_u64, mul_mod, pow_mod, sqrt_mod};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    field: QuadField,
    n00: BigInt,
    n01: BigInt,
    n11: BigInt,
}

impl Ideal {
    /// HNF of the ℤ-module spanned by the given coordinate vectors.
    /// Returns `None` when the span does not have full rank.
    fn from_lattice(field: QuadField, vectors: Vec<(BigInt, BigInt)>) -> Option<Ideal> {
        if field.is_rationals() {
            let g = vectors.iter().fold(BigInt::zero(), |g, (a, _)| g.gcd(a));
            return (!g.is_zero()).then(|| Ideal {
                field,
                n00: g,
                n01: BigInt::zero(),
                n11: BigInt::one(),
            });
        }
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut n00 = BigInt::zero();
        for (a, b) in vectors {
            if b.is_zero() {
                n00 = n00.gcd(&a);
                continue;
            }
            match pivot.take() {
                None => pivot = Some((a, b)),
                Some((pa, pb)) => {
                    let ext = pb.extended_gcd(&b);
                    let g = ext.gcd;
                    let new_a = &ext.x * &pa + &ext.y * &a;
                    // (b/g)·pivot − (pb/g)·v has vanishing ω-coordinate
                    let killed = (&b / &g) * &pa - (&pb / &g) * &a;
                    n00 = n00.gcd(&killed);
                    pivot = Some((new_a, g));
                }
            }
        }
        let (pa, pb) = pivot?;
        if n00.is_zero() {
            return None;
        }
        let (pa, pb) = if pb.is_negative() {
            (-pa, -pb)
        } else {
            (pa, pb)
        };
        Some(Ideal {
            field,
            n01: pa.mod_floor(&n00),
            n00,
            n11: pb,
        })
    }

    /// Ideal generated over 𝒪_K by the given elements; `None` if all vanish.
    pub fn from_generators(field: QuadField, gens: &[AlgInt]) -> Option<Ideal> {
        let mut vectors = Vec::with_capacity(2 * gens.len());
        for g in gens {
            assert_eq!(g.field(), field);
            vectors.push((g.a().clone(), g.b().clone()));
            if !field.is_rationals() {
                let gw = g * &field.omega();
                vectors.push((gw.a().clone(), gw.b().clone()));
            }
        }
        Ideal::from_lattice(field, vectors)
    }

    pub fn principal(x: &AlgInt) -> Option<Ideal> {
        Ideal::from_generators(x.field(), std::slice::from_ref(x))
    }

    pub fn unit(field: QuadField) -> Ideal {
        Ideal::principal(&field.one()).unwrap()
    }

    /// Build from an HNF triple, validating the HNF conditions.
    pub fn from_hnf(field: QuadField, n00: BigInt, n01: BigInt, n11: BigInt) -> Result<Ideal> {
        let bad = |why: &str| {
            Err(Error::Malformed(format!(
                "HNF [{n00}, {n01}, {n11}]: {why}"
            )))
        };
        if !n00.is_positive() || !n11.is_positive() {
            return bad("diagonal entries must be positive");
        }
        if n01.is_negative() || n01 >= n00 {
            return bad("need 0 <= n01 < n00");
        }
        if field.is_rationals() && !(n01.is_zero() && n11.is_one()) {
            return bad("ideals of Q are [n, 0, 1]");
        }
        if !(&n00 % &n11).is_zero() || !(&n01 % &n11).is_zero() {
            return bad("n11 must divide n00 and n01");
        }
        let candidate = Ideal {
            field,
            n00: n00.clone(),
            n01: n01.clone(),
            n11: n11.clone(),
        };
        // Closure under multiplication by ω.
        if !field.is_rationals() {
            let w = field.omega();
            for g in candidate.basis() {
                if !candidate.contains(&(&g * &w)) {
                    return bad("lattice is not an ideal");
                }
            }
        }
        Ok(candidate)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn hnf(&self) -> [&BigInt; 3] {
        [&self.n00, &self.n01, &self.n11]
    }

    pub fn norm(&self) -> BigInt {
        &self.n00 * &self.n11
    }

    pub fn is_unit(&self) -> bool {
        self.n00.is_one() && self.n11.is_one()
    }

    /// ℤ-basis `{n00, n01 + n11·ω}` (just `{n00}` over ℚ).
    pub fn basis(&self) -> Vec<AlgInt> {
        let f = self.field;
        if f.is_rationals() {
            return vec![f.int(self.n00.clone())];
        }
        vec![
            f.int(self.n00.clone()),
            f.elem(self.n01.clone(), self.n11.clone()).unwrap(),
        ]
    }

    pub fn contains(&self, x: &AlgInt) -> bool {
        if self.field.is_rationals() {
            return (x.a() % &self.n00).is_zero();
        }
        let (k, r) = x.b().div_rem(&self.n11);
        r.is_zero() && ((x.a() - &k * &self.n01) % &self.n00).is_zero()
    }

    /// `self ⊆ other`, i.e. `other | self`.
    pub fn is_contained_in(&self, other: &Ideal) -> bool {
        self.basis().iter().all(|g| other.contains(g))
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        let mut vectors = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                let z = &x * &y;
                vectors.push((z.a().clone(), z.b().clone()));
            }
        }
        Ideal::from_lattice(self.field, vectors).expect("product of nonzero ideals")
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal::unit(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum of ideals, i.e. their gcd.
    pub fn add(&self, other: &Ideal) -> Ideal {
        let mut gens = self.basis();
        gens.extend(other.basis());
        Ideal::from_generators(self.field, &gens).unwrap()
    }

    pub fn conj(&self) -> Ideal {
        let gens: Vec<AlgInt> = self.basis().iter().map(AlgInt::conj).collect();
        Ideal::from_generators(self.field, &gens).unwrap()
    }

    /// `self / n` for a rational integer n dividing the ideal.
    pub fn div_int(&self, n: &BigInt) -> Option<Ideal> {
        let gens: Option<Vec<AlgInt>> = self.basis().iter().map(|g| g.div_int_exact(n)).collect();
        Ideal::from_generators(self.field, &gens?)
    }

    /// `self · other⁻¹` when `other | self`, using 𝔞·𝔞̄ = (N𝔞).
    pub fn div(&self, other: &Ideal) -> Option<Ideal> {
        if !self.is_contained_in(other) {
            return None;
        }
        if self.field.is_rationals() {
            return Some(Ideal {
                field: self.field,
                n00: &self.n00 / &other.n00,
                n01: BigInt::zero(),
                n11: BigInt::one(),
            });
        }
        self.mul(&other.conj()).div_int(&other.norm())
    }

    /// Canonical ordering key: (norm, HNF entries).
    fn sort_key(&self) -> (BigInt, &BigInt, &BigInt, &BigInt) {
        (self.norm(), &self.n00, &self.n01, &self.n11)
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ideal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.n00, self.n01, self.n11)
    }
}

/// A nonzero prime ideal of 𝒪_K.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    p: u64,
    residue_degree: u8,
    ramified: bool,
    hnf: Ideal,
    // ω ↦ root under 𝒪_K → 𝒪_K/𝔓 for degree-one primes
    root: Option<u64>,
    // v_𝔓(t) = 1 and t is a unit at the other primes above p
    uniformizer: AlgInt,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.hnf == other.hnf
    }
}

impl Eq for PrimeIdeal {}

impl std::hash::Hash for PrimeIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.hnf.hash(state)
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    /// Norm first, then the rational prime, then HNF entries.
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then(self.p.cmp(&other.p))
            .then_with(|| self.hnf.cmp(&other.hnf))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hnf)
    }
}

impl PrimeIdeal {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u8 {
        self.residue_degree
    }

    pub fn ramified(&self) -> bool {
        self.ramified
    }

    pub fn ideal(&self) -> &Ideal {
        &self.hnf
    }

    pub fn field(&self) -> QuadField {
        self.hnf.field
    }

    pub fn norm(&self) -> u128 {
        (self.p as u128).pow(self.residue_degree as u32)
    }

    /// Ramification index e.
    pub fn ramification_index(&self) -> u32 {
        if self.ramified {
            2
        } else {
            1
        }
    }

    pub fn lies_over(&self, p: u64) -> bool {
        self.p == p
    }

    pub fn residue_field(&self) -> ResidueField {
        if self.residue_degree == 1 {
            ResidueField::prime_field(self.p)
        } else {
            let (c1, c0) = self.field().omega_minpoly();
            ResidueField::quadratic(
                self.p,
                c1.rem_euclid(self.p as i64) as u64,
                c0.rem_euclid(self.p as i64) as u64,
            )
        }
    }

    /// Image of x in 𝒪_K/𝔓; a ring homomorphism.
    pub fn reduce(&self, x: &AlgInt) -> Fq {
        let rf = self.residue_field();
        let a = mod_u64(x.a(), self.p);
        let b = mod_u64(x.b(), self.p);
        match self.root {
            Some(r) => rf.elem(
                ((a as u128 + mul_mod(b, r, self.p) as u128) % self.p as u128) as u64,
                0,
            ),
            None if self.residue_degree == 1 => rf.elem(a, 0),
            None => rf.elem(a, b),
        }
    }

    pub fn divides(&self, x: &AlgInt) -> bool {
        self.reduce(x) == Fq { c0: 0, c1: 0 }
    }

    /// Exact 𝔓-adic valuation of a nonzero element.
    pub fn valuation(&self, x: &AlgInt) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::ZeroValuation);
        }
        let field = self.field();
        if field.is_rationals() {
            return Ok(int_valuation(x.a(), self.p));
        }
        if self.residue_degree == 2 {
            // inert: 𝔓 = (p), so v is the p-adic content valuation
            let va = (!x.a().is_zero()).then(|| int_valuation(x.a(), self.p));
            let vb = (!x.b().is_zero()).then(|| int_valuation(x.b(), self.p));
            return Ok(va.into_iter().chain(vb).min().unwrap());
        }
        let mut y = x.clone();
        let mut v = 0;
        while self.divides(&y) {
            y = self.shift_down(&y);
            v += 1;
        }
        Ok(v)
    }

    /// One step of division by a local uniformizer π at 𝔓: an element of 𝒪_K
    /// congruent to x/π in the 𝔓-adic sense, for x ∈ 𝔓. Dividing several
    /// quantities by the same power yields consistent rescalings.
    fn shift_down(&self, x: &AlgInt) -> AlgInt {
        let p = BigInt::from(self.p);
        if self.root.is_none() {
            // π = p for inert primes and over ℚ
            return x.div_int_exact(&p).expect("p divides x when 𝔓 | x");
        }
        // x·t̄/p lowers v_𝔓 by one and leaves the other prime above p alone
        (x * &self.uniformizer.conj())
            .div_int_exact(&p)
            .expect("x·t̄ is divisible by p when 𝔓 | x")
    }

    /// x/πᵉ for a fixed local uniformizer π, as an element of 𝒪_K with the
    /// same residue and valuation behaviour at 𝔓. `None` if v_𝔓(x) < e.
    pub fn divide_by_uniformizer_power(&self, x: &AlgInt, e: u32) -> Option<AlgInt> {
        let mut y = x.clone();
        for _ in 0..e {
            if !self.divides(&y) {
                return None;
            }
            if !y.is_zero() {
                y = self.shift_down(&y);
            }
        }
        Some(y)
    }

    /// Exact 𝔓-adic valuation of a nonzero ideal.
    pub fn ideal_valuation(&self, ideal: &Ideal) -> u32 {
        let mut cur = ideal.clone();
        let mut v = 0;
        while let Some(next) = cur.div(&self.hnf) {
            cur = next;
            v += 1;
        }
        v
    }
}

fn degree_one_prime(field: QuadField, p: u64, r: u64, ramified: bool) -> PrimeIdeal {
    // 𝔓 = (p, ω − r), with HNF basis {p, −r + ω}
    let n01 = (p - r) % p;
    let hnf = Ideal {
        field,
        n00: BigInt::from(p),
        n01: BigInt::from(n01),
        n11: BigInt::one(),
    };
    let pb = BigInt::from(p);
    let t0 = field.elem(-BigInt::from(r), 1).unwrap();
    let t = if (t0.norm() % (&pb * &pb)).is_zero() {
        &t0 + &field.int(pb.clone())
    } else {
        t0
    };
    PrimeIdeal {
        p,
        residue_degree: 1,
        ramified,
        hnf,
        root: Some(r),
        uniformizer: t,
    }
}

/// Roots of the minimal polynomial of ω modulo p, sorted.
fn omega_roots_mod(field: QuadField, p: u64) -> Vec<u64> {
    let (c1, c0) = field.omega_minpoly();
    let c1 = c1.rem_euclid(p as i64) as u64;
    let c0 = c0.rem_euclid(p as i64) as u64;
    let mut roots = if p == 2 {
        (0..2u64)
            .filter(|&t| (t * t + c1 * t + c0).is_multiple_of(2))
            .collect::<Vec<_>>()
    } else {
        // t = (−c1 ± √(c1² − 4c0)) / 2
        let disc = (mul_mod(c1, c1, p) as u128 + (p - mul_mod(4 % p, c0, p)) as u128) % p as u128;
        match sqrt_mod(disc as u64, p) {
            None => Vec::new(),
            Some(s) => {
                let inv2 = pow_mod(2, p - 2, p);
                let neg_c1 = (p - c1) % p;
                let r1 = mul_mod((neg_c1 + s) % p, inv2, p);
                let r2 = mul_mod((neg_c1 + p - s) % p, inv2, p);
                vec![r1, r2]
            }
        }
    };
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Decomposition of the rational prime p in 𝒪_K, as `(𝔓, e)` pairs sorted
/// by HNF.
pub fn factor_rational_prime(field: QuadField, p: u64) -> Vec<(PrimeIdeal, u32)> {
    if field.is_rationals() {
        let hnf = Ideal {
            field,
            n00: BigInt::from(p),
            n01: BigInt::zero(),
            n11: BigInt::one(),
        };
        return vec![(
            PrimeIdeal {
                p,
                residue_degree: 1,
                ramified: false,
                hnf,
                root: None,
                uniformizer: field.int(p),
            },
            1,
        )];
    }
    let roots = omega_roots_mod(field, p);
    let ramified = (field.disc() % p as i64) == 0;
    match roots.len() {
        0 => {
            let hnf = Ideal {
                field,
                n00: BigInt::from(p),
                n01: BigInt::zero(),
                n11: BigInt::from(p),
            };
            vec![(
                PrimeIdeal {
                    p,
                    residue_degree: 2,
                    ramified: false,
                    hnf,
                    root: None,
                    uniformizer: field.int(p),
                },
                1,
            )]
        }
        1 => {
            debug_assert!(ramified);
            vec![(degree_one_prime(field, p, roots[0], true), 2)]
        }
        _ => {
            let mut out: Vec<(PrimeIdeal, u32)> = roots
                .into_iter()
                .map(|r| (degree_one_prime(field, p, r, false), 1))
                .collect();
            out.sort_by(|x, y| x.0.hnf.cmp(&y.0.hnf));
            out
        }
    }
}

/// All prime ideals of norm at most `bound`, in canonical order.
pub fn primes_up_to_norm(field: QuadField, bound: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = crate::arith::primes_up_to(bound)
        .into_iter()
        .flat_map(|p| factor_rational_prime(field, p))
        .map(|(pr, _)| pr)
        .filter(|pr| pr.norm() <= bound as u128)
        .collect();
    out.sort();
    out
}

/// Prime ideals dividing a nonzero element, with exponents, in canonical order.
pub fn factor_element(x: &AlgInt) -> Result<Vec<(PrimeIdeal, u32)>> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut out = Vec::new();
    for (p, _) in factor_integer(&x.norm())? {
        for (pr, _) in factor_rational_prime(x.field(), p) {
            let v = pr.valuation(x)?;
            if v > 0 {
                out.push((pr, v));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Prime factorization of a nonzero ideal, in canonical order.
pub fn factor_ideal(ideal: &Ideal) -> Result<Vec<(PrimeIdeal, u32)>> {
    let mut out = Vec::new();
    for (p, _) in factor_integer(&ideal.norm())? {
        for (pr, _) in factor_rational_prime(ideal.field(), p) {
            let v = pr.ideal_valuation(ideal);
            if v > 0 {
                out.push((pr, v));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// True iff every prime divisor of `ideal` lies in `primes`. Implemented by
/// dividing out the listed primes and checking that nothing is left.
pub fn is_supported_on<'a, I>(ideal: &Ideal, primes: I) -> bool
where
    I: IntoIterator<Item = &'a PrimeIdeal>,
{
    let mut cur = ideal.clone();
    for pr in primes {
        while let Some(next) = cur.div(pr.ideal()) {
            cur = next;
        }
        if cur.is_unit() {
            return true;
        }
    }
    cur.is_unit()
}

/// Element version of [`is_supported_on`], with a cheap norm pre-filter.
pub fn element_supported_on(x: &AlgInt, primes: &[PrimeIdeal]) -> bool {
    if x.is_zero() {
        return false;
    }
    let mut n = x.norm().abs();
    let mut seen = Vec::new();
    for pr in primes {
        if seen.contains(&pr.p) {
            continue;
        }
        seen.push(pr.p);
        let bp = BigInt::from(pr.p);
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
        }
    }
    if !n.is_one() {
        return false;
    }
    if x.field().is_rationals() {
        return true;
    }
    is_supported_on(&Ideal::principal(x).unwrap(), primes)
}
