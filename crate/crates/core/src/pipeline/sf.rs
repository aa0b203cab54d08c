//! The exceptional set S_F = 𝓗_K ∪ {𝔭 | 2Δ_F} ∪ {real places}, and the
//! hypothesis "some 𝔮 exactly divides Δ_F with 𝔮 ∤ 2α₀".

use crate::cubic::BinaryCubic;
use crate::error::{Error, Result};
use crate::nf::{factor_element, IdealClassGroup, PrimeIdeal, QuadField};

/// Which ideal classes receive a representative prime in 𝓗_K.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HkPolicy {
    /// One prime for every non-principal class. A principal gcd is
    /// normalized to (1), so the principal class needs no representative.
    #[default]
    NonPrincipal,
    /// One prime for every class, principal class included.
    AllClasses,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkMember {
    pub class: usize,
    pub prime: PrimeIdeal,
}

#[derive(Clone, Debug)]
pub struct ExceptionalSet {
    field: QuadField,
    finite_primes: Vec<PrimeIdeal>,
    hk_members: Vec<HkMember>,
    real_places: u32,
    policy: HkPolicy,
}

impl ExceptionalSet {
    /// An explicit set of finite primes with no 𝓗_K bookkeeping.
    pub fn from_primes(field: QuadField, mut primes: Vec<PrimeIdeal>) -> Self {
        primes.sort();
        primes.dedup();
        ExceptionalSet {
            field,
            finite_primes: primes,
            hk_members: Vec::new(),
            real_places: real_places(field),
            policy: HkPolicy::default(),
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// Finite primes in canonical order.
    pub fn finite_primes(&self) -> &[PrimeIdeal] {
        &self.finite_primes
    }

    pub fn hk_members(&self) -> &[HkMember] {
        &self.hk_members
    }

    pub fn real_places(&self) -> u32 {
        self.real_places
    }

    pub fn policy(&self) -> HkPolicy {
        self.policy
    }

    pub fn contains(&self, p: &PrimeIdeal) -> bool {
        self.finite_primes.binary_search(p).is_ok()
    }

    /// The 𝓗_K prime chosen for a class, if any.
    pub fn hk_for_class(&self, class: usize) -> Option<&PrimeIdeal> {
        self.hk_members
            .iter()
            .find(|m| m.class == class)
            .map(|m| &m.prime)
    }
}

fn real_places(field: QuadField) -> u32 {
    if field.is_rationals() {
        1
    } else if field.is_imaginary() {
        0
    } else {
        2
    }
}

/// Prime ideals dividing 2Δ_F, in canonical order.
pub fn bad_primes(f: &BinaryCubic) -> Result<Vec<PrimeIdeal>> {
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::Degenerate("the form has zero discriminant".into()));
    }
    let two_disc = &f.field().int(2) * &disc;
    Ok(factor_element(&two_disc)?
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

pub fn build_sf(f: &BinaryCubic, class_bound: u64) -> Result<ExceptionalSet> {
    build_sf_with_policy(f, class_bound, HkPolicy::default())
}

pub fn build_sf_with_policy(
    f: &BinaryCubic,
    class_bound: u64,
    policy: HkPolicy,
) -> Result<ExceptionalSet> {
    let field = f.field();
    let group = IdealClassGroup::new(field)?;
    let mut primes = bad_primes(f)?;
    let mut hk_members = Vec::new();
    if group.class_number() > 1 {
        let first = match policy {
            HkPolicy::NonPrincipal => 1,
            HkPolicy::AllClasses => 0,
        };
        for class in first..group.class_number() {
            let prime = group.smallest_prime_in_class(class, &[], class_bound, true)?;
            primes.push(prime.clone());
            hk_members.push(HkMember { class, prime });
        }
    }
    let mut set = ExceptionalSet::from_primes(field, primes);
    set.hk_members = hk_members;
    set.policy = policy;
    Ok(set)
}

/// Every 𝔮 with v_𝔮(Δ_F) = 1 and 𝔮 ∤ 2α₀. Empty means the hypothesis fails.
pub fn theorem_hypothesis(f: &BinaryCubic) -> Result<Vec<PrimeIdeal>> {
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(Error::Degenerate("the form has zero discriminant".into()));
    }
    let two_a0 = &f.field().int(2) * f.coeff(0);
    // every prime divides 0
    if two_a0.is_zero() {
        return Ok(Vec::new());
    }
    Ok(factor_element(&disc)?
        .into_iter()
        .filter(|(q, e)| *e == 1 && q.valuation(&two_a0).unwrap() == 0)
        .map(|(q, _)| q)
        .collect())
}
