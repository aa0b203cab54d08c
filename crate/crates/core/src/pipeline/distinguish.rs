//! Search for a prime whose Frobenius traces tell two curves apart mod p.

use rayon::prelude::*;

use super::search::{thread_pool, SearchOptions};
use crate::curve::{ReductionType, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::nf::{primes_up_to_norm, PrimeIdeal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguisher {
    pub prime: PrimeIdeal,
    pub a1: i128,
    pub a2: i128,
}

/// The first prime in canonical order (norm, then HNF) outside `avoid`, of
/// good reduction for both curves, with a₁ ≢ a₂ (mod p).
pub fn distinguishing_prime(
    e1: &WeierstrassCurve,
    e2: &WeierstrassCurve,
    p: u64,
    avoid: &[PrimeIdeal],
    norm_bound: u64,
    opts: &SearchOptions,
) -> Result<Distinguisher> {
    let field = e1.field();
    if e2.field() != field {
        return Err(Error::FieldMismatch);
    }
    if p < 2 {
        return Err(Error::Malformed("the modulus p must be at least 2".into()));
    }
    if e1.invariants().is_singular() || e2.invariants().is_singular() {
        return Err(Error::Singular("both curves must be nonsingular".into()));
    }
    let candidates: Vec<PrimeIdeal> = primes_up_to_norm(field, norm_bound)
        .into_iter()
        .filter(|l| !avoid.contains(l))
        .collect();
    let modulus = p as i128;
    let test = |l: &PrimeIdeal| -> Option<Result<Distinguisher>> {
        let good = |e: &WeierstrassCurve| matches!(e.reduction_type(l), Ok(ReductionType::Good));
        if !good(e1) || !good(e2) {
            return None;
        }
        let traces = e1.trace_a(l).and_then(|a1| Ok((a1, e2.trace_a(l)?)));
        match traces {
            Ok((a1, a2)) if (a1 - a2).rem_euclid(modulus) != 0 => Some(Ok(Distinguisher {
                prime: l.clone(),
                a1,
                a2,
            })),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    };
    let found = match thread_pool(opts.workers)? {
        Some(pool) => pool.install(|| candidates.par_iter().find_map_first(test)),
        None => candidates.iter().find_map(test),
    };
    found.unwrap_or_else(|| {
        Err(Error::NotFound(format!(
            "no prime of norm <= {norm_bound} separates the traces mod {p}"
        )))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{factor_rational_prime, QuadField};

    fn avoid_6(k: QuadField) -> Vec<PrimeIdeal> {
        [2, 3]
            .iter()
            .flat_map(|&p| factor_rational_prime(k, p))
            .map(|(p, _)| p)
            .collect()
    }

    #[test]
    fn x3_minus_x_against_x3_plus_1() {
        let q = QuadField::rationals();
        let e1 = WeierstrassCurve::from_ints(q, 0, -1, 0);
        let e2 = WeierstrassCurve::from_ints(q, 0, 0, 1);
        // y² = x³ − x has full 2-torsion so every a_ℓ is even; x³ + 1 has
        // the point (−1, 0), so its traces are even too.
        let r = distinguishing_prime(&e1, &e2, 2, &avoid_6(q), 200, &SearchOptions::default());
        assert!(matches!(r, Err(Error::NotFound(_))));
        // mod 3 they separate at 5
        let d =
            distinguishing_prime(&e1, &e2, 3, &avoid_6(q), 200, &SearchOptions::default()).unwrap();
        assert_eq!(d.prime.p(), 5);
        assert_eq!((d.a1, d.a2), (-2, 0));
    }

    #[test]
    fn parity_mismatch_over_q() {
        let q = QuadField::rationals();
        // y² = x³ + x + 1 has no rational 2-torsion (disc −31)
        let e1 = WeierstrassCurve::from_ints(q, 0, 1, 1);
        let e2 = WeierstrassCurve::from_ints(q, 0, -1, 0);
        let d = distinguishing_prime(
            &e1,
            &e2,
            2,
            &avoid_6(q),
            1000,
            &SearchOptions { workers: 4 },
        )
        .unwrap();
        assert_eq!(d.a1.rem_euclid(2), 1);
        assert_eq!(d.a2.rem_euclid(2), 0);
        let seq = distinguishing_prime(&e1, &e2, 2, &avoid_6(q), 1000, &SearchOptions::default())
            .unwrap();
        assert_eq!(d, seq);
    }

    #[test]
    fn identical_curves_never_separate() {
        let k = QuadField::new(-7).unwrap();
        let e = WeierstrassCurve::from_ints(k, 1, 2, 3);
        let r = distinguishing_prime(&e, &e, 2, &[], 300, &SearchOptions::default());
        assert!(matches!(r, Err(Error::NotFound(_))));
    }
}
