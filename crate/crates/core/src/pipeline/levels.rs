//! Candidate Serre levels: ideals supported on S with
//! v_𝔞(𝒩) ≤ 2 + 3·v_𝔞(3) + 6·v_𝔞(2) at each finite prime 𝔞.

use super::sf::ExceptionalSet;
use crate::error::{Error, Result};
use crate::nf::{Ideal, PrimeIdeal};

pub const DEFAULT_LEVEL_CAP: u128 = 100_000;

/// The exponent bound 2 + 3·v_𝔞(3) + 6·v_𝔞(2).
pub fn exponent_bound(p: &PrimeIdeal) -> u32 {
    let e = p.ramification_index();
    match p.p() {
        2 => 2 + 6 * e,
        3 => 2 + 3 * e,
        _ => 2,
    }
}

/// ∏(bound + 1) over the finite primes of S, saturating.
pub fn candidate_count(s: &ExceptionalSet) -> u128 {
    s.finite_primes().iter().fold(1u128, |acc, p| {
        acc.saturating_mul(exponent_bound(p) as u128 + 1)
    })
}

pub fn serre_level_candidates(s: &ExceptionalSet, cap: u128) -> Result<Vec<Ideal>> {
    let count = candidate_count(s);
    if count > cap {
        return Err(Error::SetTooLarge { count, cap });
    }
    let mut out = vec![Ideal::unit(s.field())];
    for p in s.finite_primes() {
        let mut next = Vec::with_capacity(out.len() * (exponent_bound(p) as usize + 1));
        for base in &out {
            let mut cur = base.clone();
            next.push(cur.clone());
            for _ in 0..exponent_bound(p) {
                cur = cur.mul(p.ideal());
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}
