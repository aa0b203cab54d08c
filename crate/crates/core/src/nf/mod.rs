//! Exact arithmetic in ℚ and imaginary quadratic fields.

pub mod classgroup;
pub mod field;
pub mod ideal;
pub mod residue;

pub use classgroup::{IdealClassGroup, QuadForm};
pub use field::{AlgInt, OmegaRule, QuadField};
pub use ideal::{
    element_supported_on, factor_element, factor_ideal, factor_rational_prime, is_supported_on,
    primes_up_to_norm, Ideal, PrimeIdeal,
};
pub use residue::{Fq, ResidueField};
