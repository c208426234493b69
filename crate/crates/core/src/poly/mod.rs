//! Sparse polynomials over `F_p` and over mixed-characteristic coefficient
//! rings, plus membership in weighted monomial ideals.

mod fp;
mod ideal;
pub mod json;
mod mixed;
mod monomial;

pub use fp::SparsePolyFp;
pub use ideal::{
    has_unit_coefficients, power_in_ideal, power_in_ideal_exact, weighted_membership, Membership, TermWitness,
    WeightedMonomialIdeal,
};
pub use mixed::{MixedPoly, TermKey, Uniformizer};
pub use monomial::{format_monomial, Monomial};

/// `h` with `h^p = f` over `F_p`, if one exists.
pub fn pth_root_mod_fp(f: &SparsePolyFp) -> Option<SparsePolyFp> {
    f.pth_root()
}

/// Exact `f^n`.
pub fn pow_mixed(f: &MixedPoly, n: u32) -> MixedPoly {
    f.pow(n)
}

/// `f` modulo the uniformizer.
pub fn reduce_mod_pi(f: &MixedPoly) -> SparsePolyFp {
    f.reduce_mod_pi()
}
