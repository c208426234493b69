//! Exact rationals, primes and base-`p` expansions.

mod expansion;
mod prime;
mod rat;

pub use expansion::BasePExpansion;
pub use prime::{is_prime, Prime};
pub use rat::Rat;

/// Convenience wrapper for [`BasePExpansion::new`].
pub fn expand_base_p(x: &Rat, p: Prime) -> crate::Result<BasePExpansion> {
    BasePExpansion::new(x, p)
}
