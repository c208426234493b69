//! F-pure thresholds over `F_p`: closed forms for diagonal hypersurfaces and
//! verified brackets for arbitrary polynomials.

mod diagonal;
mod oracle;

pub use diagonal::{compute_l, fpt_diagonal, fpt_fermat, fpt_numerator, lct_diagonal, DiagonalData, LValue};
pub use oracle::{
    frobenius_nu, frobenius_nu_direct, frobenius_nus, max_terms_limit, oracle_bracket, oracle_brackets, FptBracket,
    DEFAULT_MAX_TERMS, MAX_TERMS_ENV,
};

use crate::exact::Rat;
use crate::poly::SparsePolyFp;

/// Exact threshold when a closed form applies: a linear term makes the
/// hypersurface smooth (threshold 1), and diagonal polynomials use the digit
/// formula. Coefficients do not matter for diagonal shapes since each
/// monomial of a power arises from exactly one multinomial index.
pub fn fpt_closed_form(f: &SparsePolyFp) -> Option<Rat> {
    if f.is_zero() || f.has_constant_term() {
        return None;
    }
    if f.has_linear_term() {
        return Some(Rat::one());
    }
    let diag = f.diagonal_exponents()?;
    let d = DiagonalData::new(f.p(), diag.into_iter().map(|(_, s)| s).collect()).ok()?;
    Some(fpt_diagonal(&d))
}
