//! Certified bounds on plus-pure thresholds in mixed characteristic.
//!
//! Each rule checks its hypotheses on the input and reports a lower or upper
//! bound (or abstains). The engine combines the bounds, cross-checks them and
//! records every rule that fired.

mod certificate;
mod context;
pub mod cyclotomic;
mod engine;
mod profile;
mod roots;
mod rules;
mod shapes;

pub use certificate::{Bound, BoundCertificate, CertificateInput, RuleRecord};
pub use context::RingContext;
pub use engine::{certify, has_required_bound, CertifyOptions};
pub use profile::{limit_profile, LimitProfile, ProfileEntry};
pub use roots::{pth_root_modulo, pth_root_upper_modulus};
pub use shapes::{
    all_vars_occur, floor_log_p, log_p, match_diagonal, match_elliptic, match_extremal, DiagonalShape, EllipticForm,
    ExtremalMatch, Family,
};
