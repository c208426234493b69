//! Exact computation of F-pure thresholds of hypersurfaces over prime fields
//! and certification of plus-pure threshold bounds in mixed characteristic.

pub mod cli;
pub mod error;
pub mod exact;
pub mod fpt;
pub mod padic;
pub mod poly;
pub mod ppt;

pub use error::{Error, Result};
pub use exact::{BasePExpansion, Prime, Rat};
