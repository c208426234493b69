use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Prime;
use crate::poly::{MixedPoly, Uniformizer};

/// The coefficient ring and ambient power series ring a threshold refers to.
///
/// `ram_level = a` means the coefficient ring is `W(k)[p^{1/p^a}]`. With
/// `cyclotomic` set it is `W(k)[ζ_p]` with uniformizer `ζ_p - 1`, and the
/// ramification level must be 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RingContext {
    pub p: Prime,
    pub ram_level: u32,
    pub n_vars: usize,
    pub cyclotomic: bool,
}

impl RingContext {
    pub fn new(p: Prime, ram_level: u32, n_vars: usize, cyclotomic: bool) -> Result<Self> {
        if cyclotomic && ram_level > 0 {
            return Err(Error::invalid("a cyclotomic base cannot also be ramified"));
        }
        Ok(RingContext {
            p,
            ram_level,
            n_vars,
            cyclotomic,
        })
    }

    pub fn unramified(p: Prime, n_vars: usize) -> Self {
        RingContext {
            p,
            ram_level: 0,
            n_vars,
            cyclotomic: false,
        }
    }

    pub fn of(f: &MixedPoly) -> Self {
        RingContext {
            p: f.p(),
            ram_level: f.ram_level(),
            n_vars: f.nvars(),
            cyclotomic: f.is_cyclotomic(),
        }
    }

    pub fn uniformizer(&self) -> Uniformizer {
        if self.cyclotomic {
            Uniformizer::Cyclotomic
        } else {
            Uniformizer::Root { level: self.ram_level }
        }
    }

    /// Same ring after adjoining further roots of `p`.
    pub fn at_level(&self, a: u32) -> Self {
        RingContext { ram_level: a, ..*self }
    }

    /// `p^a`, the π-order of `p` (or `p - 1` for the cyclotomic uniformizer).
    pub fn weight(&self) -> Result<u64> {
        if self.cyclotomic {
            Ok(self.p.get() - 1)
        } else {
            self.p.pow(self.ram_level)
        }
    }

    pub(crate) fn check(&self, f: &MixedPoly) -> Result<()> {
        if f.p() != self.p {
            return Err(Error::invalid(format!(
                "polynomial is over p = {}, ring is over p = {}",
                f.p(),
                self.p
            )));
        }
        if f.uniformizer() != self.uniformizer() {
            return Err(Error::invalid("polynomial and ring use different uniformizers"));
        }
        if f.nvars() != self.n_vars {
            return Err(Error::invalid(format!(
                "polynomial has {} variables, ring has {}",
                f.nvars(),
                self.n_vars
            )));
        }
        Ok(())
    }
}
